"""Tensor-product Gauss quadrature and sparse assembly of the broken
tri-harmonic bilinear form.

The form sums the squared third gradient over all ordered index triples;
assembly loops over distinct third-order multi-indices alpha weighted by the
multinomial multiplicity 3!/alpha! instead, which is the identical sum.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .reference import ReferenceElement
from .space import FeSpace

__all__ = [
    "GaussRule", "gauss_rule", "derivative_multiindices",
    "element_stiffness", "element_load", "assemble",
    "SparseSymSystem", "ReducedSystem", "apply_dirichlet",
]


@dataclass(frozen=True)
class GaussRule:
    dim: int
    q: int
    points: np.ndarray   # [m, dim]
    weights: np.ndarray  # [m]


_rule_cache: dict[tuple[int, int], GaussRule] = {}


def gauss_rule(q: int, n: int) -> GaussRule:
    """Tensor product of the q-point 1D Gauss-Legendre rule on [-1,1]^n."""
    if q < 1:
        raise ValueError("need at least one point per axis")
    key = (q, n)
    if key in _rule_cache:
        return _rule_cache[key]
    x, w = np.polynomial.legendre.leggauss(q)
    pts = np.array(list(itertools.product(x, repeat=n)))
    wts = np.prod(np.array(list(itertools.product(w, repeat=n))), axis=1)
    pts.setflags(write=False)
    wts.setflags(write=False)
    rule = GaussRule(n, q, pts, wts)
    _rule_cache[key] = rule
    return rule


def derivative_multiindices(n: int, order: int) -> list[tuple[tuple[int, ...], int]]:
    """Distinct multi-indices of the given total order with multiplicities
    order!/alpha! (the number of ordered derivative tuples they stand for)."""
    out = []
    for alpha in itertools.product(range(order + 1), repeat=n):
        if sum(alpha) != order:
            continue
        mult = math.factorial(order)
        for a in alpha:
            mult //= math.factorial(a)
        out.append((alpha, mult))
    return out


def _check_stiffness_rule(elem: ReferenceElement, rule: GaussRule):
    # integrands are products of two shape derivatives: per-variable degree
    # up to twice the shape degree; the q-point rule is exact to 2q-1
    need = 2 * elem.max_degree_per_axis()
    if 2 * rule.q - 1 < need:
        raise ValueError(
            f"quadrature q={rule.q} insufficient for per-variable degree {need}"
        )


_ref_grammian_cache: dict[tuple, np.ndarray] = {}


def _reference_grammian(elem: ReferenceElement, alpha: tuple, rule: GaussRule):
    """G[a, b] = sum_p w_p d^alpha phi_a(xi_p) d^alpha phi_b(xi_p)."""
    key = (id(elem), alpha, rule.q)
    g = _ref_grammian_cache.get(key)
    if g is None:
        d = elem.eval_shape(alpha, rule.points)
        g = d.T @ (rule.weights[:, None] * d)
        _ref_grammian_cache[key] = g
    return g


def element_stiffness(cell_half_lengths, elem: ReferenceElement,
                      rule: GaussRule) -> np.ndarray:
    """Element matrix of the tri-harmonic form in physical coordinates.

    Entries are taken against the reference nodal basis; the h^order DoF
    scalings are applied on both sides during global assembly.
    """
    _check_stiffness_rule(elem, rule)
    h = np.asarray(cell_half_lengths, dtype=float)
    jac = float(np.prod(h))
    k = np.zeros((elem.n_dofs, elem.n_dofs))
    for alpha, mult in derivative_multiindices(elem.dim, 3):
        chain = float(np.prod(h ** (-2 * np.array(alpha))))
        k += (mult * jac * chain) * _reference_grammian(elem, alpha, rule)
    return k


def element_load(cell_center, cell_half_lengths, elem: ReferenceElement,
                 rule: GaussRule, f) -> np.ndarray:
    """Load vector F[a] = integral of f * phi_a over the physical cell."""
    c = np.asarray(cell_center, dtype=float)
    h = np.asarray(cell_half_lengths, dtype=float)
    x = c + h * rule.points
    vals = np.asarray(f(x), dtype=float)
    phi = elem.eval_shape((0,) * elem.dim, rule.points)
    return float(np.prod(h)) * (phi.T @ (rule.weights * vals))


@dataclass
class SparseSymSystem:
    """Assembled global system prior to boundary elimination."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    space: FeSpace

    @property
    def n(self) -> int:
        return self.rhs.shape[0]


def _cell_groups(space: FeSpace):
    """Group cells sharing identical half-lengths (one element matrix each)."""
    half = space.mesh.cell_half_lengths
    keys = [tuple(np.round(h, 14)) for h in half]
    groups: dict[tuple, list[int]] = {}
    for ci, key in enumerate(keys):
        groups.setdefault(key, []).append(ci)
    return groups


def assemble(space: FeSpace, f, stiffness_rule: GaussRule,
             load_rule: GaussRule | None = None) -> SparseSymSystem:
    """Assemble the global stiffness matrix and load vector.

    ``f`` maps an array of points [m, dim] to values [m]; pass None for a
    zero right-hand side.
    """
    mesh = space.mesh
    elem = space.element
    load_rule = load_rule or stiffness_rule
    nloc = elem.n_dofs

    rows, cols, vals = [], [], []
    rhs = np.zeros(space.n_dofs)

    phi0 = elem.eval_shape((0,) * elem.dim, load_rule.points)
    wphi = load_rule.weights[:, None] * phi0

    for hkey, cells in _cell_groups(space).items():
        k_ref = element_stiffness(hkey, elem, stiffness_rule)
        jac = float(np.prod(hkey))
        cells = np.asarray(cells)
        gidx = space.cell_dof_indices[cells]          # [nc, nloc]
        scale = space.cell_scalings[cells]            # [nc, nloc]
        # scaled element matrices, all cells of the group at once
        kscaled = scale[:, :, None] * k_ref[None, :, :] * scale[:, None, :]
        rows.append(np.repeat(gidx, nloc, axis=1).ravel())
        cols.append(np.tile(gidx, (1, nloc)).ravel())
        vals.append(kscaled.ravel())
        if f is not None:
            centers = mesh.cell_centers[cells]
            h = np.asarray(hkey)
            # physical quadrature points for every cell in the group
            pts = centers[:, None, :] + h[None, None, :] * load_rule.points[None, :, :]
            fv = np.asarray(f(pts.reshape(-1, mesh.dim))).reshape(len(cells), -1)
            fe = jac * (fv @ wphi)                    # [nc, nloc]
            np.add.at(rhs, gidx.ravel(), (scale * fe).ravel())

    mat = sp.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(space.n_dofs, space.n_dofs),
    ).tocsr()
    return SparseSymSystem(mat, rhs, space)


@dataclass
class ReducedSystem:
    """System restricted to free DoFs after symmetric boundary elimination."""

    matrix: sp.csr_matrix
    rhs: np.ndarray
    free: np.ndarray
    boundary: np.ndarray
    boundary_values: np.ndarray
    n_total: int

    def reconstruct(self, x_free: np.ndarray) -> np.ndarray:
        full = np.empty(self.n_total)
        full[self.free] = x_free
        full[self.boundary] = self.boundary_values
        return full


def apply_dirichlet(system: SparseSymSystem,
                    boundary_values: np.ndarray) -> ReducedSystem:
    """Eliminate boundary DoFs symmetrically.

    ``boundary_values`` holds one value per boundary DoF, in the order of
    ``space.boundary_dofs()``.
    """
    space = system.space
    bd = space.boundary_dofs()
    free = space.free_dofs()
    g = np.asarray(boundary_values, dtype=float)
    if g.shape != bd.shape:
        raise ValueError("boundary value vector has wrong length")
    a = system.matrix
    rhs = system.rhs[free] - a[free][:, bd] @ g
    return ReducedSystem(
        matrix=a[free][:, free].tocsr(),
        rhs=rhs,
        free=free,
        boundary=bd,
        boundary_values=g,
        n_total=system.n,
    )


def dump_matrix(matrix: sp.spmatrix, stream):
    """Coordinate-format text dump (row, col, value) for inspection."""
    coo = matrix.tocoo()
    stream.write(f"{coo.shape[0]} {coo.shape[1]} {coo.nnz}\n")
    for r, c, v in zip(coo.row, coo.col, coo.data):
        stream.write(f"{r} {c} {v:.17e}\n")
