"""Reference elements on the cube [-1, 1]^n.

Each element family is described by its shape-space monomials and a list of
degree-of-freedom functionals (point values / derivatives at vertices,
second normal derivatives at face centers).  The nodal basis dual to the
DoFs is computed by exact rational inversion of the DoF-monomial matrix, so
the Kronecker-delta property holds exactly.

Reference DoFs use xi-derivatives (unit half-lengths); the physical
functionals are recovered at map time by the h-power scalings stored in the
finite element space.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .polynomials import Polynomial, det, invert

__all__ = [
    "Family", "Q1", "ADINI_CLASSIC", "MORLEY", "ADINI_TYPE",
    "partial_adini", "family_from_name",
    "DofFunctional", "ReferenceElement",
    "shape_space", "dof_set", "build_dual_basis",
    "morley_closed_form", "q1_closed_form", "dof_matrix",
    "unisolvence_determinant", "apply_dof", "reference_vertices",
]


@dataclass(frozen=True)
class Family:
    """Element family tag; ``axis`` is set only for the partial Adini element."""

    name: str
    axis: int | None = None

    def __str__(self):
        if self.axis is not None:
            return f"{self.name}[{self.axis}]"
        return self.name


Q1 = Family("q1")
ADINI_CLASSIC = Family("adini-classic")
MORLEY = Family("morley")
ADINI_TYPE = Family("adini")


def partial_adini(axis: int) -> Family:
    return Family("partial-adini", axis)


def family_from_name(name: str, axis: int | None = None) -> Family:
    name = name.lower()
    table = {
        "q1": Q1,
        "adini-classic": ADINI_CLASSIC,
        "adini": ADINI_TYPE,
        "adini-type": ADINI_TYPE,
        "morley": MORLEY,
        "morley-type": MORLEY,
    }
    if name in table:
        return table[name]
    if name == "partial-adini":
        if axis is None:
            raise ValueError("partial-adini requires an axis")
        return partial_adini(axis)
    raise ValueError(f"unknown element family {name!r}")


@dataclass(frozen=True)
class DofFunctional:
    """A nodal linear functional.

    kind:
      - "value":   point value at a vertex
      - "grad":    first derivative along ``axis`` at a vertex
      - "second":  pure second derivative along ``axis`` at a vertex
      - "face_nn": second normal derivative at the center of face (axis, side)
    """

    kind: str
    vertex: int | None = None
    axis: int | None = None
    side: int | None = None

    @property
    def order(self) -> int:
        return {"value": 0, "grad": 1, "second": 2, "face_nn": 2}[self.kind]

    def scaling_axis(self) -> int | None:
        """Axis whose half-length scales this functional (None for values)."""
        return None if self.kind == "value" else self.axis


def reference_vertices(n: int) -> list[tuple[int, ...]]:
    """Vertex sign patterns in lexicographic order, (-1,...,-1) first."""
    return list(itertools.product((-1, 1), repeat=n))


def apply_dof(dof: DofFunctional, poly: Polynomial, n: int) -> Fraction:
    """Apply a reference DoF functional to a polynomial, exactly."""
    verts = reference_vertices(n)
    if dof.kind == "value":
        return poly(verts[dof.vertex])
    if dof.kind == "grad":
        return poly.diff(dof.axis, 1)(verts[dof.vertex])
    if dof.kind == "second":
        return poly.diff(dof.axis, 2)(verts[dof.vertex])
    if dof.kind == "face_nn":
        center = tuple(
            Fraction(dof.side) if i == dof.axis else Fraction(0) for i in range(n)
        )
        return poly.diff(dof.axis, 2)(center)
    raise ValueError(f"unknown DoF kind {dof.kind!r}")


# -- shape spaces ----------------------------------------------------------

def _dedup(monomials):
    seen, out = set(), []
    for m in monomials:
        if m not in seen:
            seen.add(m)
            out.append(m)
    return out


def shape_space(family: Family, n: int) -> list[tuple[int, ...]]:
    """Monomial exponent tuples spanning the shape space."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    q1 = list(itertools.product((0, 1), repeat=n))

    def shifted(extra):
        out = []
        for base in q1:
            out.append(tuple(b + e for b, e in zip(base, extra)))
        return out

    axis_unit = [tuple(2 * (i == j) for j in range(n)) for i in range(n)]

    if family.name == "q1":
        return q1
    if family.name == "adini-classic":
        mono = list(q1)
        for e in axis_unit:
            mono += shifted(e)
        return _dedup(mono)
    if family.name == "partial-adini":
        if family.axis is None or not 0 <= family.axis < n:
            raise ValueError("partial-adini axis out of range")
        return _dedup(q1 + shifted(axis_unit[family.axis]))
    if family.name == "morley":
        mono = list(q1)
        for e in axis_unit:
            mono += shifted(e)
        for i in range(n):
            mono.append(tuple(4 * (i == j) for j in range(n)))
            mono.append(tuple(5 * (i == j) for j in range(n)))
        return _dedup(mono)
    if family.name == "adini":
        mono = list(q1)
        for e in axis_unit:
            mono += shifted(e)
            mono += shifted(tuple(2 * v for v in e))
        return _dedup(mono)
    raise ValueError(f"unknown family {family}")


def dof_set(family: Family, n: int) -> list[DofFunctional]:
    """Ordered DoF list: vertex blocks (lexicographic), then face DoFs."""
    nv = 2 ** n
    dofs: list[DofFunctional] = []
    if family.name == "q1":
        return [DofFunctional("value", vertex=v) for v in range(nv)]
    if family.name == "adini-classic":
        for v in range(nv):
            dofs.append(DofFunctional("value", vertex=v))
            dofs += [DofFunctional("grad", vertex=v, axis=j) for j in range(n)]
        return dofs
    if family.name == "partial-adini":
        i = family.axis
        if i is None or not 0 <= i < n:
            raise ValueError("partial-adini axis out of range")
        for v in range(nv):
            dofs.append(DofFunctional("value", vertex=v))
            dofs.append(DofFunctional("grad", vertex=v, axis=i))
        return dofs
    if family.name == "morley":
        for v in range(nv):
            dofs.append(DofFunctional("value", vertex=v))
            dofs += [DofFunctional("grad", vertex=v, axis=j) for j in range(n)]
        for k in range(n):
            for side in (-1, 1):
                dofs.append(DofFunctional("face_nn", axis=k, side=side))
        return dofs
    if family.name == "adini":
        for v in range(nv):
            dofs.append(DofFunctional("value", vertex=v))
            dofs += [DofFunctional("grad", vertex=v, axis=j) for j in range(n)]
            dofs += [DofFunctional("second", vertex=v, axis=j) for j in range(n)]
        return dofs
    raise ValueError(f"unknown family {family}")


def dof_matrix(family: Family, n: int):
    """Generalized Vandermonde matrix: V[j][m] = dof_j(monomial_m)."""
    monomials = shape_space(family, n)
    dofs = dof_set(family, n)
    if len(monomials) != len(dofs):
        raise ValueError(
            f"{family} at n={n}: {len(monomials)} monomials vs {len(dofs)} DoFs"
        )
    return [
        [apply_dof(d, Polynomial.monomial(n, m), n) for m in monomials]
        for d in dofs
    ]


@dataclass
class ReferenceElement:
    """Immutable reference element with nodal basis dual to the DoFs."""

    dim: int
    family: Family
    monomials: list[tuple[int, ...]]
    dofs: list[DofFunctional]
    basis: list[Polynomial]
    _eval_cache: dict = field(default_factory=dict, repr=False)

    @property
    def n_dofs(self) -> int:
        return len(self.dofs)

    def max_degree_per_axis(self) -> int:
        return max(max(m) for m in self.monomials)

    def eval_shape(self, deriv: tuple[int, ...], points: np.ndarray) -> np.ndarray:
        """Evaluate d^deriv of every basis function: matrix [n_points, n_dofs].

        Derivative orders above 3 are outside the library contract.
        """
        deriv = tuple(int(d) for d in deriv)
        if len(deriv) != self.dim:
            raise ValueError("derivative multi-index has wrong length")
        if sum(deriv) > 3:
            raise ValueError("derivative order > 3 not supported")
        pts = np.ascontiguousarray(np.asarray(points, dtype=float))
        if pts.ndim == 1:
            pts = pts[None, :]
        key = (deriv, pts.shape, pts.tobytes())
        hit = self._eval_cache.get(key)
        if hit is not None:
            return hit
        out = np.empty((pts.shape[0], self.n_dofs))
        for a, phi in enumerate(self.basis):
            out[:, a] = phi.diff_multi(deriv).eval_grid(pts)
        out.setflags(write=False)
        self._eval_cache[key] = out
        return out


_element_cache: dict[tuple[Family, int], ReferenceElement] = {}


def build_dual_basis(family: Family, n: int) -> ReferenceElement:
    """Build (and cache) the reference element with its exact nodal basis."""
    key = (family, n)
    if key in _element_cache:
        return _element_cache[key]
    monomials = shape_space(family, n)
    dofs = dof_set(family, n)
    vmat = dof_matrix(family, n)
    try:
        coeffs = invert(vmat)  # columns give nodal basis coefficients
    except ZeroDivisionError as exc:
        raise ValueError(
            f"singular DoF matrix for {family} at n={n}: "
            "shape space and DoF set do not pair"
        ) from exc
    basis = []
    for i in range(len(dofs)):
        terms = {m: coeffs[mi][i] for mi, m in enumerate(monomials)}
        basis.append(Polynomial(n, terms))
    elem = ReferenceElement(n, family, monomials, dofs, basis)
    _element_cache[key] = elem
    return elem


def unisolvence_determinant(family: Family, n: int) -> Fraction:
    """Exact determinant of the DoF-monomial matrix."""
    return det(dof_matrix(family, n))


# -- closed forms ----------------------------------------------------------

def q1_closed_form(n: int) -> list[Polynomial]:
    """Multilinear nodal basis p_0i = 2^-n prod(1 + s_ij xi_j)."""
    out = []
    for signs in reference_vertices(n):
        p = Polynomial.constant(n, Fraction(1, 2 ** n))
        for j, s in enumerate(signs):
            p = p * (Polynomial.constant(n, 1) + s * Polynomial.variable(n, j))
        out.append(p)
    return out


def morley_closed_form(n: int) -> list[Polynomial]:
    """Closed-form Morley-type nodal basis with unit half-lengths.

    Returned in the same order as ``dof_set(MORLEY, n)``: per vertex
    [value, grad_1..grad_n], then face functions per axis (-, +).
    """
    if n < 2:
        raise ValueError("Morley-type closed form needs n >= 2")
    one = Polynomial.constant(n, 1)
    xis = [Polynomial.variable(n, k) for k in range(n)]
    basis: list[Polynomial] = []
    for signs in reference_vertices(n):
        prod = one
        for k, s in enumerate(signs):
            prod = prod * (one + s * xis[k])
        head = Polynomial.constant(n, 2)
        for k, s in enumerate(signs):
            head = head + s * xis[k] - xis[k] * xis[k]
        p0 = Fraction(1, 2 ** (n + 1)) * (head * prod)
        for k, s in enumerate(signs):
            bump = (xis[k] * xis[k] - one) ** 2
            p0 = p0 + Fraction(3 * s, 2 ** (n + 3)) * (xis[k] * bump)
        basis.append(p0)
        for j, sj in enumerate(signs):
            w = (xis[j] * xis[j] - one)
            pj = Fraction(sj, 2 ** (n + 1)) * (w * prod)
            corr = (Polynomial.constant(n, sj) + 3 * xis[j]) * (w * w)
            pj = pj - Fraction(1, 2 ** (n + 3)) * corr
            basis.append(pj)
    for k in range(n):
        for side in (-1, 1):
            w = (xis[k] + one) ** 2 * (xis[k] - one) ** 2
            r = Fraction(side, 16) * (w * (xis[k] + side * one))
            basis.append(r)
    return basis
