"""Interpolation operators onto the global finite element spaces.

``canonical_interpolate`` matches every DoF of a smooth function (needs its
derivatives).  ``quasi_interpolate`` needs point values only: cell-wise L2
projection onto the shape space followed by averaging of shared DoFs over
the incident cells, with an optional homogeneous-boundary variant.
"""

from __future__ import annotations

import numpy as np

from .assembly import gauss_rule
from .cases import ManufacturedCase
from .space import FeSpace

__all__ = ["canonical_interpolate", "quasi_interpolate", "boundary_values_from_case"]


def canonical_interpolate(space: FeSpace, case: ManufacturedCase) -> np.ndarray:
    """Coefficient vector whose global DoFs equal the physical functionals
    of the exact solution (value, gradient, pure second, face normal second).
    """
    coeffs = np.empty(space.n_dofs)
    # group dofs by (kind, axis) so each derivative is evaluated in one call
    groups: dict[tuple, list[int]] = {}
    for gi, ka in enumerate(space.dof_kind):
        groups.setdefault(ka, []).append(gi)
    n = space.dim
    for (kind, axis), idx in groups.items():
        idx = np.asarray(idx)
        pts = space.dof_points[idx]
        if kind == "value":
            alpha = (0,) * n
        elif kind == "grad":
            alpha = tuple(1 if i == axis else 0 for i in range(n))
        else:  # "second" and "face_nn" are both pure second derivatives
            alpha = tuple(2 if i == axis else 0 for i in range(n))
        coeffs[idx] = case.derivative(alpha, pts)
    return coeffs


def boundary_values_from_case(space: FeSpace, case: ManufacturedCase) -> np.ndarray:
    """Essential boundary data: canonical DoF values of the exact solution."""
    return canonical_interpolate(space, case)[space.boundary_dofs()]


def quasi_interpolate(space: FeSpace, u, q: int = 8,
                      zero_boundary: bool = False) -> np.ndarray:
    """Projection-averaging interpolant from point values of ``u``.

    Per cell, solve the local mass system for the L2 projection onto the
    shape space; every shared DoF is then the plain average of the incident
    cells' DoF readings of their projections.  With ``zero_boundary`` the
    boundary DoFs are set to zero (the V_h0 variant).
    """
    mesh = space.mesh
    elem = space.element
    rule = gauss_rule(q, mesh.dim)
    phi = elem.eval_shape((0,) * mesh.dim, rule.points)
    mass = phi.T @ (rule.weights[:, None] * phi)  # reference cell; Jacobian cancels
    try:
        mass_inv = np.linalg.inv(mass)
    except np.linalg.LinAlgError as exc:
        raise ValueError("singular local mass matrix") from exc

    centers = mesh.cell_centers
    half = mesh.cell_half_lengths
    pts = centers[:, None, :] + half[:, None, :] * rule.points[None, :, :]
    uv = np.asarray(u(pts.reshape(-1, mesh.dim))).reshape(mesh.n_cells, -1)
    rhs = uv @ (rule.weights[:, None] * phi)       # [nc, nloc]
    ref_coeffs = rhs @ mass_inv.T                  # reference DoFs of projections

    # physical DoF reading of the projection = ref coefficient / scaling
    readings = ref_coeffs / space.cell_scalings
    acc = np.zeros(space.n_dofs)
    cnt = np.zeros(space.n_dofs)
    np.add.at(acc, space.cell_dof_indices.ravel(), readings.ravel())
    np.add.at(cnt, space.cell_dof_indices.ravel(), 1.0)
    coeffs = acc / cnt
    if zero_boundary:
        coeffs[space.boundary_mask] = 0.0
    return coeffs
