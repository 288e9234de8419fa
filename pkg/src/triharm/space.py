"""Global finite element spaces: DoF enumeration and cell-to-global maps.

Global coefficients store *physical* DoF values (point values, first /
pure-second derivatives in x, second normal derivatives at face centers).
The reference nodal basis carries xi-derivatives, so the cell map stores a
scaling h_axis^order per local DoF: the reference coefficient of basis
function a on a cell is  scaling_a * (physical DoF value).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .mesh import StructuredMesh
from .reference import Family, ReferenceElement, build_dual_basis

__all__ = ["FeSpace", "build_space"]

def _vertex_kinds(family: Family, n: int) -> list[tuple[str, int | None]]:
    if family.name == "q1":
        return [("value", None)]
    if family.name == "adini-classic":
        return [("value", None)] + [("grad", j) for j in range(n)]
    if family.name == "partial-adini":
        return [("value", None), ("grad", family.axis)]
    if family.name == "morley":
        return [("value", None)] + [("grad", j) for j in range(n)]
    if family.name == "adini":
        return ([("value", None)] + [("grad", j) for j in range(n)]
                + [("second", j) for j in range(n)])
    raise ValueError(f"unknown family {family}")


@dataclass
class FeSpace:
    mesh: StructuredMesh
    family: Family
    element: ReferenceElement
    vertex_kinds: list[tuple[str, int | None]]
    has_face_dofs: bool
    n_dofs: int
    cell_dof_indices: np.ndarray   # [n_cells, n_local]
    cell_scalings: np.ndarray      # [n_cells, n_local]
    boundary_mask: np.ndarray      # [n_dofs]
    dof_kind: list[tuple[str, int | None]]  # per global dof: (kind, axis)
    dof_points: np.ndarray         # [n_dofs, dim] anchor point of each dof

    @property
    def dim(self) -> int:
        return self.mesh.dim

    def boundary_dofs(self) -> np.ndarray:
        return np.nonzero(self.boundary_mask)[0]

    def free_dofs(self) -> np.ndarray:
        return np.nonzero(~self.boundary_mask)[0]

    def cell_dofs(self, ci: int) -> list[tuple[int, float]]:
        """(global index, h-power scaling) for every local DoF of cell ci."""
        return list(zip(self.cell_dof_indices[ci].tolist(),
                        self.cell_scalings[ci].tolist()))


def build_space(mesh: StructuredMesh, family: Family) -> FeSpace:
    """Enumerate global DoFs for (mesh, family) and build the cell maps."""
    n = mesh.dim
    elem = build_dual_basis(family, n)
    vkinds = _vertex_kinds(family, n)
    nvk = len(vkinds)
    has_face = family.name == "morley"

    n_vdofs = mesh.n_vertices * nvk
    n_dofs = n_vdofs + (mesh.n_faces if has_face else 0)

    # per-global-dof metadata
    dof_kind: list[tuple[str, int | None]] = [None] * n_dofs
    dof_points = np.empty((n_dofs, n))
    for vi in range(mesh.n_vertices):
        for o, (kind, axis) in enumerate(vkinds):
            gi = vi * nvk + o
            dof_kind[gi] = (kind, axis)
            dof_points[gi] = mesh.vertex_coords[vi]
    if has_face:
        for fi in range(mesh.n_faces):
            gi = n_vdofs + fi
            dof_kind[gi] = ("face_nn", int(mesh.face_axis[fi]))
            dof_points[gi] = mesh.face_barycenters[fi]

    # local->global map; local ordering matches the reference DoF ordering
    n_local = elem.n_dofs
    idx = np.empty((mesh.n_cells, n_local), dtype=np.int64)
    scal = np.empty((mesh.n_cells, n_local))
    kind_offset = {}
    for o, (kind, axis) in enumerate(vkinds):
        kind_offset[(kind, axis)] = o
    for ci in range(mesh.n_cells):
        verts = mesh.cell_vertex_ids(ci)
        h = mesh.cell_half_lengths[ci]
        for li, dof in enumerate(elem.dofs):
            if dof.kind == "face_nn":
                fid = mesh.cell_face_id(ci, dof.axis, dof.side)
                idx[ci, li] = n_vdofs + fid
                scal[ci, li] = h[dof.axis] ** 2
            else:
                off = kind_offset[(dof.kind, dof.axis)]
                idx[ci, li] = verts[dof.vertex] * nvk + off
                scal[ci, li] = h[dof.axis] ** dof.order if dof.axis is not None else 1.0
    # value dofs: order 0 -> scaling 1 handled above via axis None

    bmask = np.zeros(n_dofs, dtype=bool)
    bverts = mesh.boundary_vertex_mask
    for vi in np.nonzero(bverts)[0]:
        bmask[vi * nvk:(vi + 1) * nvk] = True
    if has_face:
        bmask[n_vdofs:] = mesh.boundary_face_mask

    return FeSpace(
        mesh=mesh,
        family=family,
        element=elem,
        vertex_kinds=vkinds,
        has_face_dofs=has_face,
        n_dofs=n_dofs,
        cell_dof_indices=idx,
        cell_scalings=scal,
        boundary_mask=bmask,
        dof_kind=dof_kind,
        dof_points=dof_points,
    )
