"""Structured axis-aligned n-rectangle meshes.

A mesh is a tensor grid of cells with an active mask (the mask carves the
2D L-shape out of a square).  Cells carry a center and per-axis half-lengths;
vertices and faces get deterministic lexicographic global ids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["BoxDomain", "StructuredMesh", "uniform_mesh", "lshape_mesh"]


@dataclass(frozen=True)
class BoxDomain:
    lo: tuple[float, ...]
    hi: tuple[float, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo/hi length mismatch")
        if any(a >= b for a, b in zip(self.lo, self.hi)):
            raise ValueError("domain sides must have positive length")

    @property
    def dim(self) -> int:
        return len(self.lo)


class StructuredMesh:
    """Tensor-product mesh with an active-cell mask.

    Entities:
      - cells: active grid cells, lexicographic grid order
      - vertices: grid nodes touched by at least one active cell
      - faces: (axis, face-grid-index) records with one or two incident cells
    """

    def __init__(self, axis_nodes: list[np.ndarray], active: np.ndarray):
        self.dim = len(axis_nodes)
        self.axis_nodes = [np.asarray(a, dtype=float) for a in axis_nodes]
        shape = tuple(len(a) - 1 for a in self.axis_nodes)
        self.active = np.asarray(active, dtype=bool).reshape(shape)
        if not self.active.any():
            raise ValueError("mesh has no active cells")
        self._build()

    def _build(self):
        n = self.dim
        cells = [tuple(g) for g in np.argwhere(self.active)]
        cells.sort()
        self.cell_grid = cells
        self.n_cells = len(cells)
        self.cell_id = {g: i for i, g in enumerate(cells)}

        centers = np.empty((self.n_cells, n))
        half = np.empty((self.n_cells, n))
        for ci, g in enumerate(cells):
            for k in range(n):
                a, b = self.axis_nodes[k][g[k]], self.axis_nodes[k][g[k] + 1]
                centers[ci, k] = 0.5 * (a + b)
                half[ci, k] = 0.5 * (b - a)
        self.cell_centers = centers
        self.cell_half_lengths = half

        # vertices: grid nodes of active cells
        vset = set()
        corner_offsets = list(np.ndindex(*([2] * n)))
        for g in cells:
            for off in corner_offsets:
                vset.add(tuple(gi + oi for gi, oi in zip(g, off)))
        vgrids = sorted(vset)
        self.vertex_grid = vgrids
        self.vertex_id = {g: i for i, g in enumerate(vgrids)}
        self.n_vertices = len(vgrids)
        self.vertex_coords = np.array(
            [[self.axis_nodes[k][g[k]] for k in range(n)] for g in vgrids]
        )

        # faces: keyed by (axis, face grid index); the face grid along `axis`
        # has one more slot than the cell grid there
        fmap: dict[tuple, list[int]] = {}
        for g in cells:
            ci = self.cell_id[g]
            for k in range(n):
                for side in (0, 1):
                    fg = list(g)
                    fg[k] += side
                    fmap.setdefault((k, tuple(fg)), []).append(ci)
        fkeys = sorted(fmap)
        self.face_key = fkeys
        self.face_id = {key: i for i, key in enumerate(fkeys)}
        self.n_faces = len(fkeys)
        self.face_axis = np.array([k for k, _ in fkeys], dtype=int)
        self.face_cells = [tuple(sorted(fmap[key])) for key in fkeys]
        bary = np.empty((self.n_faces, n))
        for fi, (k, fg) in enumerate(fkeys):
            for j in range(n):
                if j == k:
                    bary[fi, j] = self.axis_nodes[j][fg[j]]
                else:
                    a, b = self.axis_nodes[j][fg[j]], self.axis_nodes[j][fg[j] + 1]
                    bary[fi, j] = 0.5 * (a + b)
        self.face_barycenters = bary
        self.boundary_face_mask = np.array(
            [len(c) == 1 for c in self.face_cells], dtype=bool
        )

        # boundary vertices: a vertex is interior iff all 2^n adjacent grid
        # cells exist and are active
        shape = self.active.shape
        bmask = np.empty(self.n_vertices, dtype=bool)
        for vi, g in enumerate(vgrids):
            interior = True
            for off in corner_offsets:
                cg = tuple(gi - 1 + oi for gi, oi in zip(g, off))
                if any(c < 0 or c >= s for c, s in zip(cg, shape)):
                    interior = False
                    break
                if not self.active[cg]:
                    interior = False
                    break
            bmask[vi] = not interior
        self.boundary_vertex_mask = bmask

    # -- queries -----------------------------------------------------------

    def cell_vertex_ids(self, ci: int) -> list[int]:
        """Vertex ids of cell ci, in lexicographic sign order of the corners."""
        g = self.cell_grid[ci]
        out = []
        for off in np.ndindex(*([2] * self.dim)):
            out.append(self.vertex_id[tuple(gi + oi for gi, oi in zip(g, off))])
        return out

    def cell_face_id(self, ci: int, axis: int, side: int) -> int:
        """Global face id of cell ci's face on `axis` at side -1/+1."""
        g = list(self.cell_grid[ci])
        if side > 0:
            g[axis] += 1
        return self.face_id[(axis, tuple(g))]

    def total_volume(self) -> float:
        return float(np.prod(2.0 * self.cell_half_lengths, axis=1).sum())

    def boundary_vertices(self) -> np.ndarray:
        return np.nonzero(self.boundary_vertex_mask)[0]

    def boundary_faces(self) -> np.ndarray:
        return np.nonzero(self.boundary_face_mask)[0]

    def dump(self, stream):
        """Plain-text debug dump: one record per line."""
        stream.write(f"mesh dim={self.dim} cells={self.n_cells} "
                     f"vertices={self.n_vertices} faces={self.n_faces}\n")
        for vi, g in enumerate(self.vertex_grid):
            coords = " ".join(f"{x:.17g}" for x in self.vertex_coords[vi])
            stream.write(f"vertex {vi} grid={g} coords=({coords})"
                         f" boundary={int(self.boundary_vertex_mask[vi])}\n")
        for ci in range(self.n_cells):
            verts = " ".join(str(v) for v in self.cell_vertex_ids(ci))
            stream.write(f"cell {ci} grid={self.cell_grid[ci]} vertices=[{verts}]\n")
        for fi, key in enumerate(self.face_key):
            cells = " ".join(str(c) for c in self.face_cells[fi])
            stream.write(f"face {fi} axis={key[0]} grid={key[1]} cells=[{cells}]"
                         f" boundary={int(self.boundary_face_mask[fi])}\n")


def uniform_mesh(domain: BoxDomain, subdivisions) -> StructuredMesh:
    """Uniform tensor grid with N_i cells along axis i."""
    subs = [int(s) for s in np.atleast_1d(subdivisions)]
    if len(subs) == 1:
        subs = subs * domain.dim
    if len(subs) != domain.dim:
        raise ValueError("subdivision count does not match dimension")
    if any(s < 1 for s in subs):
        raise ValueError("subdivisions must be >= 1")
    axis_nodes = [
        np.linspace(lo, hi, s + 1)
        for lo, hi, s in zip(domain.lo, domain.hi, subs)
    ]
    return StructuredMesh(axis_nodes, np.ones(subs, dtype=bool))


def lshape_mesh(n_per_unit: int) -> StructuredMesh:
    """L-shape (-1,1)^2 minus the closed quadrant x >= 0, y <= 0.

    ``n_per_unit`` cells per unit length, so 3 N^2 active cells.
    """
    n = int(n_per_unit)
    if n < 1:
        raise ValueError("need at least one cell per unit length")
    nodes = np.linspace(-1.0, 1.0, 2 * n + 1)
    active = np.ones((2 * n, 2 * n), dtype=bool)
    centers = 0.5 * (nodes[:-1] + nodes[1:])
    cx, cy = np.meshgrid(centers, centers, indexing="ij")
    active[(cx > 0) & (cy < 0)] = False
    return StructuredMesh([nodes, nodes], active)
