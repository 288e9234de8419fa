"""Broken-norm errors, single solves, and convergence studies."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .assembly import apply_dirichlet, assemble, derivative_multiindices, gauss_rule
from .cases import ManufacturedCase
from .interpolation import boundary_values_from_case
from .reference import Family
from .solver import SolveReport, solve_cg, solve_direct
from .space import FeSpace, build_space

__all__ = [
    "broken_norms", "solve_case", "ErrorReport", "convergence_study",
]


def broken_norms(space: FeSpace, coeffs: np.ndarray, case: ManufacturedCase,
                 q: int = 8) -> tuple[float, float, float, float]:
    """(L2, broken H1, H2, H3 semi-norms) of exact-minus-discrete.

    Mixed partials enter with the multinomial multiplicity m!/alpha!, the
    same weighting as the ordered-tuple sums of the bilinear form.
    """
    mesh = space.mesh
    elem = space.element
    rule = gauss_rule(q, mesh.dim)
    centers = mesh.cell_centers
    half = mesh.cell_half_lengths
    pts = centers[:, None, :] + half[:, None, :] * rule.points[None, :, :]
    flat = pts.reshape(-1, mesh.dim)
    jac = np.prod(half, axis=1)
    ref_coeffs = coeffs[space.cell_dof_indices] * space.cell_scalings

    acc = np.zeros(4)
    for m in range(4):
        for alpha, mult in derivative_multiindices(mesh.dim, m):
            exact = case.derivative(alpha, flat).reshape(mesh.n_cells, -1)
            d = elem.eval_shape(alpha, rule.points)       # [npts, nloc]
            uh = ref_coeffs @ d.T                         # [nc, npts]
            chain = np.prod(half ** (-np.array(alpha)), axis=1)
            uh = uh * chain[:, None]
            diff2 = (exact - uh) ** 2 @ rule.weights
            acc[m] += mult * float(np.sum(jac * diff2))
    return tuple(math.sqrt(v) for v in acc)


def solve_case(case: ManufacturedCase, family: Family, n: int,
               q_stiffness: int = 6, q_load: int = 8,
               solver: str = "direct", cg_tol: float = 1e-10,
               ) -> tuple[FeSpace, np.ndarray, SolveReport]:
    """Assemble, impose exact-DoF boundary data, and solve one refinement."""
    mesh = case.mesh(n)
    space = build_space(mesh, family)
    system = assemble(space, case.source,
                      gauss_rule(q_stiffness, mesh.dim),
                      gauss_rule(q_load, mesh.dim))
    reduced = apply_dirichlet(system, boundary_values_from_case(space, case))
    if solver == "direct":
        x, report = solve_direct(reduced)
    elif solver == "cg":
        x, report = solve_cg(reduced, tol=cg_tol)
    else:
        raise ValueError(f"unknown solver {solver!r}")
    return space, reduced.reconstruct(x), report


@dataclass
class ErrorReport:
    """Per-level broken-norm errors with observed orders log2(e(N)/e(2N))."""

    case: str
    family: str
    levels: list[int] = field(default_factory=list)
    h: list[float] = field(default_factory=list)
    errors: list[tuple[float, float, float, float]] = field(default_factory=list)

    def add(self, n: int, h: float, errs):
        self.levels.append(n)
        self.h.append(h)
        self.errors.append(tuple(errs))

    def orders(self) -> list[tuple[float | None, ...]]:
        out = []
        for i in range(len(self.levels)):
            if i == 0:
                out.append((None,) * 4)
            else:
                prev, cur = self.errors[i - 1], self.errors[i]
                out.append(tuple(
                    math.log2(p / c) if p > 0 and c > 0 else None
                    for p, c in zip(prev, cur)
                ))
        return out

    def to_csv(self) -> str:
        lines = ["N,h,e0,order0,e1,order1,e2,order2,e3,order3"]
        for n, h, errs, ords in zip(self.levels, self.h, self.errors, self.orders()):
            cells = [str(n), f"{h:.6e}"]
            for e, o in zip(errs, ords):
                cells.append(f"{e:.6e}")
                cells.append("" if o is None else f"{o:.2f}")
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        head = ("| N | $\\|u-u_h\\|_0$ | order | $|u-u_h|_{1,h}$ | order "
                "| $|u-u_h|_{2,h}$ | order | $|u-u_h|_{3,h}$ | order |")
        sep = "|" + "---|" * 9
        lines = [head, sep]
        for n, errs, ords in zip(self.levels, self.errors, self.orders()):
            cells = [str(n)]
            for e, o in zip(errs, ords):
                cells.append(f"{e:.3e}")
                cells.append("-" if o is None else f"{o:.2f}")
            lines.append("| " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"


def convergence_study(case: ManufacturedCase, family: Family,
                      levels: list[int], q_stiffness: int = 6,
                      q_load: int = 8, q_error: int = 8,
                      solver: str = "direct",
                      progress=None) -> ErrorReport:
    """Solve a refinement sequence and collect errors and observed orders."""
    if len(levels) < 2:
        raise ValueError("need at least two refinement levels")
    for a, b in zip(levels, levels[1:]):
        if b != 2 * a:
            raise ValueError("levels must double: got " + repr(levels))
    report = ErrorReport(case.name, str(family))
    for n in levels:
        space, coeffs, solve_report = solve_case(
            case, family, n, q_stiffness=q_stiffness, q_load=q_load,
            solver=solver)
        errs = broken_norms(space, coeffs, case, q=q_error)
        hmax = float(space.mesh.cell_half_lengths.max()) * 2.0
        report.add(n, hmax, errs)
        if progress is not None:
            progress(n, errs, solve_report)
    return report
