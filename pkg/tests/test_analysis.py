"""Broken norms, single solves, and the convergence-study driver."""

import math

import numpy as np
import pytest

from triharm.analysis import (
    ErrorReport, broken_norms, convergence_study, solve_case,
)
from triharm.cases import case_smooth2d, polynomial_case
from triharm.mesh import BoxDomain, uniform_mesh
from triharm.polynomials import Polynomial
from triharm.reference import ADINI_TYPE, MORLEY
from triharm.space import build_space

UNIT_SQUARE = BoxDomain((0.0, 0.0), (1.0, 1.0))


def test_broken_norms_of_known_polynomial():
    # coeffs = 0 turns the error norms into norms of u itself
    x = Polynomial.variable(2, 0)
    case = polynomial_case(x, UNIT_SQUARE)
    space = build_space(uniform_mesh(UNIT_SQUARE, (2, 2)), ADINI_TYPE)
    l2, h1, h2, h3 = broken_norms(space, np.zeros(space.n_dofs), case)
    assert l2 == pytest.approx(math.sqrt(1.0 / 3.0), rel=1e-12)
    assert h1 == pytest.approx(1.0, rel=1e-12)
    assert h2 == pytest.approx(0.0, abs=1e-13)
    assert h3 == pytest.approx(0.0, abs=1e-13)


def test_broken_norms_mixed_multiplicity():
    # u = xy: |u|_2^2 integrates 2 (d_xy u)^2 = 2 via the 2!/(1!1!) weight
    x, y = (Polynomial.variable(2, i) for i in range(2))
    case = polynomial_case(x * y, UNIT_SQUARE)
    space = build_space(uniform_mesh(UNIT_SQUARE, (2, 2)), ADINI_TYPE)
    h2 = broken_norms(space, np.zeros(space.n_dofs), case)[2]
    assert h2 == pytest.approx(math.sqrt(2.0), rel=1e-12)


def test_solve_case_reproduces_first_table_row():
    case = case_smooth2d()
    space, coeffs, report = solve_case(case, ADINI_TYPE, 4)
    errs = broken_norms(space, coeffs, case)
    expected = (1.142e-01, 7.092e-01, 8.272e+00, 1.436e+02)
    for got, want in zip(errs, expected):
        assert abs(got - want) / want < 0.1
    assert report.relative_residual < 1e-9


def test_solve_case_cg_matches_direct():
    case = case_smooth2d()
    _, direct, _ = solve_case(case, MORLEY, 4)
    _, viacg, rep = solve_case(case, MORLEY, 4, solver="cg", cg_tol=1e-12)
    assert rep.iterations > 0
    scale = np.abs(direct).max()
    assert np.abs(direct - viacg).max() < 1e-7 * scale


def test_convergence_study_orders_and_validation():
    case = case_smooth2d()
    report = convergence_study(case, ADINI_TYPE, [4, 8])
    assert report.levels == [4, 8]
    orders = report.orders()
    assert orders[0] == (None,) * 4
    assert orders[1][3] == pytest.approx(1.04, abs=0.1)
    with pytest.raises(ValueError):
        convergence_study(case, ADINI_TYPE, [4])
    with pytest.raises(ValueError):
        convergence_study(case, ADINI_TYPE, [4, 12])


def test_error_report_csv_and_markdown_format():
    report = ErrorReport("demo", "adini")
    report.add(4, 0.25, (1.0e-1, 2.0e-1, 3.0e-1, 4.0e-1))
    report.add(8, 0.125, (2.5e-2, 5.0e-2, 7.5e-2, 2.0e-1))
    csv = report.to_csv()
    lines = csv.strip().splitlines()
    assert lines[0] == "N,h,e0,order0,e1,order1,e2,order2,e3,order3"
    assert lines[1].startswith("4,2.500000e-01,1.000000e-01,,")
    assert ",2.00," in lines[2] and lines[2].endswith("1.00")
    md = report.to_markdown()
    assert md.count("|") > 10 and "2.00" in md


def test_unknown_solver_rejected():
    with pytest.raises(ValueError):
        solve_case(case_smooth2d(), ADINI_TYPE, 2, solver="gmres")
