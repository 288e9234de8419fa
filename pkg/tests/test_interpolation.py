"""Canonical and projection-averaging interpolation operators."""

import numpy as np
import pytest

from triharm.analysis import broken_norms
from triharm.cases import case_smooth2d, polynomial_case
from triharm.interpolation import (
    boundary_values_from_case, canonical_interpolate, quasi_interpolate,
)
from triharm.mesh import BoxDomain, uniform_mesh
from triharm.polynomials import Polynomial
from triharm.reference import ADINI_TYPE, MORLEY
from triharm.space import build_space

UNIT_SQUARE = BoxDomain((0.0, 0.0), (1.0, 1.0))


def cubic_case():
    x, y = (Polynomial.variable(2, i) for i in range(2))
    u = x ** 3 - 2 * x ** 2 * y + x * y + y ** 3 - 1
    return polynomial_case(u, UNIT_SQUARE)


@pytest.mark.parametrize("family", [MORLEY, ADINI_TYPE])
def test_canonical_reproduces_cubics(family):
    case = cubic_case()
    space = build_space(uniform_mesh(UNIT_SQUARE, (3, 2)), family)
    coeffs = canonical_interpolate(space, case)
    errs = broken_norms(space, coeffs, case)
    assert all(e < 1e-11 for e in errs)


@pytest.mark.parametrize("family", [MORLEY, ADINI_TYPE])
def test_quasi_interpolation_reproduces_cubics(family):
    # cubics lie in the shape space, so the local projection is exact and
    # every incident cell reads the same DoF value
    case = cubic_case()
    space = build_space(uniform_mesh(UNIT_SQUARE, (3, 2)), family)
    coeffs = quasi_interpolate(space, case.u)
    errs = broken_norms(space, coeffs, case)
    # tolerance reflects the conditioning of the local mass matrix
    assert all(e < 1e-7 for e in errs)


def test_quasi_zero_boundary_variant():
    case = case_smooth2d()
    space = build_space(uniform_mesh(UNIT_SQUARE, (4, 4)), ADINI_TYPE)
    coeffs = quasi_interpolate(space, case.u, zero_boundary=True)
    assert np.allclose(coeffs[space.boundary_dofs()], 0.0)
    assert np.abs(coeffs[space.free_dofs()]).max() > 0


def test_canonical_matches_derivative_functionals():
    case = case_smooth2d()
    space = build_space(uniform_mesh(UNIT_SQUARE, (2, 2)), MORLEY)
    coeffs = canonical_interpolate(space, case)
    for gi, (kind, axis) in enumerate(space.dof_kind):
        pt = space.dof_points[gi][None, :]
        if kind == "value":
            alpha = (0, 0)
        elif kind == "grad":
            alpha = tuple(int(i == axis) for i in range(2))
        else:
            alpha = tuple(2 * int(i == axis) for i in range(2))
        assert coeffs[gi] == pytest.approx(float(case.derivative(alpha, pt)[0]))


def test_boundary_values_ordering():
    case = case_smooth2d()
    space = build_space(uniform_mesh(UNIT_SQUARE, (2, 2)), ADINI_TYPE)
    bvals = boundary_values_from_case(space, case)
    full = canonical_interpolate(space, case)
    np.testing.assert_array_equal(bvals, full[space.boundary_dofs()])


def test_quasi_interpolation_first_order_h3_decay():
    case = case_smooth2d()
    errs = []
    for n in (4, 8):
        space = build_space(uniform_mesh(UNIT_SQUARE, (n, n)), ADINI_TYPE)
        coeffs = quasi_interpolate(space, case.u)
        errs.append(broken_norms(space, coeffs, case)[3])
    rate = np.log2(errs[0] / errs[1])
    assert rate == pytest.approx(1.0, abs=0.3)
