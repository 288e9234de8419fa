"""Manufactured solutions for the tri-harmonic problem.

Each case supplies the exact solution, all partial derivatives up to order
three (vectorized over point arrays), and the source f = (-Delta)^3 u.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .mesh import BoxDomain, StructuredMesh, lshape_mesh, uniform_mesh
from .polynomials import Polynomial

__all__ = [
    "ManufacturedCase", "case_smooth2d", "case_lshape2d", "case_smooth3d",
    "polynomial_case", "get_case", "CASE_NAMES",
]


@dataclass
class ManufacturedCase:
    name: str
    dim: int
    domain: BoxDomain | None      # None marks the 2D L-shape
    source: Callable[[np.ndarray], np.ndarray]
    derivative: Callable[[tuple[int, ...], np.ndarray], np.ndarray]
    regularity: float             # expected s in H^{3+s}

    def u(self, points: np.ndarray) -> np.ndarray:
        return self.derivative((0,) * self.dim, points)

    def mesh(self, n: int) -> StructuredMesh:
        if self.domain is None:
            return lshape_mesh(n)
        return uniform_mesh(self.domain, [n] * self.dim)


def _cosine_product(name: str, domain: BoxDomain, freqs, phases,
                    regularity: float = 1.0) -> ManufacturedCase:
    """u = prod_i cos(k_i x_i + phi_i); derivatives shift phases by pi/2."""
    k = np.asarray(freqs, dtype=float)
    phi = np.asarray(phases, dtype=float)
    dim = len(k)
    lam = float(np.sum(k ** 2)) ** 3  # (-Delta)^3 eigenvalue

    def derivative(alpha, points):
        pts = np.asarray(points, dtype=float).reshape(-1, dim)
        out = np.ones(pts.shape[0])
        for i, a in enumerate(alpha):
            out = out * (k[i] ** a) * np.cos(k[i] * pts[:, i] + phi[i] + a * math.pi / 2)
        return out

    def source(points):
        return lam * derivative((0,) * dim, points)

    return ManufacturedCase(name, dim, domain, source, derivative, regularity)


def case_smooth2d() -> ManufacturedCase:
    """u = cos(2 pi x) cos(2 pi y) on the unit square; f = (8 pi^2)^3 u."""
    return _cosine_product(
        "smooth2d", BoxDomain((0.0, 0.0), (1.0, 1.0)),
        freqs=(2 * math.pi, 2 * math.pi), phases=(0.0, 0.0),
    )


def case_smooth3d() -> ManufacturedCase:
    """u = sin(2 pi x) cos(pi y) cos(pi z) on the unit cube; f = (6 pi^2)^3 u."""
    return _cosine_product(
        "smooth3d", BoxDomain((0.0, 0.0, 0.0), (1.0, 1.0, 1.0)),
        freqs=(2 * math.pi, math.pi, math.pi),
        phases=(-math.pi / 2, 0.0, 0.0),
    )


def case_lshape2d() -> ManufacturedCase:
    """Singular harmonic solution r^2.5 sin(2.5 theta) on the L-shape.

    u is the imaginary part of z^{5/2} with the branch theta in [0, 3pi/2]
    (the cut lies inside the removed quadrant), so f vanishes identically
    and u sits in H^{3.5 - eps} only.
    """
    p = 2.5

    def zpow(points, power):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        r = np.hypot(pts[:, 0], pts[:, 1])
        theta = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * math.pi)
        out = np.zeros(pts.shape[0], dtype=complex)
        pos = r > 0
        out[pos] = r[pos] ** power * np.exp(1j * power * theta[pos])
        if power == 0:
            out[~pos] = 1.0
        return out

    def derivative(alpha, points):
        a, b = alpha
        order = a + b
        coeff = 1.0
        for j in range(order):
            coeff *= p - j
        # d^a_x d^b_y Im(z^p) = Im(i^b coeff z^{p - a - b})
        vals = (1j ** b) * coeff * zpow(points, p - order)
        return np.imag(vals)

    def source(points):
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return np.zeros(pts.shape[0])

    return ManufacturedCase("lshape2d", 2, None, source, derivative, 0.5)


def polynomial_case(poly: Polynomial, domain: BoxDomain,
                    name: str = "polynomial") -> ManufacturedCase:
    """Wrap an exact polynomial u; source computed as (-Delta)^3 u exactly."""
    dim = poly.dim
    lap3 = Polynomial.zero(dim)
    lap = lambda q: sum((q.diff(i, 2) for i in range(dim)), Polynomial.zero(dim))
    lap3 = lap(lap(lap(poly)))

    deriv_cache: dict[tuple, Polynomial] = {}

    def derivative(alpha, points):
        alpha = tuple(alpha)
        q = deriv_cache.get(alpha)
        if q is None:
            q = poly.diff_multi(alpha)
            deriv_cache[alpha] = q
        return q.eval_grid(np.asarray(points, dtype=float).reshape(-1, dim))

    def source(points):
        return -lap3.eval_grid(np.asarray(points, dtype=float).reshape(-1, dim))

    return ManufacturedCase(name, dim, domain, source, derivative, 1.0)


CASE_NAMES = ("smooth2d", "lshape2d", "smooth3d")


def get_case(name: str) -> ManufacturedCase:
    table = {
        "smooth2d": case_smooth2d,
        "lshape2d": case_lshape2d,
        "smooth3d": case_smooth3d,
    }
    if name not in table:
        raise ValueError(f"unknown case {name!r}; choose from {CASE_NAMES}")
    return table[name]()
