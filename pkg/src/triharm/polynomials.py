"""Sparse multivariate polynomials with exact rational coefficients.

Polynomials live in the reference coordinates of an axis-aligned cell and are
the exact backbone for dual-basis construction, unisolvence determinants and
the face-integral identity checks.  All arithmetic is over
``fractions.Fraction``; floating-point evaluation is provided separately for
the runtime (quadrature) paths.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational

import numpy as np

__all__ = ["Polynomial", "det", "invert"]


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    raise TypeError(f"expected a rational coefficient, got {value!r}")


class Polynomial:
    """Sparse polynomial: exponent tuple -> nonzero Fraction coefficient."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms=None):
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        self.dim = int(dim)
        clean = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != dim:
                raise ValueError(f"exponent {exps} has wrong length for dim {dim}")
            if any(e < 0 for e in exps):
                raise ValueError(f"negative exponent in {exps}")
            c = _as_fraction(coeff)
            if c != 0:
                clean[exps] = clean.get(exps, Fraction(0)) + c
        self.terms = {e: c for e, c in clean.items() if c != 0}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, dim: int) -> "Polynomial":
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, value) -> "Polynomial":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def variable(cls, dim: int, axis: int) -> "Polynomial":
        if not 0 <= axis < dim:
            raise ValueError("axis out of range")
        exps = tuple(1 if i == axis else 0 for i in range(dim))
        return cls(dim, {exps: 1})

    @classmethod
    def monomial(cls, dim: int, exps, coeff=1) -> "Polynomial":
        return cls(dim, {tuple(exps): coeff})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, axis: int) -> int:
        return max((e[axis] for e in self.terms), default=0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self.dim == other.dim and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "Polynomial(0)"
        parts = []
        for exps in sorted(self.terms):
            mono = "*".join(
                f"x{i}^{e}" for i, e in enumerate(exps) if e
            ) or "1"
            parts.append(f"{self.terms[exps]}*{mono}")
        return "Polynomial(" + " + ".join(parts) + ")"

    # -- arithmetic --------------------------------------------------------

    def _check_dim(self, other: "Polynomial"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.dim, other)
        self._check_dim(other)
        terms = dict(self.terms)
        for exps, coeff in other.terms.items():
            terms[exps] = terms.get(exps, Fraction(0)) + coeff
        return Polynomial(self.dim, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = _as_fraction(other)
            return Polynomial(self.dim, {e: c * v for e, v in self.terms.items()})
        self._check_dim(other)
        terms = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(a + b for a, b in zip(ea, eb))
                terms[key] = terms.get(key, Fraction(0)) + ca * cb
        return Polynomial(self.dim, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = Polynomial.constant(self.dim, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus ----------------------------------------------------------

    def diff(self, axis: int, order: int = 1) -> "Polynomial":
        """Exact partial derivative d^order / d x_axis^order."""
        if not 0 <= axis < self.dim:
            raise ValueError("axis out of range")
        if order < 0:
            raise ValueError("order must be >= 0")
        terms = {}
        for exps, coeff in self.terms.items():
            e = exps[axis]
            if e < order:
                continue
            fac = 1
            for j in range(e, e - order, -1):
                fac *= j
            key = exps[:axis] + (e - order,) + exps[axis + 1:]
            terms[key] = terms.get(key, Fraction(0)) + coeff * fac
        return Polynomial(self.dim, terms)

    def diff_multi(self, alpha) -> "Polynomial":
        out = self
        for axis, order in enumerate(alpha):
            if order:
                out = out.diff(axis, order)
        return out

    def __call__(self, point):
        """Evaluate at one point; exact when the coordinates are rational."""
        if len(point) != self.dim:
            raise ValueError("point has wrong length")
        total = None
        for exps, coeff in self.terms.items():
            val = coeff
            for x, e in zip(point, exps):
                if e:
                    val = val * x ** e
            total = val if total is None else total + val
        if total is None:
            return Fraction(0) if all(isinstance(x, Rational) for x in point) else 0.0
        return total

    def eval_grid(self, points: np.ndarray) -> np.ndarray:
        """Vectorized floating evaluation at ``points`` of shape (m, dim)."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[None, :]
        if pts.shape[1] != self.dim:
            raise ValueError("points have wrong dimension")
        out = np.zeros(pts.shape[0])
        if not self.terms:
            return out
        max_exp = [self.degree_in(i) for i in range(self.dim)]
        powers = [
            np.vander(pts[:, i], max_exp[i] + 1, increasing=True)
            for i in range(self.dim)
        ]
        for exps, coeff in self.terms.items():
            term = np.full(pts.shape[0], float(coeff))
            for i, e in enumerate(exps):
                if e:
                    term = term * powers[i][:, e]
            out += term
        return out

    def integrate_box(self, lo, hi) -> Fraction:
        """Exact integral over the box [lo, hi] via monomial antiderivatives."""
        lo = [_as_fraction(x) for x in lo]
        hi = [_as_fraction(x) for x in hi]
        if len(lo) != self.dim or len(hi) != self.dim:
            raise ValueError("box has wrong dimension")
        if any(a >= b for a, b in zip(lo, hi)):
            raise ValueError("degenerate box")
        total = Fraction(0)
        for exps, coeff in self.terms.items():
            val = coeff
            for a, b, e in zip(lo, hi, exps):
                val *= (b ** (e + 1) - a ** (e + 1)) / (e + 1)
            total += val
        return total

    def restrict(self, axis: int, value) -> "Polynomial":
        """Substitute x_axis = value; returns a polynomial in dim-1 variables.

        For dim == 1 the result is a constant polynomial in one dummy
        variable so that downstream integration still works.
        """
        if not 0 <= axis < self.dim:
            raise ValueError("axis out of range")
        value = _as_fraction(value)
        new_dim = max(self.dim - 1, 1)
        terms = {}
        for exps, coeff in self.terms.items():
            c = coeff * value ** exps[axis]
            key = exps[:axis] + exps[axis + 1:]
            if self.dim == 1:
                key = (0,)
            terms[key] = terms.get(key, Fraction(0)) + c
        return Polynomial(new_dim, terms)


# -- exact dense linear algebra over Fractions -----------------------------

def det(matrix) -> Fraction:
    """Exact determinant by fraction-free forward elimination."""
    a = [[_as_fraction(v) for v in row] for row in matrix]
    m = len(a)
    if any(len(row) != m for row in a):
        raise ValueError("matrix must be square")
    sign = 1
    detval = Fraction(1)
    for col in range(m):
        pivot = next((r for r in range(col, m) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            sign = -sign
        p = a[col][col]
        detval *= p
        for r in range(col + 1, m):
            factor = a[r][col] / p
            if factor == 0:
                continue
            for c in range(col, m):
                a[r][c] -= factor * a[col][c]
    return sign * detval


def invert(matrix):
    """Exact inverse via Gauss-Jordan elimination; raises on singularity."""
    a = [[_as_fraction(v) for v in row] for row in matrix]
    m = len(a)
    if any(len(row) != m for row in a):
        raise ValueError("matrix must be square")
    inv = [[Fraction(1 if i == j else 0) for j in range(m)] for i in range(m)]
    for col in range(m):
        pivot = next((r for r in range(col, m) if a[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        inv[col] = [v / p for v in inv[col]]
        for r in range(m):
            if r == col or a[r][col] == 0:
                continue
            f = a[r][col]
            a[r] = [v - f * w for v, w in zip(a[r], a[col])]
            inv[r] = [v - f * w for v, w in zip(inv[r], inv[col])]
    return inv
