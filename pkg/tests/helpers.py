"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from nilcrystal.exactmath import QMatrix, QPoly
from nilcrystal.unipotent import NilMatrix, UniMatrix


def random_fraction(rng: random.Random, lo: int = -5, hi: int = 5, max_den: int = 4) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, max_den))


def random_int_matrix(rng: random.Random, n: int, lo: int = -5, hi: int = 5) -> QMatrix:
    return QMatrix.from_rows([[rng.randint(lo, hi) for _ in range(n)] for _ in range(n)])


def random_nil(rng: random.Random, dim: int, lo: int = -5, hi: int = 5) -> NilMatrix:
    return NilMatrix(
        QMatrix.build(dim, dim, lambda i, j: rng.randint(lo, hi) if i < j else 0)
    )


def random_uni(rng: random.Random, dim: int, lo: int = -5, hi: int = 5) -> UniMatrix:
    return UniMatrix(
        QMatrix.build(dim, dim, lambda i, j: rng.randint(lo, hi) if i < j else (1 if i == j else 0))
    )


def cofactor_det(m: QMatrix) -> Fraction:
    """Independent determinant oracle by recursive cofactor expansion."""
    n = m.rows
    if n == 1:
        return m[0, 0]
    total = Fraction(0)
    sign = 1
    for j in range(n):
        if m[0, j] != 0:
            minor = QMatrix.build(n - 1, n - 1, lambda r, c, jj=j: m[r + 1, c if c < jj else c + 1])
            total += sign * m[0, j] * cofactor_det(minor)
        sign = -sign
    return total


def fraction_free_det(m: QMatrix) -> Fraction:
    """Fraction-free Gaussian elimination oracle for det, kept independent of
    the library's implementation (works directly on rational rows)."""
    n = m.rows
    a = [list(m.row(i)) for i in range(n)]
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) / prev
            a[i][k] = Fraction(0)
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def poly_from_roots(roots) -> QPoly:
    p = QPoly.of(1)
    for r in roots:
        p = p * QPoly.x_minus(r)
    return p


def grid_root_count(p: QPoly, a: Fraction, b: Fraction, steps: int) -> int:
    """Sign-change counting on a fine rational grid; correct for square-free
    polynomials whose roots are separated by more than the step size."""
    h = (b - a) / steps
    count = 0
    prev = p(a)
    for i in range(1, steps + 1):
        x = a + i * h
        val = p(x)
        if val == 0:
            count += 1
            prev = p(x + h / 2)
            continue
        if prev != 0 and (prev < 0) != (val < 0):
            count += 1
        prev = val
    return count


def float_root_moduli(p: QPoly) -> list[float]:
    """Floating-point eigenvalue oracle: moduli of the roots of p, computed
    through the companion-matrix eigenvalues (numpy.roots)."""
    import numpy as np

    coeffs = [float(c) for c in reversed(p.coeffs)]
    if len(coeffs) <= 1:
        return []
    return [abs(z) for z in np.roots(coeffs)]
