"""Exact arithmetic over the rationals: dense matrices, univariate polynomials,
and certified root-location tests (unit circle, unit disk, real intervals).

Rational scalars are `fractions.Fraction`, which is always kept in canonical
form (positive denominator, lowest terms).  The text form is ``"p/q"`` with the
denominator omitted when it equals 1; every module and the CLI share it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import (
    DegenerateInputError,
    DimensionError,
    DomainError,
    ParseError,
)

Scalar = Fraction | int
Vector = tuple[Fraction, ...]

_ZERO = Fraction(0)


# ---------------------------------------------------------------------------
# rational text form
# ---------------------------------------------------------------------------

_RATIONAL_RE = re.compile(r"(-?(?:0|[1-9][0-9]*))(?:/(0|[1-9][0-9]*))?\Z")


def parse_rational(text: str) -> Fraction:
    """Parse canonical rational text ``"p"`` or ``"p/q"``.

    Rejects anything that is not already canonical: q <= 0, q = 1 spelled out,
    a fraction not in lowest terms, leading zeros, "+" signs, or "-0".
    """
    if not isinstance(text, str):
        raise ParseError(f"rational token must be text, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise ParseError(f"malformed rational text {text!r}")
    if m.group(1) == "-0":
        raise ParseError(f"malformed rational text {text!r}: negative zero")
    num = int(m.group(1))
    if m.group(2) is None:
        return Fraction(num)
    den = int(m.group(2))
    if den == 0:
        raise ParseError(f"malformed rational text {text!r}: denominator must be positive")
    if den == 1:
        raise ParseError(f"malformed rational text {text!r}: denominator 1 must be omitted")
    if math.gcd(abs(num), den) != 1:
        raise ParseError(f"malformed rational text {text!r}: not in lowest terms")
    return Fraction(num, den)


def format_rational(q: Fraction | int) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def as_fraction(x: Scalar) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise ParseError(f"expected an exact rational, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QMatrix:
    """Immutable dense matrix over the rationals, row-major entries."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise DimensionError("matrix dimensions must be positive")
        if len(self.entries) != self.rows * self.cols:
            raise DimensionError("entry count does not match dimensions")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[Scalar]]) -> "QMatrix":
        if not rows or not rows[0]:
            raise DimensionError("matrix needs at least one row and column")
        ncols = len(rows[0])
        flat: list[Fraction] = []
        for r in rows:
            if len(r) != ncols:
                raise DimensionError("ragged rows")
            flat.extend(as_fraction(x) for x in r)
        return QMatrix(len(rows), ncols, tuple(flat))

    @staticmethod
    def identity(n: int) -> "QMatrix":
        one, zero = Fraction(1), Fraction(0)
        return QMatrix(n, n, tuple(one if i == j else zero for i in range(n) for j in range(n)))

    @staticmethod
    def zeros(rows: int, cols: int) -> "QMatrix":
        return QMatrix(rows, cols, (Fraction(0),) * (rows * cols))

    @staticmethod
    def build(rows: int, cols: int, fn: Callable[[int, int], Scalar]) -> "QMatrix":
        return QMatrix(rows, cols, tuple(as_fraction(fn(i, j)) for i in range(rows) for j in range(cols)))

    def __getitem__(self, ij: tuple[int, int]) -> Fraction:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def row_lists(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._same_shape(other)
        return QMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._same_shape(other)
        return QMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "QMatrix":
        return QMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, s: Scalar) -> "QMatrix":
        s = as_fraction(s)
        return QMatrix(self.rows, self.cols, tuple(s * a for a in self.entries))

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
            n, m, k = self.rows, other.cols, self.cols
            a, b = self.entries, other.entries
            zero = _ZERO
            out = []
            for i in range(n):
                arow = a[i * k : (i + 1) * k]
                for j in range(m):
                    acc = None
                    for t in range(k):
                        av = arow[t]
                        if av:
                            bv = b[t * m + j]
                            if bv:
                                acc = av * bv if acc is None else acc + av * bv
                    out.append(zero if acc is None else acc)
            return QMatrix(n, m, tuple(out))
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "QMatrix":
        if not self.is_square:
            raise DimensionError("matrix power needs a square matrix")
        if k < 0:
            return inverse(self) ** (-k)
        result = QMatrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def transpose(self) -> "QMatrix":
        return QMatrix(self.cols, self.rows, tuple(self[j, i] for i in range(self.cols) for j in range(self.rows)))

    def trace(self) -> Fraction:
        if not self.is_square:
            raise DimensionError("trace needs a square matrix")
        return sum((self[i, i] for i in range(self.rows)), Fraction(0))

    def apply(self, v: Sequence[Scalar]) -> Vector:
        if len(v) != self.cols:
            raise DimensionError("vector length does not match matrix columns")
        vv = [as_fraction(x) for x in v]
        return tuple(sum(self[i, j] * vv[j] for j in range(self.cols)) for i in range(self.rows))

    def _same_shape(self, other: "QMatrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shape mismatch")


def matrix_to_lists(m: QMatrix) -> list[list[str]]:
    """Row-major nested lists of canonical rational text."""
    return [[format_rational(x) for x in m.row(i)] for i in range(m.rows)]


def matrix_from_lists(data) -> QMatrix:
    if not isinstance(data, list) or not data or not all(isinstance(r, list) for r in data):
        raise ParseError("matrix must be a non-empty nested list")
    return QMatrix.from_rows([[parse_rational(tok) for tok in row] for row in data])


def vector_to_list(v: Sequence[Scalar]) -> list[str]:
    return [format_rational(as_fraction(x)) for x in v]


def vector_from_list(data) -> Vector:
    if not isinstance(data, list):
        raise ParseError("vector must be a list of rational text")
    return tuple(parse_rational(tok) for tok in data)


# ---------------------------------------------------------------------------
# exact linear algebra
# ---------------------------------------------------------------------------


def det(m: QMatrix) -> Fraction:
    """Determinant by fraction-free Bareiss elimination on the integer matrix
    obtained after clearing denominators."""
    if not m.is_square:
        raise DimensionError("determinant needs a square matrix")
    n = m.rows
    d = math.lcm(*(e.denominator for e in m.entries))
    a = [[int(e * d) for e in m.row(i)] for i in range(n)]
    sign = 1
    prev = 1
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
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return Fraction(sign * a[n - 1][n - 1], d**n)


def rref(m: QMatrix) -> tuple[QMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and the pivot columns."""
    a = m.row_lists()
    nrows, ncols = m.rows, m.cols
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return QMatrix.from_rows(a), tuple(pivots)


def rank(m: QMatrix) -> int:
    return len(rref(m)[1])


def solve(a: QMatrix, b: Sequence[Scalar]) -> Vector | None:
    """One solution of ``a x = b`` or None when inconsistent."""
    if len(b) != a.rows:
        raise DimensionError("right-hand side length mismatch")
    aug = QMatrix.from_rows([list(a.row(i)) + [as_fraction(b[i])] for i in range(a.rows)])
    r, pivots = rref(aug)
    if a.cols in pivots:
        return None
    x = [Fraction(0)] * a.cols
    for row_idx, c in enumerate(pivots):
        x[c] = r[row_idx, a.cols]
    return tuple(x)


def inverse(m: QMatrix) -> QMatrix:
    if not m.is_square:
        raise DimensionError("inverse needs a square matrix")
    n = m.rows
    aug = QMatrix.from_rows(
        [list(m.row(i)) + [Fraction(1) if j == i else Fraction(0) for j in range(n)] for i in range(n)]
    )
    r, pivots = rref(aug)
    if pivots[:n] != tuple(range(n)):
        raise DegenerateInputError("matrix is singular")
    return QMatrix.from_rows([list(r.row(i))[n:] for i in range(n)])


# ---------------------------------------------------------------------------
# univariate polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QPoly:
    """Univariate polynomial over the rationals, coefficients ascending,
    trailing zeros stripped (the zero polynomial has no coefficients)."""

    coeffs: tuple[Fraction, ...]

    @staticmethod
    def of(*coeffs: Scalar) -> "QPoly":
        return QPoly.from_coeffs(coeffs)

    @staticmethod
    def from_coeffs(coeffs: Iterable[Scalar]) -> "QPoly":
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return QPoly(tuple(cs))

    @staticmethod
    def zero() -> "QPoly":
        return QPoly(())

    @staticmethod
    def x_minus(r: Scalar) -> "QPoly":
        return QPoly.of(-as_fraction(r), 1)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> Fraction:
        if self.is_zero():
            raise DegenerateInputError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_monic(self) -> bool:
        return not self.is_zero() and self.leading == 1

    def __call__(self, x: Scalar) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __add__(self, other: "QPoly") -> "QPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [Fraction(0)] * (n - len(self.coeffs))
        b = list(other.coeffs) + [Fraction(0)] * (n - len(other.coeffs))
        return QPoly.from_coeffs(x + y for x, y in zip(a, b))

    def __sub__(self, other: "QPoly") -> "QPoly":
        return self + (-other)

    def __neg__(self) -> "QPoly":
        return QPoly(tuple(-c for c in self.coeffs))

    def scale(self, s: Scalar) -> "QPoly":
        return QPoly.from_coeffs(as_fraction(s) * c for c in self.coeffs)

    def __mul__(self, other: "QPoly") -> "QPoly":
        if self.is_zero() or other.is_zero():
            return QPoly.zero()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return QPoly.from_coeffs(out)

    def shift_up(self, k: int) -> "QPoly":
        """Multiply by x**k."""
        if self.is_zero():
            return self
        return QPoly((Fraction(0),) * k + self.coeffs)

    def divmod(self, other: "QPoly") -> tuple["QPoly", "QPoly"]:
        if other.is_zero():
            raise DegenerateInputError("division by the zero polynomial")
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return QPoly.zero(), self
        quot = [Fraction(0)] * (dq + 1)
        lead = other.leading
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] / lead
            quot[k] = c
            if c != 0:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return QPoly.from_coeffs(quot), QPoly.from_coeffs(rem)

    def exact_div(self, other: "QPoly") -> "QPoly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise DegenerateInputError("division was not exact")
        return q

    def derivative(self) -> "QPoly":
        return QPoly.from_coeffs(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def monic(self) -> "QPoly":
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def reciprocal(self) -> "QPoly":
        """Coefficient reversal x**deg * p(1/x); drops zero roots."""
        return QPoly.from_coeffs(reversed(self.coeffs))

    def scale_argument(self, c: Scalar) -> "QPoly":
        """p(c*x)."""
        c = as_fraction(c)
        power = Fraction(1)
        out = []
        for a in self.coeffs:
            out.append(a * power)
            power *= c
        return QPoly.from_coeffs(out)

    def to_text_list(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = format_rational(abs(c))
            term = mag if i == 0 else (f"x^{i}" if i > 1 else "x")
            if i > 0 and abs(c) != 1:
                term = f"{mag}*{term}"
            parts.append(("- " if c < 0 else "+ ") + term)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def poly_gcd(a: QPoly, b: QPoly) -> QPoly:
    """Monic gcd over the rationals."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


def square_free_part(p: QPoly) -> QPoly:
    if p.is_zero():
        raise DegenerateInputError("zero polynomial")
    if p.degree == 0:
        return p.monic()
    return p.exact_div(poly_gcd(p, p.derivative())).monic()


# ---------------------------------------------------------------------------
# characteristic polynomial (fraction-free Bareiss over the polynomial ring)
# ---------------------------------------------------------------------------


def char_poly(m: QMatrix) -> QPoly:
    """Monic characteristic polynomial det(xI - m).

    Denominators are cleared first, so the Bareiss recursion runs on
    polynomials with integer coefficients; no intermediate fractions appear.
    The diagonal pivots are leading principal characteristic minors, which are
    monic and therefore never vanish, so no pivoting is needed.
    """
    if not m.is_square:
        raise DimensionError("characteristic polynomial needs a square matrix")
    n = m.rows
    d = math.lcm(*(e.denominator for e in m.entries))
    scaled = m.scale(d)
    a: list[list[QPoly]] = [
        [QPoly.of(-scaled[i, j], 1) if i == j else QPoly.of(-scaled[i, j]) for j in range(n)]
        for i in range(n)
    ]
    prev = QPoly.of(1)
    for k in range(n - 1):
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[k][k] * a[i][j] - a[i][k] * a[k][j]).exact_div(prev)
            a[i][k] = QPoly.zero()
        prev = a[k][k]
    q = a[n - 1][n - 1]
    return q.scale_argument(d).scale(Fraction(1, d**n))


# ---------------------------------------------------------------------------
# Sturm sequences and root counting
# ---------------------------------------------------------------------------


def _sturm_chain(p: QPoly) -> list[QPoly]:
    chain = [p, p.derivative()]
    while not chain[-1].is_zero():
        rem = chain[-2].divmod(chain[-1])[1]
        chain.append(-rem)
    chain.pop()
    return chain


def _sign_changes(chain: Sequence[QPoly], x: Fraction) -> int:
    signs = [v for v in (q(x) for q in chain) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a < 0) != (b < 0))


def real_root_count_in_interval(p: QPoly, a: Scalar, b: Scalar, open_interval: bool = True) -> int:
    """Number of distinct real roots of p in (a, b) (or [a, b]), via Sturm
    sequences over the rationals after square-free reduction."""
    if p.is_zero():
        raise DegenerateInputError("zero polynomial")
    a, b = as_fraction(a), as_fraction(b)
    if not a < b:
        raise DomainError("interval endpoints must satisfy a < b")
    q = square_free_part(p)
    root_at_a = q(a) == 0
    root_at_b = q(b) == 0
    if root_at_a:
        q = q.exact_div(QPoly.x_minus(a))
    if root_at_b:
        q = q.exact_div(QPoly.x_minus(b))
    if q.degree <= 0:
        interior = 0
    else:
        chain = _sturm_chain(q)
        interior = _sign_changes(chain, a) - _sign_changes(chain, b)
    if open_interval:
        return interior
    return interior + int(root_at_a) + int(root_at_b)


# ---------------------------------------------------------------------------
# unit-circle and unit-disk certificates
# ---------------------------------------------------------------------------

Witness = tuple[str, object]


def _strip_unit_factors(g: QPoly) -> QPoly:
    for r in (Fraction(1), Fraction(-1)):
        factor = QPoly.x_minus(r)
        while not g.is_zero() and g.degree >= 1 and g(r) == 0:
            g = g.exact_div(factor)
    return g


def _symmetric_collapse(g: QPoly) -> QPoly:
    """For monic self-reciprocal g of even degree 2m with g(+-1) != 0, return
    h of degree m with g(x) = x**m * h(x + 1/x)."""
    twom = g.degree
    if twom % 2 != 0:
        raise DegenerateInputError("self-reciprocal part has odd degree")
    m = twom // 2
    residual = g
    h = [Fraction(0)] * (m + 1)
    x2p1 = QPoly.of(1, 0, 1)
    powers = [QPoly.of(1)]
    for _ in range(m):
        powers.append(powers[-1] * x2p1)
    for j in range(m, -1, -1):
        coeff = residual.coeffs[m + j] if residual.degree >= m + j else Fraction(0)
        h[j] = coeff
        if coeff != 0:
            residual = residual - powers[j].shift_up(m - j).scale(coeff)
    if not residual.is_zero():
        raise DegenerateInputError("polynomial was not self-reciprocal")
    return QPoly.from_coeffs(h)


def unit_circle_roots_exist(p: QPoly) -> tuple[bool, list[Witness]]:
    """Exact test for a complex root of modulus exactly 1.

    Pipeline: evaluate at +-1, take gcd with the reciprocal polynomial, strip
    (x -+ 1) factors, collapse the remaining self-reciprocal part through the
    substitution t = x + 1/x, and Sturm-count real roots of the collapsed
    polynomial in the open interval (-2, 2).
    """
    if p.is_zero():
        raise DegenerateInputError("zero polynomial")
    witnesses: list[Witness] = []
    if p(1) == 0:
        witnesses.append(("value_at_plus_one", Fraction(0)))
        return True, witnesses
    if p(-1) == 0:
        witnesses.append(("value_at_minus_one", Fraction(0)))
        return True, witnesses
    witnesses.append(("value_at_plus_one", p(Fraction(1))))
    witnesses.append(("value_at_minus_one", p(Fraction(-1))))
    g = poly_gcd(p, p.reciprocal())
    witnesses.append(("reciprocal_gcd", g))
    if g.degree <= 0:
        return False, witnesses
    g = _strip_unit_factors(g)
    if g.degree <= 0:
        return False, witnesses
    h = _symmetric_collapse(g)
    witnesses.append(("collapsed_symmetric_part", h))
    count = real_root_count_in_interval(h, Fraction(-2), Fraction(2), open_interval=True)
    witnesses.append(("real_roots_in_open_minus2_2", count))
    return count > 0, witnesses


def _schur_cohn_all_inside(f: QPoly, witnesses: list[Witness]) -> bool:
    """True iff every root of f lies strictly inside the unit disk, by the
    exact Schur-Cohn/Jury recursion.

    Each step forms d = lead**2 - const**2.  d <= 0 means the product of root
    moduli is >= 1, which already refutes "all strictly inside", so the
    recursion reports false; d = 0 is exactly the degenerate zero leading
    coefficient of the reduced polynomial (a reciprocal-pair degeneracy).
    """
    step = 0
    while f.degree > 0:
        c0, cn = f.coeffs[0], f.leading
        d = cn * cn - c0 * c0
        witnesses.append((f"schur_cohn_step_{step}", (d, f)))
        if d <= 0:
            return False
        if c0 == 0:
            g = f.scale(cn)
        else:
            g = f.scale(cn) - f.reciprocal().scale(c0)
        f = QPoly.from_coeffs(g.coeffs[1:])
        step += 1
    return True


def all_roots_outside_unit_disk(p: QPoly) -> tuple[bool, list[Witness]]:
    """Exact test that every complex root of monic p has modulus > 1.

    Rules out unit-circle roots first, then applies the Schur-Cohn recursion
    to the reciprocal polynomial (roots of the reciprocal strictly inside the
    disk correspond to roots of p strictly outside).
    """
    if p.is_zero():
        raise DegenerateInputError("zero polynomial")
    if not p.is_monic():
        raise DomainError("unit-disk test expects a monic polynomial")
    on_circle, witnesses = unit_circle_roots_exist(p)
    if on_circle:
        witnesses.append(("verdict", "root on the unit circle"))
        return False, witnesses
    if p.degree == 0:
        return True, witnesses
    if p(0) == 0:
        witnesses.append(("root_at_zero", Fraction(0)))
        return False, witnesses
    ok = _schur_cohn_all_inside(p.reciprocal(), witnesses)
    return ok, witnesses


@dataclass(frozen=True)
class SpectralCertificate:
    """Exact evidence behind eigenvalue-modulus verdicts for a matrix."""

    char_poly: QPoly
    has_unit_circle_root: bool
    all_outside_unit_disk: bool
    witnesses: tuple[Witness, ...]

    def __post_init__(self):
        if self.all_outside_unit_disk and self.has_unit_circle_root:
            raise DomainError("inconsistent certificate: outside-disk excludes circle roots")


def spectral_certificate(p: QPoly) -> SpectralCertificate:
    on_circle, w1 = unit_circle_roots_exist(p)
    outside, w2 = all_roots_outside_unit_disk(p)
    merged = [("circle:" + name, payload) for name, payload in w1]
    merged += [("disk:" + name, payload) for name, payload in w2]
    return SpectralCertificate(
        char_poly=p,
        has_unit_circle_root=on_circle,
        all_outside_unit_disk=outside,
        witnesses=tuple(merged),
    )
