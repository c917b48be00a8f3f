"""The exp/log correspondence for unipotent rational matrices, truncated BCH,
lower central series of matrix Lie algebras, ad-matrices, and differentials of
group homomorphisms computed from generator images."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    ClassBoundError,
    ClassError,
    DimensionError,
    DomainError,
    NotAHomomorphismError,
    NotClosedError,
    SpanError,
)
from .exactmath import QMatrix, Scalar, Vector, as_fraction, inverse, rref


@dataclass(frozen=True)
class NilMatrix:
    """Strictly upper triangular rational matrix (a nilpotent Lie algebra element)."""

    body: QMatrix

    def __post_init__(self):
        if not self.body.is_square:
            raise DimensionError("NilMatrix must be square")
        for i in range(self.body.rows):
            for j in range(i + 1):
                if self.body[i, j] != 0:
                    raise DomainError("NilMatrix must be strictly upper triangular")

    @staticmethod
    def _wrap(body: QMatrix) -> "NilMatrix":
        """Internal constructor for results of operations that stay strictly
        upper triangular (sums, scalings, brackets of validated inputs)."""
        x = object.__new__(NilMatrix)
        object.__setattr__(x, "body", body)
        return x

    @staticmethod
    def zero(dim: int) -> "NilMatrix":
        return NilMatrix(QMatrix.zeros(dim, dim))

    @staticmethod
    def elementary(dim: int, i: int, j: int, value: Scalar = 1) -> "NilMatrix":
        """value * E_ij with i < j (zero-based indices)."""
        if not 0 <= i < j < dim:
            raise DomainError("elementary matrix needs 0 <= i < j < dim")
        return NilMatrix(QMatrix.build(dim, dim, lambda r, c: value if (r, c) == (i, j) else 0))

    @property
    def dim(self) -> int:
        return self.body.rows

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def __add__(self, other: "NilMatrix") -> "NilMatrix":
        return NilMatrix(self.body + other.body)

    def __sub__(self, other: "NilMatrix") -> "NilMatrix":
        return NilMatrix(self.body - other.body)

    def __neg__(self) -> "NilMatrix":
        return NilMatrix(-self.body)

    def scale(self, s: Scalar) -> "NilMatrix":
        return NilMatrix(self.body.scale(s))

    def bracket(self, other: "NilMatrix") -> "NilMatrix":
        return NilMatrix(self.body * other.body - other.body * self.body)

    def flatten(self) -> Vector:
        return self.body.entries


@dataclass(frozen=True)
class UniMatrix:
    """Upper triangular rational matrix with unit diagonal (a unipotent group element)."""

    body: QMatrix

    def __post_init__(self):
        if not self.body.is_square:
            raise DimensionError("UniMatrix must be square")
        for i in range(self.body.rows):
            for j in range(i + 1):
                expected = 1 if i == j else 0
                if self.body[i, j] != expected:
                    raise DomainError("UniMatrix must be unipotent upper triangular")

    @staticmethod
    def identity(dim: int) -> "UniMatrix":
        return UniMatrix(QMatrix.identity(dim))

    @property
    def dim(self) -> int:
        return self.body.rows

    def is_identity(self) -> bool:
        return self.body == QMatrix.identity(self.dim)

    def __mul__(self, other: "UniMatrix") -> "UniMatrix":
        return UniMatrix(self.body * other.body)

    def inverse(self) -> "UniMatrix":
        # geometric series (I + N)^-1 = sum of (-N)^k, N nilpotent
        n = self.body - QMatrix.identity(self.dim)
        acc = QMatrix.identity(self.dim)
        power = QMatrix.identity(self.dim)
        for _ in range(1, self.dim):
            power = power * n.scale(-1)
            if power.is_zero():
                break
            acc = acc + power
        return UniMatrix(acc)

    def __pow__(self, k: int) -> "UniMatrix":
        if k < 0:
            return self.inverse() ** (-k)
        result = UniMatrix.identity(self.dim)
        for _ in range(k):
            result = result * self
        return result


def exp_unipotent(x: NilMatrix) -> UniMatrix:
    """exp as the finite sum of x**k / k! over k < dim."""
    dim = x.dim
    acc = QMatrix.identity(dim)
    term = QMatrix.identity(dim)
    for k in range(1, dim):
        term = (term * x.body).scale(Fraction(1, k))
        if term.is_zero():
            break
        acc = acc + term
    return UniMatrix(acc)


def log_unipotent(g: UniMatrix) -> NilMatrix:
    """log as the finite alternating sum of (g - I)**k / k."""
    dim = g.dim
    n = g.body - QMatrix.identity(dim)
    acc = QMatrix.zeros(dim, dim)
    power = QMatrix.identity(dim)
    for k in range(1, dim):
        power = power * n
        if power.is_zero():
            break
        acc = acc + power.scale(Fraction((-1) ** (k + 1), k))
    return NilMatrix(acc)


def rational_power(g: UniMatrix, t: Scalar) -> UniMatrix:
    """g**t = exp(t * log g); agrees with repeated multiplication for integer t."""
    return exp_unipotent(log_unipotent(g).scale(as_fraction(t)))


def bch_truncated(x: NilMatrix, y: NilMatrix, class_bound: int = 3) -> NilMatrix:
    """Truncated Campbell-Baker-Hausdorff sum for nilpotency class <= 3:
    x + y + [x,y]/2 (+ ([x,[x,y]] + [y,[y,x]])/12 at class 3).

    The result is post-verified against exp(x) exp(y); a mismatch means the
    ambient algebra exceeds the class bound and raises ClassBoundError.
    """
    if class_bound < 1 or class_bound > 3:
        raise DomainError("class bound must be 1, 2 or 3")
    if x.dim != y.dim:
        raise DimensionError("mixed dimensions in bch")
    z = x + y
    if class_bound >= 2:
        xy = x.bracket(y)
        z = z + xy.scale(Fraction(1, 2))
        if class_bound >= 3:
            z = z + (x.bracket(xy) + y.bracket(y.bracket(x))).scale(Fraction(1, 12))
    if exp_unipotent(z) != exp_unipotent(x) * exp_unipotent(y):
        raise ClassBoundError(f"exp(x)exp(y) is not exp(bch) at class bound {class_bound}")
    return z


# ---------------------------------------------------------------------------
# subspaces of a matrix Lie algebra
# ---------------------------------------------------------------------------


class LieSubspace:
    """Rational span of strictly-upper-triangular matrices with a fixed,
    linearly independent basis.  Subspaces compare equal when the reduced
    row-echelon forms of their flattened bases agree."""

    def __init__(self, ambient_dim: int, basis: Sequence[NilMatrix]):
        self.ambient_dim = ambient_dim
        basis = tuple(basis)
        for b in basis:
            if b.dim != ambient_dim:
                raise DimensionError("basis vector has wrong ambient dimension")
        self.basis = basis
        if basis:
            flat = QMatrix.from_rows([list(b.flatten()) for b in basis])
            reduced, pivots = rref(flat)
            if len(pivots) != len(basis):
                raise DomainError("basis vectors are linearly dependent")
            self._rref_rows = tuple(reduced.row(i) for i in range(len(pivots)))
            self._pivots = pivots
            k = len(basis)
            pivot_block = QMatrix.build(k, k, lambda i, j: basis[j].flatten()[pivots[i]])
            self._pivot_solver = inverse(pivot_block)
            self._flat_basis = tuple(b.flatten() for b in basis)
        else:
            self._rref_rows = ()
            self._pivots = ()
            self._pivot_solver = None
            self._flat_basis = ()

    @staticmethod
    def span(ambient_dim: int, vectors: Sequence[NilMatrix]) -> "LieSubspace":
        """Subspace spanned by arbitrary vectors; the stored basis is the
        reduced row-echelon basis (pivot order by flattened index)."""
        vecs = [v for v in vectors if not v.is_zero()]
        if not vecs:
            return LieSubspace(ambient_dim, ())
        flat = QMatrix.from_rows([list(v.flatten()) for v in vecs])
        reduced, pivots = rref(flat)
        basis = []
        for i in range(len(pivots)):
            row = reduced.row(i)
            basis.append(NilMatrix(QMatrix(ambient_dim, ambient_dim, tuple(row))))
        return LieSubspace(ambient_dim, basis)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def rref_key(self) -> tuple:
        return self._rref_rows

    def __eq__(self, other) -> bool:
        if not isinstance(other, LieSubspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._rref_rows == other._rref_rows

    def __hash__(self):
        return hash((self.ambient_dim, self._rref_rows))

    def coords_of(self, x: NilMatrix) -> Vector | None:
        """Coordinates of x in the stored basis order, or None if outside the span."""
        if x.dim != self.ambient_dim:
            raise DimensionError("ambient dimension mismatch")
        if self.is_zero():
            return () if x.is_zero() else None
        flat = x.flatten()
        coords = self._pivot_solver.apply([flat[p] for p in self._pivots])
        # candidate from the pivot coordinates must reconstruct x exactly
        for idx in range(len(flat)):
            if sum(c * row[idx] for c, row in zip(coords, self._flat_basis)) != flat[idx]:
                return None
        return coords

    def contains(self, x: NilMatrix) -> bool:
        return self.coords_of(x) is not None

    def contains_subspace(self, other: "LieSubspace") -> bool:
        return all(self.contains(b) for b in other.basis)

    def from_coords(self, coords: Sequence[Scalar]) -> NilMatrix:
        if len(coords) != self.dim:
            raise DimensionError("coordinate length does not match basis size")
        acc = NilMatrix.zero(self.ambient_dim)
        for c, b in zip(coords, self.basis):
            acc = acc + b.scale(c)
        return acc

    def closed_under_bracket(self) -> bool:
        return all(self.contains(a.bracket(b)) for a in self.basis for b in self.basis)


def nt_full(dim: int) -> LieSubspace:
    """The full algebra of strictly upper triangular dim x dim matrices."""
    basis = [NilMatrix.elementary(dim, i, j) for i in range(dim) for j in range(i + 1, dim)]
    return LieSubspace(dim, basis)


def lower_central_series(g: LieSubspace) -> list[LieSubspace]:
    """Nonzero terms of the descending chain gamma_1 = g, gamma_{i+1} = [g, gamma_i];
    the nilpotency class is the length of the returned list."""
    if not g.closed_under_bracket():
        raise NotClosedError("subspace is not closed under the bracket")
    terms = [g]
    current = g
    while True:
        brackets = [a.bracket(b) for a in g.basis for b in current.basis]
        nxt = LieSubspace.span(g.ambient_dim, brackets)
        if nxt.is_zero():
            return terms
        terms.append(nxt)
        current = nxt


def nilpotency_class(g: LieSubspace) -> int:
    if g.is_zero():
        return 0
    return len(lower_central_series(g))


def derived_subalgebra(g: LieSubspace) -> LieSubspace:
    return LieSubspace.span(g.ambient_dim, [a.bracket(b) for a in g.basis for b in g.basis])


def adapted_basis_2step(g: LieSubspace) -> tuple[NilMatrix, ...]:
    """Ordered basis listing the reduced row-echelon basis of [g, g] first and
    then completing with the input basis vectors in their given order."""
    if nilpotency_class(g) > 2:
        raise ClassError("algebra has nilpotency class greater than 2")
    derived = derived_subalgebra(g)
    chosen = list(derived.basis)
    space = derived
    for b in g.basis:
        if not space.contains(b):
            chosen.append(b)
            space = LieSubspace(g.ambient_dim, chosen)
    return tuple(chosen)


def ad_matrix(x: NilMatrix, basis: LieSubspace) -> QMatrix:
    """Matrix of ad_x : Y -> [x, Y] in the given ordered basis."""
    if not basis.contains(x):
        raise NotClosedError("x lies outside the span of the basis")
    if basis.is_zero():
        raise DomainError("ad matrix needs a nonzero basis")
    cols = []
    for b in basis.basis:
        c = basis.coords_of(x.bracket(b))
        if c is None:
            raise NotClosedError("bracket escapes the span of the basis")
        cols.append(c)
    n = basis.dim
    return QMatrix.build(n, n, lambda i, j: cols[j][i])


def differential_from_generator_images(
    domain_basis: Sequence[UniMatrix],
    images: Sequence[UniMatrix],
    algebra_basis: LieSubspace,
    codomain_basis: LieSubspace | None = None,
) -> QMatrix:
    """Matrix (in the given bases) of the unique linear map with
    log(domain_basis[i]) -> log(images[i]), verified to preserve brackets.

    For an endomorphism leave codomain_basis unset; for a map into a different
    algebra pass the codomain's ordered basis.
    """
    if len(domain_basis) != len(images):
        raise DimensionError("generator and image counts differ")
    cod = codomain_basis if codomain_basis is not None else algebra_basis
    logs = [log_unipotent(g) for g in domain_basis]
    img_logs = [log_unipotent(h) for h in images]
    dom_coords = []
    for x in logs:
        c = algebra_basis.coords_of(x)
        if c is None:
            raise SpanError("log of a domain generator lies outside the algebra")
        dom_coords.append(c)
    img_coords = []
    for y in img_logs:
        c = cod.coords_of(y)
        if c is None:
            raise SpanError("log of an image lies outside the codomain algebra")
        img_coords.append(c)
    n = algebra_basis.dim
    m = cod.dim
    lmat = QMatrix.build(n, len(dom_coords), lambda i, j: dom_coords[j][i])
    _, pivots = rref(lmat.transpose())
    if len(pivots) != n:
        raise SpanError("logs of the domain generators do not span the algebra")
    # pick n independent generators and solve column by column
    sel, space_rows = [], []
    for j, c in enumerate(dom_coords):
        trial = space_rows + [list(c)]
        if len(rref(QMatrix.from_rows(trial))[1]) == len(trial):
            sel.append(j)
            space_rows = trial
        if len(sel) == n:
            break
    lsq = QMatrix.build(n, n, lambda i, j: dom_coords[sel[j]][i])
    msq = QMatrix.build(m, n, lambda i, j: img_coords[sel[j]][i])
    phi = msq * inverse(lsq)
    for c, ic in zip(dom_coords, img_coords):
        if phi.apply(c) != ic:
            raise NotAHomomorphismError("generator images are not linearly consistent")

    def apply(x: NilMatrix) -> NilMatrix:
        coords = algebra_basis.coords_of(x)
        if coords is None:
            raise SpanError("element lies outside the algebra")
        return cod.from_coords(phi.apply(coords))

    for a in algebra_basis.basis:
        for b in algebra_basis.basis:
            if apply(a.bracket(b)) != apply(a).bracket(apply(b)):
                raise NotAHomomorphismError("generator images do not preserve brackets")
    return phi


def apply_linear_map(
    matrix: QMatrix,
    domain: LieSubspace,
    codomain: LieSubspace,
    x: NilMatrix,
) -> NilMatrix:
    """Apply a linear map given by its matrix in the two ordered bases."""
    coords = domain.coords_of(x)
    if coords is None:
        raise SpanError("element lies outside the domain")
    return codomain.from_coords(matrix.apply(coords))
