"""Affine representation of Aff(G) for a 2-step nilpotent group G: the block
embedding into (n+1) x (n+1) matrices, built from an adapted basis that lists
the derived subalgebra first.

An automorphism embeds as diag(differential, 1); a translation g embeds as the
exponential of the nilpotent block [[ad_X / 2, X], [0, 0]] with X = log g; the
affine element (g, alpha) embeds as the product translation * automorphism.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import (
    ClassError,
    DimensionError,
    InvalidMapError,
    NotAHomomorphismError,
    SpanError,
)
from .exactmath import QMatrix, Scalar, Vector, as_fraction, det, inverse
from .unipotent import (
    LieSubspace,
    NilMatrix,
    UniMatrix,
    adapted_basis_2step,
    derived_subalgebra,
    exp_unipotent,
    log_unipotent,
    nilpotency_class,
)


class AffineRep:
    """Coordinate frame for the affine embedding of a class <= 2 algebra."""

    def __init__(self, algebra: LieSubspace, adapted: Sequence[NilMatrix] | None = None):
        if nilpotency_class(algebra) > 2:
            raise ClassError("affine representation requires nilpotency class <= 2")
        self.algebra = algebra
        if adapted is None:
            adapted = adapted_basis_2step(algebra)
        else:
            adapted = tuple(adapted)
            self._validate_adapted(algebra, adapted)
        self.adapted = tuple(adapted)
        self.space = LieSubspace(algebra.ambient_dim, self.adapted)
        if self.space != algebra:
            raise SpanError("adapted basis does not span the algebra")
        self.n = self.space.dim
        self.derived_dim = derived_subalgebra(algebra).dim
        # structure constants: coordinates of [b_i, b_j] in the adapted frame
        basis = self.space.basis
        self._structure = tuple(
            tuple(self.space.coords_of(a.bracket(b)) for b in basis) for a in basis
        )
        n = self.n
        self._ad_components = tuple(
            QMatrix.build(n, n, lambda i, j, a=a: self._structure[a][j][i]) for a in range(n)
        )

    @staticmethod
    def _validate_adapted(algebra: LieSubspace, adapted: Sequence[NilMatrix]):
        derived = derived_subalgebra(algebra)
        k = derived.dim
        if len(adapted) < k:
            raise SpanError("adapted basis shorter than the derived subalgebra")
        head = LieSubspace.span(algebra.ambient_dim, adapted[:k])
        if head != derived:
            raise SpanError("adapted basis must list a basis of the derived subalgebra first")

    def coords_of(self, x: NilMatrix) -> Vector:
        c = self.space.coords_of(x)
        if c is None:
            raise SpanError("element lies outside the algebra")
        return c

    def from_coords(self, coords: Sequence[Scalar]) -> NilMatrix:
        return self.space.from_coords(coords)

    def ad_matrix_of(self, x: NilMatrix) -> QMatrix:
        return self.ad_matrix_of_coords(self.coords_of(x))

    def ad_matrix_of_coords(self, xi: Sequence[Fraction]) -> QMatrix:
        acc = QMatrix.zeros(self.n, self.n)
        for c, comp in zip(xi, self._ad_components):
            if c != 0:
                acc = acc + comp.scale(c)
        return acc

    def log_coords(self, g: UniMatrix) -> Vector:
        return self.coords_of(log_unipotent(g))

    def group_element(self, coords: Sequence[Scalar]) -> UniMatrix:
        return exp_unipotent(self.from_coords(coords))

    def is_bracket_preserving(self, m: QMatrix) -> bool:
        """Bracket preservation checked in coordinates through the cached
        structure constants: m[b_i, b_j] must equal [m b_i, m b_j]."""
        if m.rows != self.n or m.cols != self.n:
            return False
        n = self.n
        zero = (Fraction(0),) * n
        cols = [m.col(j) for j in range(n)]
        for i in range(n):
            for j in range(n):
                lhs = m.apply(self._structure[i][j])
                rhs = list(zero)
                for a in range(n):
                    if cols[i][a] == 0:
                        continue
                    for b in range(n):
                        coeff = cols[i][a] * cols[j][b]
                        if coeff == 0:
                            continue
                        struct = self._structure[a][b]
                        for t in range(n):
                            if struct[t] != 0:
                                rhs[t] += coeff * struct[t]
                if list(lhs) != rhs:
                    return False
        return True


def _embed_translation_coords(rep: AffineRep, xi) -> QMatrix:
    half_ad = rep.ad_matrix_of_coords(xi).scale(Fraction(1, 2))
    n = rep.n

    def entry(i, j):
        if i < n and j < n:
            return half_ad[i, j] + (1 if i == j else 0)
        if i < n and j == n:
            return xi[i]
        return 1 if i == j else 0

    # exp of [[ad_X/2, X], [0, 0]] is I + block: in class <= 2 the square
    # vanishes because ad_X^2 = 0 and ad_X applied to X is [X, X] = 0
    return QMatrix.build(n + 1, n + 1, entry)


def embed_translation(rep: AffineRep, g: UniMatrix | NilMatrix) -> QMatrix:
    """exp of the (n+1) x (n+1) nilpotent block [[ad_X / 2, X], [0, 0]]."""
    x = log_unipotent(g) if isinstance(g, UniMatrix) else g
    return _embed_translation_coords(rep, rep.coords_of(x))


def _automorphism_block(rep: AffineRep, alpha_star: QMatrix) -> QMatrix:
    n = rep.n
    if alpha_star.rows != n or alpha_star.cols != n:
        raise DimensionError("differential has the wrong size")

    def entry(i, j):
        if i < n and j < n:
            return alpha_star[i, j]
        return 1 if i == j else 0

    return QMatrix.build(n + 1, n + 1, entry)


def embed_automorphism(rep: AffineRep, alpha_star: QMatrix) -> QMatrix:
    """Block matrix diag(alpha_star, 1); alpha_star must preserve brackets."""
    if not rep.is_bracket_preserving(alpha_star):
        raise NotAHomomorphismError("differential does not preserve brackets")
    return _automorphism_block(rep, alpha_star)


class AffineElement:
    """A pair (translation, differential) together with its cached embedding.

    The differential must preserve brackets; it may be singular, modelling an
    affine endomorphism, in which case inversion raises InvalidMapError.
    """

    def __init__(self, rep: AffineRep, translation: UniMatrix, differential: QMatrix):
        if translation.dim != rep.algebra.ambient_dim:
            raise DimensionError("translation lives in the wrong ambient model")
        if not rep.is_bracket_preserving(differential):
            raise NotAHomomorphismError("differential does not preserve brackets")
        self.rep = rep
        self.translation = translation
        self.differential = differential
        self._embedded: QMatrix | None = None
        self._trans_coords = None

    @staticmethod
    def _make(rep: AffineRep, translation: UniMatrix, differential: QMatrix) -> "AffineElement":
        """Internal constructor for elements derived from validated ones
        (products, inverses, powers preserve the bracket condition)."""
        if translation.dim != rep.algebra.ambient_dim:
            raise DimensionError("translation lives in the wrong ambient model")
        e = object.__new__(AffineElement)
        e.rep = rep
        e.translation = translation
        e.differential = differential
        e._embedded = None
        e._trans_coords = None
        return e

    @property
    def embedded(self) -> QMatrix:
        if self._embedded is None:
            self._embedded = _embed_translation_coords(
                self.rep, self.translation_coords
            ) * _automorphism_block(self.rep, self.differential)
        return self._embedded

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def identity(rep: AffineRep) -> "AffineElement":
        return AffineElement._make(rep, UniMatrix.identity(rep.algebra.ambient_dim), QMatrix.identity(rep.n))

    @staticmethod
    def pure_translation(rep: AffineRep, g: UniMatrix) -> "AffineElement":
        # the identity differential trivially preserves brackets
        return AffineElement._make(rep, g, QMatrix.identity(rep.n))

    @staticmethod
    def pure_automorphism(rep: AffineRep, differential: QMatrix) -> "AffineElement":
        return AffineElement(rep, UniMatrix.identity(rep.algebra.ambient_dim), differential)

    @staticmethod
    def from_coords(rep: AffineRep, translation_coords: Sequence[Scalar], differential: QMatrix) -> "AffineElement":
        return AffineElement(rep, rep.group_element(translation_coords), differential)

    @staticmethod
    def from_embedded(rep: AffineRep, embedded: QMatrix) -> "AffineElement":
        """Recover (translation, differential) from an embedded matrix."""
        n = rep.n
        if embedded.rows != n + 1 or embedded.cols != n + 1:
            raise DimensionError("embedded matrix has the wrong size")
        for j in range(n):
            if embedded[n, j] != 0:
                raise DimensionError("embedded matrix must have last row (0,...,0,1)")
        if embedded[n, n] != 1:
            raise DimensionError("embedded matrix must have last row (0,...,0,1)")
        xi = tuple(embedded[i, n] for i in range(n))
        x = rep.from_coords(xi)
        half_ad = rep.ad_matrix_of(x).scale(Fraction(1, 2))
        top = QMatrix.build(n, n, lambda i, j: embedded[i, j])
        differential = inverse(QMatrix.identity(n) + half_ad) * top
        return AffineElement(rep, exp_unipotent(x), differential)

    # -- properties ------------------------------------------------------------

    @property
    def translation_coords(self) -> Vector:
        if self._trans_coords is None:
            self._trans_coords = self.rep.log_coords(self.translation)
        return self._trans_coords

    def is_identity(self) -> bool:
        return self.translation.is_identity() and self.differential == QMatrix.identity(self.rep.n)

    def apply_automorphism(self, g: UniMatrix) -> UniMatrix:
        """Group-level image of g under the differential: exp . diff . log."""
        return exp_unipotent(self.rep.from_coords(self.differential.apply(self.rep.log_coords(g))))

    # -- group structure ---------------------------------------------------------

    def __mul__(self, other: "AffineElement") -> "AffineElement":
        if other.rep is not self.rep and other.rep.space != self.rep.space:
            raise DimensionError("mixed affine representations")
        moved = exp_unipotent(self.rep.from_coords(self.differential.apply(other.translation_coords)))
        return AffineElement._make(
            self.rep,
            self.translation * moved,
            self.differential * other.differential,
        )

    def inverse(self) -> "AffineElement":
        if det(self.differential) == 0:
            raise InvalidMapError("differential is singular")
        dinv = inverse(self.differential)
        helper = AffineElement._make(self.rep, UniMatrix.identity(self.rep.algebra.ambient_dim), dinv)
        return AffineElement._make(self.rep, helper.apply_automorphism(self.translation.inverse()), dinv)

    def __pow__(self, k: int) -> "AffineElement":
        if k < 0:
            return self.inverse() ** (-k)
        acc = AffineElement._make(
            self.rep, UniMatrix.identity(self.rep.algebra.ambient_dim), QMatrix.identity(self.rep.n)
        )
        for _ in range(k):
            acc = acc * self
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineElement):
            return NotImplemented
        return self.translation == other.translation and self.differential == other.differential

    def __hash__(self):
        return hash((self.translation, self.differential))

    def act(self, point: Sequence[Scalar]) -> Vector:
        return act_on_point(self, point)


def embed_affine(rep: AffineRep, e: AffineElement) -> QMatrix:
    """The (n+1) x (n+1) image; multiplicative in e."""
    if e.rep.space != rep.space:
        raise DimensionError("element belongs to a different representation")
    return e.embedded


def act_on_point(e: AffineElement | QMatrix, point: Sequence[Scalar]) -> Vector:
    """Affine action on exponential coordinates: the embedded matrix applied
    to (point, 1), truncated back to the point."""
    m = e.embedded if isinstance(e, AffineElement) else e
    if not m.is_square:
        raise DimensionError("embedded matrix must be square")
    n = m.rows - 1
    if len(point) != n:
        raise DimensionError("point has the wrong dimension")
    image = m.apply([as_fraction(p) for p in point] + [Fraction(1)])
    return image[:n]


def verify_equivariance(
    rep: AffineRep, alpha_star: QMatrix, g: UniMatrix
) -> tuple[bool, dict | None]:
    """Exact check of phi1(alpha) phi2(g) phi1(alpha)^-1 = phi2(alpha(g)).

    alpha_star is used raw, so a corrupted differential yields False with a
    witness instead of an error (the differential must still be invertible).
    """
    if det(alpha_star) == 0:
        raise InvalidMapError("differential is singular")
    phi1 = _automorphism_block(rep, alpha_star)
    lhs = phi1 * embed_translation(rep, g) * inverse(phi1)
    image = exp_unipotent(rep.from_coords(alpha_star.apply(rep.log_coords(g))))
    rhs = embed_translation(rep, image)
    if lhs == rhs:
        return True, None
    return False, {"element": g, "lhs": lhs, "rhs": rhs}
