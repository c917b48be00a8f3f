"""Nilpotent groups in Mal'cev coordinates: polynomial group laws with a
faithful unipotent matrix model, coordinate extraction, lattice and isolator
membership, and a catalog of built-in lattices.

Coordinate conventions follow the exponent order of the basis: the element
with coordinates (z_1, ..., z_k) is a_1**z_1 * ... * a_k**z_k.  The same law
evaluated at rational coordinates gives the rational completion.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    CatalogError,
    DimensionError,
    DomainError,
    NotInGroupError,
)
from .exactmath import QMatrix, Scalar, Vector, as_fraction
from .unipotent import (
    LieSubspace,
    NilMatrix,
    UniMatrix,
    exp_unipotent,
    log_unipotent,
    lower_central_series,
    rational_power,
)


@dataclass(frozen=True)
class MPoly:
    """Multivariate polynomial with rational coefficients, stored as a sorted
    tuple of (exponent-tuple, coefficient) terms."""

    arity: int
    terms: tuple[tuple[tuple[int, ...], Fraction], ...]

    @staticmethod
    def from_terms(arity: int, terms) -> "MPoly":
        acc: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in terms:
            exps = tuple(exps)
            if len(exps) != arity:
                raise DimensionError("exponent tuple length must equal arity")
            coeff = as_fraction(coeff)
            acc[exps] = acc.get(exps, Fraction(0)) + coeff
        cleaned = tuple(sorted((e, c) for e, c in acc.items() if c != 0))
        return MPoly(arity, cleaned)

    @staticmethod
    def zero(arity: int) -> "MPoly":
        return MPoly(arity, ())

    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, args: Sequence[Scalar]) -> Fraction:
        if len(args) != self.arity:
            raise DimensionError("argument count must equal arity")
        vals = [as_fraction(a) for a in args]
        total = Fraction(0)
        for exps, coeff in self.terms:
            term = coeff
            for v, e in zip(vals, exps):
                if e:
                    term *= v**e
            total += term
        return total

    def remap(self, new_arity: int, positions: Sequence[int]) -> "MPoly":
        """Reinterpret variable i as variable positions[i] of a wider polynomial."""
        return MPoly.from_terms(
            new_arity,
            (
                (tuple(sum(e for v, e in zip(positions, exps) if v == p) for p in range(new_arity)), c)
                for exps, c in self.terms
            ),
        )


@dataclass(frozen=True)
class LatticeElement:
    """Coordinate vector of a group element; integral coordinates mean
    membership in the lattice itself rather than its rational completion."""

    coords: tuple[Fraction, ...]

    @staticmethod
    def of(*coords: Scalar) -> "LatticeElement":
        return LatticeElement(tuple(as_fraction(c) for c in coords))

    @staticmethod
    def from_seq(coords: Sequence[Scalar]) -> "LatticeElement":
        return LatticeElement(tuple(as_fraction(c) for c in coords))

    @property
    def rank(self) -> int:
        return len(self.coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)


class MalcevLaw:
    """Group law in Mal'cev coordinates backed by a faithful matrix model.

    When explicit product/power polynomials are supplied the coordinate
    operations evaluate them directly and the matrix model is an independent
    oracle; without polynomials the operations route through the model.
    """

    def __init__(
        self,
        rank: int,
        basis: Sequence[UniMatrix],
        product_polys: Sequence[MPoly] | None = None,
        power_polys: Sequence[MPoly] | None = None,
    ):
        if rank <= 0 or len(basis) != rank:
            raise DimensionError("rank must be positive and match the basis length")
        self.rank = rank
        self.basis = tuple(basis)
        self.ambient_dim = basis[0].dim
        for g in basis:
            if g.dim != self.ambient_dim:
                raise DimensionError("matrix model generators must share one ambient dimension")
        self.logs = tuple(log_unipotent(g) for g in self.basis)
        self.algebra = LieSubspace(self.ambient_dim, self.logs)
        if not self.algebra.closed_under_bracket():
            raise DomainError("logs of the basis do not span a Lie subalgebra")
        if product_polys is not None:
            product_polys = tuple(product_polys)
            if len(product_polys) != rank:
                raise DimensionError("need one product polynomial per coordinate")
            for i, p in enumerate(product_polys):
                if p.arity != 2 * i:
                    raise DimensionError(f"product polynomial {i} must have arity {2 * i}")
        if power_polys is not None:
            power_polys = tuple(power_polys)
            if len(power_polys) != rank:
                raise DimensionError("need one power polynomial per coordinate")
            for i, p in enumerate(power_polys):
                if p.arity != i + 1:
                    raise DimensionError(f"power polynomial {i} must have arity {i + 1}")
        self.product_polys = product_polys
        self.power_polys = power_polys
        self._lcs: list[LieSubspace] | None = None

    @property
    def has_explicit_polys(self) -> bool:
        return self.product_polys is not None and self.power_polys is not None

    def identity(self) -> LatticeElement:
        return LatticeElement((Fraction(0),) * self.rank)

    def algebra_lcs(self) -> list[LieSubspace]:
        if self._lcs is None:
            self._lcs = lower_central_series(self.algebra)
        return self._lcs

    # -- coordinate <-> matrix ------------------------------------------------

    def matrix_of(self, u: LatticeElement) -> UniMatrix:
        self._check(u)
        acc = UniMatrix.identity(self.ambient_dim)
        for lg, c in zip(self.logs, u.coords):
            if c != 0:
                acc = acc * exp_unipotent(lg.scale(c))
        return acc

    def coords_of_matrix(self, g: UniMatrix) -> LatticeElement:
        """Peel exponents along the Mal'cev filtration: the coefficient of
        log(a_i) in log(residual) is the i-th coordinate exactly."""
        if g.dim != self.ambient_dim:
            raise DimensionError("ambient dimension mismatch")
        residual = g
        coords: list[Fraction] = []
        for i in range(self.rank):
            c = self.algebra.coords_of(log_unipotent(residual))
            if c is None:
                raise NotInGroupError("matrix does not lie in the group generated by the basis")
            coords.append(c[i])
            if c[i] != 0:
                residual = exp_unipotent(self.logs[i].scale(-c[i])) * residual
        if not residual.is_identity():
            raise NotInGroupError("residual did not reach the identity")
        return LatticeElement(tuple(coords))

    # -- group operations -----------------------------------------------------

    def multiply(self, u: LatticeElement, v: LatticeElement) -> LatticeElement:
        self._check(u)
        self._check(v)
        if self.product_polys is None:
            return self.coords_of_matrix(self.matrix_of(u) * self.matrix_of(v))
        out = []
        for i in range(self.rank):
            w = u.coords[i] + v.coords[i]
            p = self.product_polys[i]
            if not p.is_zero():
                w += p(u.coords[:i] + v.coords[:i])
            out.append(w)
        return LatticeElement(tuple(out))

    def power(self, u: LatticeElement, t: Scalar) -> LatticeElement:
        self._check(u)
        t = as_fraction(t)
        if self.power_polys is None:
            return self.coords_of_matrix(rational_power(self.matrix_of(u), t))
        out = []
        for i in range(self.rank):
            w = t * u.coords[i]
            q = self.power_polys[i]
            if not q.is_zero():
                w += q(u.coords[:i] + (t,))
            out.append(w)
        return LatticeElement(tuple(out))

    def inverse(self, u: LatticeElement) -> LatticeElement:
        return self.power(u, -1)

    def _check(self, u: LatticeElement):
        if u.rank != self.rank:
            raise DimensionError("coordinate length does not match the rank")


@dataclass(frozen=True)
class Lattice:
    """A finitely generated torsion-free nilpotent group carried by its law."""

    law: MalcevLaw
    name: str

    def __post_init__(self):
        # generators must read back as standard basis vectors
        for i, g in enumerate(self.law.basis):
            expected = tuple(Fraction(1) if j == i else Fraction(0) for j in range(self.law.rank))
            if self.law.coords_of_matrix(g).coords != expected:
                raise DomainError("matrix model generator does not extract to a standard basis vector")


# ---------------------------------------------------------------------------
# module-level operation surface
# ---------------------------------------------------------------------------


def mc_multiply(law: MalcevLaw, u: LatticeElement, v: LatticeElement) -> LatticeElement:
    return law.multiply(u, v)


def mc_inverse(law: MalcevLaw, u: LatticeElement) -> LatticeElement:
    return law.inverse(u)


def mc_power(law: MalcevLaw, u: LatticeElement, t: Scalar) -> LatticeElement:
    return law.power(u, t)


def matrix_from_coordinates(law: MalcevLaw, u: LatticeElement) -> UniMatrix:
    return law.matrix_of(u)


def coordinates_from_matrix(law: MalcevLaw, g: UniMatrix) -> LatticeElement:
    return law.coords_of_matrix(g)


def lattice_contains(law: MalcevLaw, g: UniMatrix | LatticeElement) -> bool:
    """True iff the element has integer Mal'cev coordinates."""
    if isinstance(g, LatticeElement):
        law._check(g)
        return g.is_integral()
    return law.coords_of_matrix(g).is_integral()


def isolator_contains(law: MalcevLaw, i: int, g: UniMatrix | LatticeElement) -> bool:
    """Membership in the isolator of the i-th lower central series term:
    log(g) must lie in gamma_i of the rational Lie algebra."""
    if i < 1:
        raise DomainError("series index must be at least 1")
    x = log_unipotent(g if isinstance(g, UniMatrix) else law.matrix_of(g))
    lcs = law.algebra_lcs()
    if i > len(lcs):
        return x.is_zero()
    return lcs[i - 1].contains(x)


@dataclass(frozen=True)
class LawReport:
    passed: bool
    checks_run: int
    failure: dict | None


def verify_law_axioms_sampled(law: MalcevLaw, samples: Sequence[LatticeElement]) -> LawReport:
    """Check associativity, identity, inverses, and matrix-model agreement on
    the given samples; the first counterexample is reported."""
    samples = [s if isinstance(s, LatticeElement) else LatticeElement.from_seq(s) for s in samples]
    checks = 0
    e = law.identity()

    def fail(kind, **data):
        return LawReport(False, checks, {"check": kind, **data})

    for u in samples:
        checks += 1
        if law.multiply(e, u) != u or law.multiply(u, e) != u:
            return fail("identity", element=u.coords)
        if law.multiply(u, law.inverse(u)) != e:
            return fail("inverse", element=u.coords)
        if law.coords_of_matrix(law.matrix_of(u)) != u:
            return fail("matrix-round-trip", element=u.coords)
    pairs = list(zip(samples, samples[1:] + samples[:1]))
    for u, v in pairs:
        checks += 1
        w = law.multiply(u, v)
        if law.matrix_of(w) != law.matrix_of(u) * law.matrix_of(v):
            return fail("matrix-oracle-product", left=u.coords, right=v.coords)
    triples = list(zip(samples, samples[1:] + samples[:1], samples[2:] + samples[:2]))
    for u, v, w in triples:
        checks += 1
        if law.multiply(law.multiply(u, v), w) != law.multiply(u, law.multiply(v, w)):
            return fail("associativity", triple=(u.coords, v.coords, w.coords))
    return LawReport(True, checks, None)


# ---------------------------------------------------------------------------
# built-in catalog
# ---------------------------------------------------------------------------


def _free_abelian(k: int) -> Lattice:
    if k < 1:
        raise CatalogError("free_abelian needs rank >= 1")
    dim = k + 1
    basis = [
        UniMatrix(QMatrix.build(dim, dim, lambda r, c, i=i: 1 if r == c else (1 if (r, c) == (i, k) else 0)))
        for i in range(k)
    ]
    zero_products = [MPoly.zero(2 * i) for i in range(k)]
    zero_powers = [MPoly.zero(i + 1) for i in range(k)]
    return Lattice(MalcevLaw(k, basis, zero_products, zero_powers), f"free_abelian({k})")


def _heisenberg_n(n: int) -> Lattice:
    """Heisenberg-type lattice whose center entry is z/n; n = 1 is the
    integral Heisenberg group.  Basis order (a, b, c) with coordinates
    a**x b**y c**z."""
    if n < 1:
        raise CatalogError("heisenberg_n needs n >= 1")
    a = UniMatrix(QMatrix.from_rows([[1, 0, 0], [0, 1, 1], [0, 0, 1]]))
    b = UniMatrix(QMatrix.from_rows([[1, 1, 0], [0, 1, 0], [0, 0, 1]]))
    c = UniMatrix(QMatrix.from_rows([[1, 0, Fraction(1, n)], [0, 1, 0], [0, 0, 1]]))
    # z-law: z1 + z2 + n * x2 * y1 ; power: m z + n * m(m-1)/2 * x y
    p3 = MPoly.from_terms(4, [(((0, 1, 1, 0)), Fraction(n))])
    q3 = MPoly.from_terms(3, [(((1, 1, 2)), Fraction(n, 2)), (((1, 1, 1)), Fraction(-n, 2))])
    products = [MPoly.zero(0), MPoly.zero(2), p3]
    powers = [MPoly.zero(1), MPoly.zero(2), q3]
    name = "heisenberg" if n == 1 else f"heisenberg_n({n})"
    return Lattice(MalcevLaw(3, (a, b, c), products, powers), name)


def _block_embed(g: UniMatrix, offsets: list[int], total: int, block: int) -> UniMatrix:
    start = offsets[block]
    d = g.dim

    def entry(r, c):
        if start <= r < start + d and start <= c < start + d:
            return g.body[r - start, c - start]
        return 1 if r == c else 0

    return UniMatrix(QMatrix.build(total, total, entry))


def direct_product(*factors: Lattice) -> Lattice:
    """Direct product with concatenated coordinates and a block-diagonal model."""
    if not factors:
        raise CatalogError("direct product needs at least one factor")
    offsets = []
    total = 0
    for f in factors:
        offsets.append(total)
        total += f.law.ambient_dim
    basis: list[UniMatrix] = []
    products: list[MPoly] = []
    powers: list[MPoly] = []
    have_polys = all(f.law.has_explicit_polys for f in factors)
    coord_offset = 0
    rank = sum(f.law.rank for f in factors)
    for bi, f in enumerate(factors):
        for i, g in enumerate(f.law.basis):
            basis.append(_block_embed(g, offsets, total, bi))
            gi = coord_offset + i
            if have_polys:
                # local (u_1..u_i, v_1..v_i) land at global slots
                # (coord_offset.., gi + coord_offset..) inside arity 2*gi
                u_pos = [coord_offset + v for v in range(i)]
                products.append(f.law.product_polys[i].remap(2 * gi, u_pos + [gi + p for p in u_pos]))
                powers.append(f.law.power_polys[i].remap(gi + 1, u_pos + [gi]))
        coord_offset += f.law.rank
    name = " x ".join(f.name for f in factors)
    law = MalcevLaw(rank, basis, products if have_polys else None, powers if have_polys else None)
    return Lattice(law, name)


def builtin_lattice(name: str, *params) -> Lattice:
    """Catalog constructor: free_abelian(k), heisenberg, heisenberg_n(n),
    direct_product(lattice, ...)."""
    if name == "free_abelian":
        return _free_abelian(int(params[0]))
    if name == "heisenberg":
        return _heisenberg_n(1)
    if name == "heisenberg_n":
        return _heisenberg_n(int(params[0]))
    if name == "direct_product":
        return direct_product(*params)
    raise CatalogError(f"unknown lattice {name!r}")
