"""Almost-crystallographic groups as finite unions of lattice cosets in the
embedded affine representation: catalog constructors, holonomy extraction,
membership, torsion tests, self-map verification, semi-conjugacy verification,
and the JSON catalog file format."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    CatalogError,
    DimensionError,
    InvalidMapError,
    NotAHomomorphismError,
    NotFiniteError,
    NotInGroupError,
    ParseError,
)
from .exactmath import (
    QMatrix,
    Vector,
    det,
    matrix_from_lists,
    matrix_to_lists,
    vector_from_list,
    vector_to_list,
)
from .affinerep import AffineElement, AffineRep
from .malcev import (
    Lattice,
    LatticeElement,
    builtin_lattice,
    coordinates_from_matrix,
    lattice_contains,
    matrix_from_coordinates,
)
from .unipotent import (
    LieSubspace,
    NilMatrix,
    UniMatrix,
    differential_from_generator_images,
    log_unipotent,
    nilpotency_class,
    rational_power,
)

HOLONOMY_CLOSURE_BOUND = 1000


class HolonomyGroup:
    """The finite group of holonomy differentials with its multiplication table."""

    def __init__(self, elements: Sequence[QMatrix]):
        self.elements = tuple(elements)
        self.order = len(self.elements)
        index = {m.entries: i for i, m in enumerate(self.elements)}
        table = []
        for a in self.elements:
            row = []
            for b in self.elements:
                prod = (a * b).entries
                if prod not in index:
                    raise NotFiniteError("holonomy differentials are not closed under multiplication")
                row.append(index[prod])
            table.append(tuple(row))
        self.table = tuple(table)
        if self.elements[0] != QMatrix.identity(self.elements[0].rows):
            raise CatalogError("identity differential must come first")
        for i in range(self.order):
            if i not in self.table[i]:
                raise NotFiniteError("holonomy element has no inverse")

    def index_of(self, m: QMatrix) -> int | None:
        for i, e in enumerate(self.elements):
            if e == m:
                return i
        return None

    def element_order(self, i: int) -> int:
        k, j = 1, i
        while j != 0:
            j = self.table[j][i]
            k += 1
            if k > self.order + 1:
                raise NotFiniteError("element order exceeds the group order")
        return k


def _close_differentials(seeds: Sequence[QMatrix], bound: int = HOLONOMY_CLOSURE_BOUND) -> list[QMatrix]:
    elements: list[QMatrix] = []
    seen: set = set()
    for m in seeds:
        if m.entries not in seen:
            seen.add(m.entries)
            elements.append(m)
    frontier = list(elements)
    while frontier:
        nxt = []
        for a in frontier:
            for b in elements:
                for prod in (a * b, b * a):
                    if prod.entries not in seen:
                        if len(elements) >= bound:
                            raise NotFiniteError(
                                f"holonomy closure exceeded {bound} elements; input is not almost-crystallographic"
                            )
                        seen.add(prod.entries)
                        elements.append(prod)
                        nxt.append(prod)
        frontier = nxt
    return elements


class ACGroup:
    """Lattice plus one affine coset representative per holonomy element,
    identity coset first.  Construction verifies holonomy closure, normality
    of the lattice under coset conjugation, and distinct differentials."""

    def __init__(self, lattice: Lattice, cosets: Sequence[tuple], name: str, rep: AffineRep | None = None):
        self.lattice = lattice
        self.name = name
        law = lattice.law
        self.rep = rep if rep is not None else AffineRep(law.algebra)
        if self.rep.space != LieSubspace(law.ambient_dim, law.logs):
            raise CatalogError("representation does not match the lattice's algebra")
        reps = []
        for translation, differential in cosets:
            if isinstance(translation, UniMatrix):
                reps.append(AffineElement(self.rep, translation, differential))
            else:
                reps.append(AffineElement.from_coords(self.rep, translation, differential))
        self.coset_reps = tuple(reps)
        self._validate()
        self.holonomy = holonomy_group(self)
        self._lattice_gens = tuple(
            AffineElement.pure_translation(self.rep, g) for g in law.basis
        )

    # -- structural checks -------------------------------------------------------

    def _validate(self):
        if not self.coset_reps:
            raise CatalogError("a group needs at least the identity coset")
        if not self.coset_reps[0].is_identity():
            raise CatalogError("identity coset must be listed first")
        diffs = [c.differential for c in self.coset_reps]
        if len({d.entries for d in diffs}) != len(diffs):
            raise CatalogError("coset representatives must have pairwise distinct differentials")
        closure = _close_differentials(diffs)
        if len(closure) != len(diffs):
            raise CatalogError("coset differentials do not form a group: closure adds new elements")
        for c in self.coset_reps:
            if det(c.differential) == 0:
                raise CatalogError("holonomy differential is singular")
        for c in self.coset_reps[1:]:
            for g in self.lattice.law.basis:
                conj = c * AffineElement.pure_translation(self.rep, g) * c.inverse()
                if conj.differential != QMatrix.identity(self.rep.n):
                    raise CatalogError("conjugate of a translation is not a translation")
                if not lattice_contains(self.lattice.law, conj.translation):
                    raise CatalogError("lattice is not normalized by a coset representative")

    # -- elements ------------------------------------------------------------------

    def generators(self) -> tuple[AffineElement, ...]:
        """Lattice basis translations followed by the non-identity coset reps."""
        return self._lattice_gens + self.coset_reps[1:]

    def element(self, coords: Sequence, coset_index: int = 0) -> AffineElement:
        """The group element (lattice part with the given Mal'cev coordinates)
        times the chosen coset representative."""
        if not 0 <= coset_index < len(self.coset_reps):
            raise CatalogError(f"coset index {coset_index} out of range")
        lam = matrix_from_coordinates(self.lattice.law, LatticeElement.from_seq(coords))
        return AffineElement.pure_translation(self.rep, lam) * self.coset_reps[coset_index]

    @property
    def dimension(self) -> int:
        return self.rep.n

    @property
    def nilpotency_class(self) -> int:
        return nilpotency_class(self.lattice.law.algebra)


def holonomy_group(g: ACGroup) -> HolonomyGroup:
    """Closure of the coset-rep differentials under multiplication."""
    closure = _close_differentials([c.differential for c in g.coset_reps])
    identity = QMatrix.identity(g.rep.n)
    ordered = [identity] + [m for m in closure if m != identity]
    return HolonomyGroup(ordered)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    coset_index: int | None = None
    lattice_coords: tuple[Fraction, ...] | None = None

    def __bool__(self) -> bool:
        return self.member


def membership(g: ACGroup, e: AffineElement | QMatrix) -> MembershipResult:
    """Decompose e as (lattice element) * (coset representative); the verdict
    carries the coset index and the integral Mal'cev coordinates."""
    if isinstance(e, QMatrix):
        e = AffineElement.from_embedded(g.rep, e)
    for j, c in enumerate(g.coset_reps):
        if c.differential == e.differential:
            lam = e * c.inverse()
            try:
                coords = coordinates_from_matrix(g.lattice.law, lam.translation)
            except NotInGroupError:
                return MembershipResult(False)
            if coords.is_integral():
                return MembershipResult(True, j, coords.coords)
            return MembershipResult(False)
    return MembershipResult(False)


def torsion_test(g: ACGroup, e: AffineElement) -> int | None:
    """Exact order of e in the group: m when e**m is the identity for m the
    order of e's holonomy image, otherwise None for infinite order."""
    found = membership(g, e)
    if not found:
        raise NotInGroupError("element does not belong to the group")
    idx = g.holonomy.index_of(e.differential)
    m = g.holonomy.element_order(idx)
    if (e**m).is_identity():
        return m
    return None


@dataclass(frozen=True)
class TorsionWitness:
    coords: tuple[Fraction, ...]
    coset_index: int
    order: int


def torsion_witness_search(g: ACGroup, bound: int) -> TorsionWitness | None:
    """Search lattice coordinates in [-bound, bound]^k against every
    non-identity coset for a finite-order element; first witness in
    lexicographic order, or None up to the bound.

    The search runs entirely on embedded matrices: the embedding is injective,
    so e**m = 1 exactly when the embedded image's m-th power is the identity.
    """
    if bound < 0:
        raise CatalogError("bound must be non-negative")
    k = g.lattice.law.rank
    identity = QMatrix.identity(g.rep.n + 1)
    orders = [
        g.holonomy.element_order(g.holonomy.index_of(c.differential)) for c in g.coset_reps
    ]
    values = list(range(-bound, bound + 1))
    gen_powers: list[dict[int, QMatrix]] = []
    for gen in g._lattice_gens:
        base = gen.embedded
        base_inv = (gen.inverse()).embedded
        table = {0: identity}
        for v in range(1, bound + 1):
            table[v] = table[v - 1] * base
            table[-v] = table[-(v - 1)] * base_inv
        gen_powers.append(table)
    coset_embedded = [c.embedded for c in g.coset_reps]

    def search(level: int, acc: QMatrix, prefix: tuple[int, ...]) -> TorsionWitness | None:
        if level == k:
            for j in range(1, len(g.coset_reps)):
                e = acc * coset_embedded[j]
                if e ** orders[j] == identity:
                    return TorsionWitness(tuple(Fraction(c) for c in prefix), j, orders[j])
            return None
        for v in values:
            found = search(level + 1, acc * gen_powers[level][v], prefix + (v,))
            if found is not None:
                return found
        return None

    return search(0, identity, ())


def induces_self_map(g: ACGroup, affine_map: AffineElement) -> bool:
    """True iff conjugation by the map sends every generator back into the group."""
    if det(affine_map.differential) == 0:
        raise InvalidMapError("self-map differential must be invertible")
    inv = affine_map.inverse()
    return all(membership(g, affine_map * gen * inv) for gen in g.generators())


def self_map_conjugates(g: ACGroup, affine_map: AffineElement) -> list[tuple[str, MembershipResult]]:
    """Per-generator decomposition of the conjugates, for reports."""
    if det(affine_map.differential) == 0:
        raise InvalidMapError("self-map differential must be invertible")
    inv = affine_map.inverse()
    labels = [f"lattice_{i}" for i in range(g.lattice.law.rank)] + [
        f"coset_{j}" for j in range(1, len(g.coset_reps))
    ]
    return [
        (label, membership(g, affine_map * gen * inv))
        for label, gen in zip(labels, g.generators())
    ]


def two_sided_self_map(g: ACGroup, affine_map: AffineElement) -> bool:
    """Conjugation equality (map) Gamma (map)^-1 = Gamma, tested through
    membership of generator conjugates under the map and its inverse."""
    if det(affine_map.differential) == 0:
        return False
    return induces_self_map(g, affine_map) and induces_self_map(g, affine_map.inverse())


def verify_semiconjugacy(
    g1: ACGroup,
    g2: ACGroup,
    theta: Sequence[AffineElement],
    affine_map: AffineElement,
) -> bool:
    """Exact check of theta(gamma) * map = map * gamma on every generator of
    g1, where theta is given by its images of the generators (members of g2)."""
    gens = g1.generators()
    if len(theta) != len(gens):
        raise DimensionError("need one image per generator")
    if g1.rep.n != g2.rep.n:
        raise DimensionError("groups live in representations of different dimension")
    for image in theta:
        if not membership(g2, image):
            raise NotAHomomorphismError("a generator image lies outside the target group")
    return all(
        image.embedded * affine_map.embedded == affine_map.embedded * gen.embedded
        for gen, image in zip(gens, theta)
    )


# ---------------------------------------------------------------------------
# catalog
# ---------------------------------------------------------------------------


def _heisenberg_phi_star(rep: AffineRep, lattice: Lattice) -> QMatrix:
    """Differential of the order-3 automorphism a -> bc, b -> (ab)^-1, c -> c."""
    law = lattice.law
    a, b, c = law.basis
    images = [
        law.matrix_of(LatticeElement.of(0, 1, 1)),  # bc
        law.matrix_of(LatticeElement.of(-1, -1, 0)),  # a^-1 b^-1
        c,
    ]
    return differential_from_generator_images([a, b, c], images, rep.space)


def _torus(n: int) -> ACGroup:
    lat = builtin_lattice("free_abelian", n)
    rep_dim = n
    identity = (UniMatrix.identity(lat.law.ambient_dim), QMatrix.identity(rep_dim))
    return ACGroup(lat, [identity], f"torus({n})")


def _z2_extension(n: int) -> ACGroup:
    lat = builtin_lattice("free_abelian", n)
    identity = (UniMatrix.identity(lat.law.ambient_dim), QMatrix.identity(n))
    minus = (UniMatrix.identity(lat.law.ambient_dim), QMatrix.identity(n).scale(-1))
    return ACGroup(lat, [identity, minus], f"z2_extension({n})")


def _klein_bottle() -> ACGroup:
    lat = builtin_lattice("free_abelian", 2)
    identity = (UniMatrix.identity(3), QMatrix.identity(2))
    flip = QMatrix.from_rows([[-1, 0], [0, 1]])
    half_b = ((Fraction(0), Fraction(1, 2)), flip)
    return ACGroup(lat, [identity, half_b], "klein_bottle")


def _heis_semidirect() -> ACGroup:
    lat = builtin_lattice("heisenberg")
    rep = AffineRep(lat.law.algebra)
    phi = _heisenberg_phi_star(rep, lat)
    ident = UniMatrix.identity(3)
    cosets = [
        (ident, QMatrix.identity(3)),
        (ident, phi),
        (ident, phi * phi),
    ]
    return ACGroup(lat, cosets, "heis_semidirect")


def _heis_abb() -> ACGroup:
    lat = builtin_lattice("heisenberg")
    rep = AffineRep(lat.law.algebra)
    phi = _heisenberg_phi_star(rep, lat)
    c = lat.law.basis[2]
    c13 = rational_power(c, Fraction(1, 3))
    c23 = rational_power(c, Fraction(2, 3))
    cosets = [
        (UniMatrix.identity(3), QMatrix.identity(3)),
        (c13, phi),
        (c23, phi * phi),
    ]
    return ACGroup(lat, cosets, "heis_abb")


def _heis_lattice(n: int) -> ACGroup:
    lat = builtin_lattice("heisenberg_n", n)
    return ACGroup(lat, [(UniMatrix.identity(3), QMatrix.identity(3))], f"heis_lattice({n})")


CATALOG_NAMES = (
    "heis_abb",
    "heis_lattice(n)",
    "heis_semidirect",
    "klein_bottle",
    "torus(n)",
    "z2_extension(n)",
)

_PARAM_RE = re.compile(r"([a-z0-9_]+)\((\d+)\)\Z")


def catalog_group(name: str) -> ACGroup:
    """Construct a built-in group: torus(n), z2_extension(n), klein_bottle,
    heis_semidirect, heis_abb, heis_lattice(n)."""
    if name == "klein_bottle":
        return _klein_bottle()
    if name == "heis_semidirect":
        return _heis_semidirect()
    if name == "heis_abb":
        return _heis_abb()
    m = _PARAM_RE.match(name)
    if m:
        family, param = m.group(1), int(m.group(2))
        if family == "torus":
            return _torus(param)
        if family == "z2_extension":
            return _z2_extension(param)
        if family == "heis_lattice":
            return _heis_lattice(param)
    raise CatalogError(f"unknown catalog group {name!r}")


# ---------------------------------------------------------------------------
# catalog file format
# ---------------------------------------------------------------------------


def group_to_dict(g: ACGroup) -> dict:
    law = g.lattice.law
    return {
        "name": g.name,
        "dimension": g.dimension,
        "nilpotency_class": g.nilpotency_class,
        "lattice": {
            "rank": law.rank,
            "ambient_dim": law.ambient_dim,
            "basis": [matrix_to_lists(b.body) for b in law.basis],
        },
        "adapted_basis": [matrix_to_lists(b.body) for b in g.rep.adapted],
        "cosets": [
            {
                "translation": vector_to_list(c.translation_coords),
                "differential": matrix_to_lists(c.differential),
            }
            for c in g.coset_reps
        ],
    }


def serialize_group(g: ACGroup) -> bytes:
    return canonical_json_bytes(group_to_dict(g))


def canonical_json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2) + "\n").encode("utf-8")


def group_from_dict(data: dict) -> ACGroup:
    try:
        name = data["name"]
        dimension = data["dimension"]
        nclass = data["nilpotency_class"]
        lat_data = data["lattice"]
        rank = lat_data["rank"]
        ambient = lat_data["ambient_dim"]
        basis_data = lat_data["basis"]
        adapted_data = data["adapted_basis"]
        cosets_data = data["cosets"]
    except (KeyError, TypeError) as exc:
        raise ParseError(f"catalog file is missing field {exc}") from exc
    basis = [UniMatrix(matrix_from_lists(m)) for m in basis_data]
    if len(basis) != rank:
        raise CatalogError("lattice basis length does not match the declared rank")
    for b in basis:
        if b.dim != ambient:
            raise CatalogError("lattice basis matrix has the wrong ambient dimension")
    from .malcev import MalcevLaw

    law = MalcevLaw(rank, basis)
    lattice = Lattice(law, name)
    adapted = tuple(NilMatrix(matrix_from_lists(m)) for m in adapted_data)
    rep = AffineRep(law.algebra, adapted)
    cosets = []
    for c in cosets_data:
        coords = vector_from_list(c["translation"])
        differential = matrix_from_lists(c["differential"])
        cosets.append((rep.group_element(coords), differential))
    group = ACGroup(lattice, cosets, name, rep=rep)
    if group.dimension != dimension:
        raise CatalogError(f"declared dimension {dimension} but computed {group.dimension}")
    if group.nilpotency_class != nclass:
        raise CatalogError(f"declared class {nclass} but computed {group.nilpotency_class}")
    return group


def parse_group_bytes(raw: bytes) -> ACGroup:
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ParseError(f"invalid catalog JSON: {exc}") from exc
    return group_from_dict(data)
