"""Topological invariants of affine self-maps: Lefschetz and Nielsen numbers
through the holonomy-averaged determinant formula, the Anosov-relation and
orientability checks, expanding/hyperbolic spectral classification, and
verification of Lie algebra gradings."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .acg import ACGroup, induces_self_map, two_sided_self_map
from .affinerep import AffineElement
from .errors import InvalidMapError, MalformedGradingError
from .exactmath import (
    QMatrix,
    SpectralCertificate,
    char_poly,
    det,
    spectral_certificate,
)
from .unipotent import LieSubspace


@dataclass(frozen=True)
class InvariantReport:
    """Lefschetz/Nielsen data of one affine self-map; the terms are
    det(1 - alpha* delta*), one per holonomy element in coset order."""

    lefschetz: Fraction
    nielsen: Fraction
    per_holonomy_terms: tuple[tuple[str, Fraction], ...]
    anosov_relation: bool
    orientable: bool


def _holonomy_terms(g: ACGroup, affine_map: AffineElement) -> list[tuple[str, Fraction]]:
    n = g.rep.n
    eye = QMatrix.identity(n)
    delta = affine_map.differential
    return [
        (f"alpha_{j}", det(eye - c.differential * delta))
        for j, c in enumerate(g.coset_reps)
    ]


def _signs_uniform(values: list[Fraction]) -> bool:
    nonzero = [v for v in values if v != 0]
    return all(v > 0 for v in nonzero) or all(v < 0 for v in nonzero)


def averaging_invariants(g: ACGroup, affine_map: AffineElement) -> InvariantReport:
    """L(f) and N(f) as holonomy averages of det(1 - alpha* delta*); with
    trivial holonomy this is det(1 - delta*) and its absolute value."""
    if not induces_self_map(g, affine_map):
        raise InvalidMapError("the affine map does not induce a self-map of the group")
    terms = _holonomy_terms(g, affine_map)
    order = len(terms)
    total = sum((t for _, t in terms), Fraction(0))
    total_abs = sum((abs(t) for _, t in terms), Fraction(0))
    return InvariantReport(
        lefschetz=total / order,
        nielsen=total_abs / order,
        per_holonomy_terms=tuple(terms),
        anosov_relation=_signs_uniform([t for _, t in terms]),
        orientable=is_orientable(g),
    )


def is_orientable(g: ACGroup) -> bool:
    """True iff every holonomy differential has determinant one."""
    return all(det(c.differential) == 1 for c in g.coset_reps)


def anosov_relation_check(g: ACGroup, affine_map: AffineElement) -> bool:
    """N(f) = |L(f)|, equivalently sign-uniformity of the holonomy terms."""
    if not induces_self_map(g, affine_map):
        raise InvalidMapError("the affine map does not induce a self-map of the group")
    return _signs_uniform([t for _, t in _holonomy_terms(g, affine_map)])


@dataclass(frozen=True)
class MapClassification:
    """Spectral verdicts on the differential: expanding means every eigenvalue
    modulus > 1; hyperbolic means no eigenvalue modulus equals 1 and the
    differential is invertible.  Expanding therefore implies hyperbolic."""

    expanding: bool
    hyperbolic: bool
    self_map_valid: bool
    certificate: SpectralCertificate


def classify_dynamics(
    g: ACGroup, affine_map: AffineElement, as_diffeomorphism: bool = False
) -> MapClassification:
    """Classify the map's differential by exact root location of its
    characteristic polynomial; self-map validity is reported, not required.

    With as_diffeomorphism=True the hyperbolic verdict additionally demands
    the two-sided conjugation equality (map) Gamma (map)^-1 = Gamma.
    """
    delta = affine_map.differential
    cert = spectral_certificate(char_poly(delta))
    invertible = det(delta) != 0
    try:
        valid = induces_self_map(g, affine_map)
    except InvalidMapError:
        valid = False
    hyperbolic = (not cert.has_unit_circle_root) and invertible
    if as_diffeomorphism:
        hyperbolic = hyperbolic and two_sided_self_map(g, affine_map)
    return MapClassification(
        expanding=cert.all_outside_unit_disk,
        hyperbolic=hyperbolic,
        self_map_valid=valid,
        certificate=cert,
    )


@dataclass(frozen=True)
class Grading:
    """Candidate decomposition of an algebra into graded components."""

    components: tuple[tuple[int, LieSubspace], ...]


def verify_grading(
    algebra: LieSubspace, grading: Grading, require_positive: bool = False
) -> tuple[bool, dict | None]:
    """Direct-sum check plus bracket containment [g_i, g_j] in g_{i+j} on all
    basis pairs; with require_positive, all nonzero degrees must be >= 1.

    Structural defects (overlapping components, components escaping the
    algebra, not spanning) raise MalformedGradingError; bracket or positivity
    violations return False with a witness.
    """
    degrees = [d for d, _ in grading.components]
    if len(set(degrees)) != len(degrees):
        raise MalformedGradingError("duplicate degree in grading")
    by_degree = dict(grading.components)
    total = 0
    all_vectors = []
    for d, comp in grading.components:
        if comp.ambient_dim != algebra.ambient_dim:
            raise MalformedGradingError("component has the wrong ambient dimension")
        for b in comp.basis:
            if not algebra.contains(b):
                raise MalformedGradingError(f"component of degree {d} escapes the algebra")
            all_vectors.append(b)
        total += comp.dim
    if total != algebra.dim:
        raise MalformedGradingError("component dimensions do not sum to the algebra dimension")
    joint = LieSubspace.span(algebra.ambient_dim, all_vectors)
    if joint.dim != total:
        raise MalformedGradingError("components are not independent")
    for i, comp_i in grading.components:
        for j, comp_j in grading.components:
            target = by_degree.get(i + j)
            for a in comp_i.basis:
                for b in comp_j.basis:
                    val = a.bracket(b)
                    if val.is_zero():
                        continue
                    if target is None or not target.contains(val):
                        return False, {
                            "kind": "bracket",
                            "degrees": (i, j),
                            "bracket_of": (a, b),
                            "value": val,
                        }
    if require_positive:
        for d, comp in grading.components:
            if d <= 0 and comp.dim > 0:
                return False, {"kind": "positivity", "degree": d}
    return True, None
