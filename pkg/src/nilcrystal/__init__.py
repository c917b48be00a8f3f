"""Exact-arithmetic toolkit for almost-crystallographic groups, their affine
self-maps, and Lefschetz/Nielsen/dynamics invariants of infra-nilmanifolds."""

from .exactmath import (
    QMatrix,
    QPoly,
    SpectralCertificate,
    all_roots_outside_unit_disk,
    char_poly,
    det,
    format_rational,
    parse_rational,
    real_root_count_in_interval,
    spectral_certificate,
    unit_circle_roots_exist,
)
from .unipotent import (
    LieSubspace,
    NilMatrix,
    UniMatrix,
    ad_matrix,
    adapted_basis_2step,
    bch_truncated,
    differential_from_generator_images,
    exp_unipotent,
    log_unipotent,
    lower_central_series,
    nilpotency_class,
    rational_power,
)
from .malcev import (
    Lattice,
    LatticeElement,
    MalcevLaw,
    builtin_lattice,
    coordinates_from_matrix,
    direct_product,
    isolator_contains,
    lattice_contains,
    matrix_from_coordinates,
    mc_inverse,
    mc_multiply,
    mc_power,
    verify_law_axioms_sampled,
)
from .affinerep import (
    AffineElement,
    AffineRep,
    act_on_point,
    embed_affine,
    embed_automorphism,
    embed_translation,
    verify_equivariance,
)
from .acg import (
    ACGroup,
    HolonomyGroup,
    MembershipResult,
    catalog_group,
    holonomy_group,
    induces_self_map,
    membership,
    parse_group_bytes,
    serialize_group,
    torsion_test,
    torsion_witness_search,
    two_sided_self_map,
    verify_semiconjugacy,
)
from .invariants import (
    Grading,
    InvariantReport,
    MapClassification,
    anosov_relation_check,
    averaging_invariants,
    classify_dynamics,
    is_orientable,
    verify_grading,
)

__all__ = [name for name in dir() if not name.startswith("_")]
