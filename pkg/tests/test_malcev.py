import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nilcrystal.errors import CatalogError, DomainError, NotInGroupError
from nilcrystal.exactmath import QMatrix
from nilcrystal.malcev import (
    LatticeElement,
    MalcevLaw,
    MPoly,
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
from nilcrystal.unipotent import UniMatrix, rational_power


HEIS = builtin_lattice("heisenberg")


def el(*coords):
    return LatticeElement.of(*coords)


def random_elements(rng, law, count, lo=-5, hi=5):
    return [
        LatticeElement.of(*(rng.randint(lo, hi) for _ in range(law.rank))) for _ in range(count)
    ]


# ---------------------------------------------------------------------------
# builtin laws
# ---------------------------------------------------------------------------


def test_builtin_examples():
    law = HEIS.law
    assert mc_multiply(law, el(0, 1, 0), el(1, 0, 0)) == el(1, 1, 1)  # b * a = a b c
    fa = builtin_lattice("free_abelian", 2).law
    assert mc_multiply(fa, el(1, 2), el(3, 4)) == el(4, 6)
    assert mc_power(law, el(1, 1, 0), 2) == el(2, 2, 1)


def test_builtin_unknown_name():
    with pytest.raises(CatalogError):
        builtin_lattice("frobenius_group")


def test_heisenberg_n_model():
    h2 = builtin_lattice("heisenberg_n", 2)
    c2 = h2.law.basis[2]
    assert c2.body == QMatrix.from_rows([[1, 0, Fraction(1, 2)], [0, 1, 0], [0, 0, 1]])
    # center entry z/2: coordinates (x, y, z) = (0, 0, 2) is the full-entry element
    g = matrix_from_coordinates(h2.law, el(0, 0, 2))
    assert g.body[0, 2] == 1
    # closed-form laws: z-coordinate picks up n * x2 * y1
    assert mc_multiply(h2.law, el(0, 1, 0), el(1, 0, 0)) == el(1, 1, 2)


def test_mc_operation_examples():
    law = HEIS.law
    assert mc_multiply(law, el(1, 0, 0), el(0, 1, 0)) == el(1, 1, 0)  # a * b
    assert mc_multiply(law, el(0, 0, 0), el(4, -2, 7)) == el(4, -2, 7)
    assert mc_inverse(law, el(1, 1, 0)) == el(-1, -1, 1)
    assert mc_power(law, el(1, 1, 0), 0) == el(0, 0, 0)
    assert mc_power(law, el(1, 1, 0), 3) == el(3, 3, 3)


def test_dimension_mismatch():
    with pytest.raises(Exception):
        mc_multiply(HEIS.law, el(1, 0), el(0, 0, 0))


# ---------------------------------------------------------------------------
# matrix-model oracle equivalence
# ---------------------------------------------------------------------------


def test_oracle_equivalence_bulk():
    rng = random.Random(41)
    for lattice in (HEIS, builtin_lattice("free_abelian", 3), builtin_lattice("heisenberg_n", 2)):
        law = lattice.law
        for _ in range(120):
            u, v = random_elements(rng, law, 2)
            mu, mv = law.matrix_of(u), law.matrix_of(v)
            assert law.matrix_of(mc_multiply(law, u, v)) == mu * mv
            m = rng.randint(-4, 4)
            assert law.matrix_of(mc_power(law, u, m)) == mu**m
            assert law.matrix_of(mc_inverse(law, u)) == mu.inverse()


def test_power_matches_repeated_multiplication():
    rng = random.Random(43)
    law = HEIS.law
    for _ in range(20):
        (u,) = random_elements(rng, law, 1)
        acc = law.identity()
        for m in range(1, 5):
            acc = mc_multiply(law, acc, u)
            assert mc_power(law, u, m) == acc


def test_coordinates_from_matrix_examples():
    law = HEIS.law
    g = UniMatrix(QMatrix.from_rows([[1, 3, 5], [0, 1, 2], [0, 0, 1]]))
    assert coordinates_from_matrix(law, g) == el(2, 3, 5)
    assert coordinates_from_matrix(law, UniMatrix.identity(3)) == el(0, 0, 0)
    c13 = UniMatrix(QMatrix.from_rows([[1, 0, Fraction(1, 3)], [0, 1, 0], [0, 0, 1]]))
    assert coordinates_from_matrix(law, c13) == el(0, 0, Fraction(1, 3))
    assert not lattice_contains(law, c13)


def test_round_trip_on_rational_tuples():
    rng = random.Random(47)
    law = HEIS.law
    for _ in range(50):
        u = LatticeElement.of(
            *(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(3))
        )
        assert coordinates_from_matrix(law, matrix_from_coordinates(law, u)) == u


def test_not_in_group_error():
    fa = builtin_lattice("free_abelian", 2).law  # model inside UT_3 but only 2 log directions
    outside = UniMatrix(QMatrix.from_rows([[1, 1, 0], [0, 1, 1], [0, 0, 1]]))
    with pytest.raises(NotInGroupError):
        coordinates_from_matrix(fa, outside)


@given(
    st.tuples(*(st.integers(-6, 6) for _ in range(3))),
    st.tuples(*(st.integers(-6, 6) for _ in range(3))),
    st.integers(-5, 5),
)
@settings(deadline=None, max_examples=60)
def test_integer_closure(ucoords, vcoords, m):
    law = HEIS.law
    u, v = LatticeElement.of(*ucoords), LatticeElement.of(*vcoords)
    assert mc_multiply(law, u, v).is_integral()
    assert mc_power(law, u, m).is_integral()
    assert mc_inverse(law, u).is_integral()


# ---------------------------------------------------------------------------
# lattice and isolator membership
# ---------------------------------------------------------------------------


def test_lattice_contains_examples():
    law = HEIS.law
    c = law.basis[2]
    c13 = rational_power(c, Fraction(1, 3))
    assert lattice_contains(law, c)
    assert not lattice_contains(law, c13)
    assert lattice_contains(law, c13**3)


def test_isolator_examples():
    law = HEIS.law
    a, b, c = law.basis
    assert isolator_contains(law, 2, c)
    assert not isolator_contains(law, 2, a)
    assert isolator_contains(law, 1, a)
    assert isolator_contains(law, 1, b)
    with pytest.raises(DomainError):
        isolator_contains(law, 0, c)


def test_isolator_powers_spot_check():
    law = HEIS.law
    c = law.basis[2]
    for k in (1, 2, 5):
        assert isolator_contains(law, 2, c**k)
    h2 = builtin_lattice("heisenberg_n", 2).law
    c2 = h2.basis[2]
    # c2 squares into the commutator subgroup, so it lies in the isolator
    assert isolator_contains(h2, 2, c2)
    assert isolator_contains(h2, 2, c2**2)
    assert not isolator_contains(h2, 2, h2.basis[0])


def test_isolator_beyond_class_is_trivial():
    law = HEIS.law
    assert not isolator_contains(law, 3, law.basis[2])
    assert isolator_contains(law, 3, matrix_from_coordinates(law, el(0, 0, 0)))


# ---------------------------------------------------------------------------
# law verification
# ---------------------------------------------------------------------------


def test_verify_law_axioms_passes_builtin():
    rng = random.Random(53)
    report = verify_law_axioms_sampled(HEIS.law, random_elements(rng, HEIS.law, 100))
    assert report.passed and report.failure is None
    fa1 = builtin_lattice("free_abelian", 1)
    assert verify_law_axioms_sampled(fa1.law, random_elements(rng, fa1.law, 10)).passed


def test_verify_law_axioms_catches_corrupted_sign():
    law = HEIS.law
    bad_p3 = MPoly.from_terms(4, [((0, 1, 1, 0), -1)])  # negated x2*y1 term
    corrupted = MalcevLaw(
        3, law.basis, (MPoly.zero(0), MPoly.zero(2), bad_p3), law.power_polys
    )
    rng = random.Random(59)
    report = verify_law_axioms_sampled(corrupted, random_elements(rng, law, 30))
    assert not report.passed
    assert report.failure is not None and "check" in report.failure


# ---------------------------------------------------------------------------
# direct products
# ---------------------------------------------------------------------------


def test_direct_product_heisenberg_z():
    prod = direct_product(HEIS, builtin_lattice("free_abelian", 1))
    law = prod.law
    assert law.rank == 4 and law.ambient_dim == 5
    rng = random.Random(61)
    for _ in range(40):
        u, v = random_elements(rng, law, 2, -3, 3)
        w = mc_multiply(law, u, v)
        assert law.matrix_of(w) == law.matrix_of(u) * law.matrix_of(v)
        # componentwise agreement with the factors
        hu, hv = LatticeElement(u.coords[:3]), LatticeElement(v.coords[:3])
        assert w.coords[:3] == mc_multiply(HEIS.law, hu, hv).coords
        assert w.coords[3] == u.coords[3] + v.coords[3]
