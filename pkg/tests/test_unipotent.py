import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nilcrystal.errors import (
    ClassBoundError,
    ClassError,
    DomainError,
    NotAHomomorphismError,
    NotClosedError,
    SpanError,
)
from nilcrystal.exactmath import QMatrix, matrix_to_lists
from nilcrystal.unipotent import (
    LieSubspace,
    NilMatrix,
    UniMatrix,
    ad_matrix,
    adapted_basis_2step,
    apply_linear_map,
    bch_truncated,
    differential_from_generator_images,
    exp_unipotent,
    log_unipotent,
    lower_central_series,
    nilpotency_class,
    nt_full,
    rational_power,
)
from nilcrystal.malcev import LatticeElement, builtin_lattice
from helpers import random_nil, random_uni


E = NilMatrix.elementary


def heis_generators():
    law = builtin_lattice("heisenberg").law
    return law.basis  # (a, b, c)


# ---------------------------------------------------------------------------
# exp / log
# ---------------------------------------------------------------------------


def test_exp_examples():
    e12 = E(3, 0, 1)
    assert exp_unipotent(e12).body == QMatrix.identity(3) + e12.body
    assert exp_unipotent(NilMatrix.zero(4)).is_identity()


def test_exp_of_log_display():
    # the log of a^x b^y c^z carries the (1,3) entry z - xy/2; exp inverts it
    x, y, z = 2, 3, 5
    lg = NilMatrix(QMatrix.from_rows([[0, y, z - Fraction(x * y, 2)], [0, 0, x], [0, 0, 0]]))
    assert exp_unipotent(lg).body == QMatrix.from_rows([[1, y, z], [0, 1, x], [0, 0, 1]])


def test_log_examples():
    g = UniMatrix(QMatrix.from_rows([[1, 3, 5], [0, 1, 2], [0, 0, 1]]))
    assert log_unipotent(g).body == QMatrix.from_rows([[0, 3, 2], [0, 0, 2], [0, 0, 0]])
    assert log_unipotent(UniMatrix.identity(3)).is_zero()
    e12 = E(3, 0, 1)
    assert log_unipotent(UniMatrix(QMatrix.identity(3) + e12.body)) == e12


def test_exp_log_round_trip_bulk():
    rng = random.Random(101)
    for _ in range(500):
        dim = rng.randint(3, 5)
        g = random_uni(rng, dim)
        assert exp_unipotent(log_unipotent(g)) == g
        x = random_nil(rng, dim)
        assert log_unipotent(exp_unipotent(x)) == x


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5))
@settings(deadline=None, max_examples=50)
def test_exp_log_round_trip_heisenberg(x, y, z):
    g = UniMatrix(QMatrix.from_rows([[1, y, z], [0, 1, x], [0, 0, 1]]))
    assert exp_unipotent(log_unipotent(g)) == g


# ---------------------------------------------------------------------------
# rational powers
# ---------------------------------------------------------------------------


def test_rational_power_examples():
    _, _, c = heis_generators()
    c13 = rational_power(c, Fraction(1, 3))
    assert c13.body == QMatrix.from_rows([[1, 0, Fraction(1, 3)], [0, 1, 0], [0, 0, 1]])
    assert c13**3 == c
    rng = random.Random(3)
    g = random_uni(rng, 4)
    assert rational_power(g, 0).is_identity()
    assert rational_power(g, 1) == g


def test_rational_power_one_parameter_law():
    rng = random.Random(17)
    for _ in range(30):
        g = random_uni(rng, rng.randint(3, 4))
        s = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        t = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
        assert rational_power(g, s + t) == rational_power(g, s) * rational_power(g, t)


def test_integer_power_matches_repeated_multiplication():
    rng = random.Random(19)
    g = random_uni(rng, 4)
    assert rational_power(g, 3) == g * g * g
    assert rational_power(g, -2) == (g.inverse()) * (g.inverse())


# ---------------------------------------------------------------------------
# truncated BCH
# ---------------------------------------------------------------------------


def test_bch_heisenberg_example():
    x, y = E(3, 0, 1), E(3, 1, 2)  # log b, log a
    z = bch_truncated(x, y, 2)
    assert z == x + y + E(3, 0, 2, Fraction(1, 2))
    ba = QMatrix.from_rows([[1, 1, 1], [0, 1, 1], [0, 0, 1]])
    assert exp_unipotent(z).body == ba


def test_bch_trivial_cases():
    rng = random.Random(29)
    x = random_nil(rng, 4)
    assert bch_truncated(x, NilMatrix.zero(4)) == x
    assert bch_truncated(x, x) == x.scale(2)


def test_bch_random_class2_and_class3():
    rng = random.Random(31)
    for _ in range(40):
        x, y = random_nil(rng, 3), random_nil(rng, 3)
        z = bch_truncated(x, y, 2)
        assert exp_unipotent(z) == exp_unipotent(x) * exp_unipotent(y)
    for _ in range(40):
        x, y = random_nil(rng, 4), random_nil(rng, 4)
        z = bch_truncated(x, y, 3)
        assert exp_unipotent(z) == exp_unipotent(x) * exp_unipotent(y)


def test_bch_class_bound_violation():
    x = E(4, 0, 1) + E(4, 1, 2)
    y = E(4, 2, 3)
    with pytest.raises(ClassBoundError):
        bch_truncated(x, y, 2)
    z = bch_truncated(x, y, 3)
    assert exp_unipotent(z) == exp_unipotent(x) * exp_unipotent(y)
    with pytest.raises(DomainError):
        bch_truncated(x, y, 4)


# ---------------------------------------------------------------------------
# ad matrices
# ---------------------------------------------------------------------------


def heis_adapted_space():
    return LieSubspace(3, [E(3, 0, 2), E(3, 1, 2), E(3, 0, 1)])  # (X_c, X_a, X_b)


def test_ad_matrix_examples():
    basis = heis_adapted_space()
    ad_a = ad_matrix(E(3, 1, 2), basis)
    assert ad_a == QMatrix.from_rows([[0, 0, -1], [0, 0, 0], [0, 0, 0]])
    ad_c = ad_matrix(E(3, 0, 2), basis)
    assert ad_c.is_zero()
    ad_ab = ad_matrix(E(3, 1, 2) + E(3, 0, 1), basis)
    assert ad_ab == QMatrix.from_rows([[0, 1, -1], [0, 0, 0], [0, 0, 0]])


def test_ad_matrix_escape_errors():
    basis = LieSubspace(3, [E(3, 0, 1), E(3, 1, 2)])  # not bracket closed
    with pytest.raises(NotClosedError):
        ad_matrix(E(3, 0, 1), basis)
    with pytest.raises(NotClosedError):
        ad_matrix(E(3, 0, 2), basis)  # x outside the span


# ---------------------------------------------------------------------------
# lower central series / adapted bases
# ---------------------------------------------------------------------------


def test_lcs_nt3():
    series = lower_central_series(nt_full(3))
    assert len(series) == 2
    assert series[1] == LieSubspace(3, [E(3, 0, 2)])
    assert nilpotency_class(nt_full(4)) == 3
    abelian = LieSubspace(3, [E(3, 0, 2)])
    assert nilpotency_class(abelian) == 1


def test_lcs_nesting_and_bracket_containment():
    for g in (nt_full(3), nt_full(4)):
        series = lower_central_series(g)
        for i in range(len(series) - 1):
            gi, gnext = series[i], series[i + 1]
            assert all(gi.contains(b) for b in gnext.basis)
            for a in g.basis:
                for b in gi.basis:
                    assert gnext.contains(a.bracket(b))


def test_lcs_requires_closure():
    with pytest.raises(NotClosedError):
        lower_central_series(LieSubspace(3, [E(3, 0, 1), E(3, 1, 2)]))


def test_adapted_basis_heisenberg():
    g = LieSubspace(3, [E(3, 1, 2), E(3, 0, 1), E(3, 0, 2)])
    adapted = adapted_basis_2step(g)
    assert adapted == (E(3, 0, 2), E(3, 1, 2), E(3, 0, 1))


def test_adapted_basis_abelian_and_sum():
    ab = LieSubspace(4, [E(4, 0, 3), E(4, 1, 3)])
    assert adapted_basis_2step(ab) == (E(4, 0, 3), E(4, 1, 3))
    # heisenberg block plus one extra central generator
    g = LieSubspace(4, [E(4, 1, 2), E(4, 0, 1), E(4, 0, 2), E(4, 0, 3)])
    adapted = adapted_basis_2step(g)
    assert adapted[0] == E(4, 0, 2)
    assert len(adapted) == 4


def test_adapted_basis_rejects_class3():
    with pytest.raises(ClassError):
        adapted_basis_2step(nt_full(4))


# ---------------------------------------------------------------------------
# differentials from generator images
# ---------------------------------------------------------------------------


def test_differential_of_order_three_automorphism():
    a, b, c = heis_generators()
    law = builtin_lattice("heisenberg").law
    images = [
        law.matrix_of(LatticeElement.of(0, 1, 1)),  # bc
        law.matrix_of(LatticeElement.of(-1, -1, 0)),  # (ab)^-1
        c,
    ]
    basis = heis_adapted_space()
    phi = differential_from_generator_images([a, b, c], images, basis)
    expected = QMatrix.from_rows([[1, 1, Fraction(-1, 2)], [0, 0, -1], [0, 1, -1]])
    assert phi == expected
    assert phi**3 == QMatrix.identity(3)


def test_differential_identity_images():
    a, b, c = heis_generators()
    basis = heis_adapted_space()
    assert differential_from_generator_images([a, b, c], [a, b, c], basis) == QMatrix.identity(3)


def psi_image(x, y, z):
    return UniMatrix(
        QMatrix.from_rows(
            [
                [1, Fraction(y, 2), Fraction(-x, 2), z - Fraction(x * y, 2)],
                [0, 1, 0, x],
                [0, 0, 1, y],
                [0, 0, 0, 1],
            ]
        )
    )


def test_differential_psi_reproduces_display():
    a, b, c = heis_generators()
    dom = heis_adapted_space()
    images = [psi_image(1, 0, 0), psi_image(0, 1, 0), psi_image(0, 0, 1)]
    cod_vectors = [log_unipotent(h) for h in images]
    cod = LieSubspace(4, cod_vectors)
    psi_star = differential_from_generator_images([a, b, c], images, dom, codomain_basis=cod)
    rng = random.Random(37)
    for _ in range(20):
        x, y, z = (rng.randint(-5, 5) for _ in range(3))
        lg = NilMatrix(QMatrix.from_rows([[0, y, z], [0, 0, x], [0, 0, 0]]))
        image = apply_linear_map(psi_star, dom, cod, lg)
        expected = NilMatrix(
            QMatrix.from_rows(
                [
                    [0, Fraction(y, 2), Fraction(-x, 2), z],
                    [0, 0, 0, x],
                    [0, 0, 0, y],
                    [0, 0, 0, 0],
                ]
            )
        )
        assert image == expected


def test_differential_rejects_non_homomorphism():
    a, b, c = heis_generators()
    basis = heis_adapted_space()
    with pytest.raises(NotAHomomorphismError):
        differential_from_generator_images([a, b, c], [b, a, c], basis)


def test_differential_rejects_non_spanning():
    a, _, c = heis_generators()
    basis = heis_adapted_space()
    with pytest.raises(SpanError):
        differential_from_generator_images([a, c], [a, c], basis)
