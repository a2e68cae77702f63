import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from novbar.barcode import (
    Bar,
    Barcode,
    barcodes,
    classical_oracle,
    dualize_barcode,
    project_barcode,
    spectral_invariant,
)
from novbar.complex import FloerComplex, direct_sum, elementary
from novbar.exactnum import INF, NEG_INF, QQ, QuadReal, ValueGroup
from novbar.generators import FIELD_CONFIGS, make_field, random_complex, random_isomorphism
from novbar.ingest import rips_complex

q = QuadReal


def summary(B):
    # bars come sorted by degree, coset, then finite before infinite
    return [(b.degree, b.a, b.L if b.L is not INF else "inf") for b in B.bars]


def test_normal_form_example(QT):
    S = direct_sum([elementary(QT, "0", "1", 0), elementary(QT, "2", "inf", 0)])
    verbose, concise = barcodes(S)
    assert summary(concise) == [(0, q(0), q(1)), (0, q(2), "inf")]
    assert verbose == concise.concise() == concise


def test_zero_length_bars_are_verbose_only(QH):
    verbose, concise = barcodes(elementary(QH, "1/4", "0", 2))
    assert summary(verbose) == [(2, q(Fr(1, 4)), q(0))]
    assert len(concise) == 0


def test_two_point_rips():
    C = rips_complex([[0, 0], [3, 1]], max_dim=2, metric="Linf")
    verbose, concise = barcodes(C)
    assert summary(concise) == [(0, q(0), q(3)), (0, q(0), "inf")]
    assert concise.in_degree(1) == []
    assert classical_oracle(C) == verbose


def test_one_pivot_over_z(QZ):
    T = QZ.T(1)
    C = FloerComplex.from_levels(QZ, {0: [q(0)], 1: [q(Fr(1, 2))]}, {1: [[QZ.one - T]]})
    _, concise = barcodes(C)
    assert summary(concise) == [(0, q(0), q(Fr(1, 2)))]


def test_classical_oracle_examples(QT):
    assert summary(classical_oracle(elementary(QT, "1", "2", 3))) == [(3, q(1), q(2))]
    assert len(classical_oracle(FloerComplex(QT, {}))) == 0
    assert len(barcodes(FloerComplex(QT, {}))[0]) == 0
    with pytest.raises(ValueError):
        classical_oracle(elementary(make_field("Q", "discrete:1"), "0", "1", 0))


def test_dualize_and_project():
    Z = ValueGroup.parse("discrete:1")
    T0 = ValueGroup.trivial()
    B = Barcode([Bar.make(0, q(1), q(2), T0), Bar.make(1, q(5), INF, T0)], T0)
    assert summary(dualize_barcode(B)) == [(-1, q(-5), "inf"), (-1, q(-3), q(2))]
    assert summary(dualize_barcode(dualize_barcode(B))) == summary(B)
    proj = project_barcode(Barcode([Bar.make(0, q(Fr(5, 2)), q(1), T0)], T0), Z)
    assert summary(proj) == [(0, q(Fr(1, 2)), q(1))]


def test_bars_compare_by_coset():
    Z = ValueGroup.parse("discrete:1")
    assert Bar.make(0, q(Fr(5, 2)), q(1), Z) == Bar.make(0, q(Fr(-1, 2)), q(1), Z)
    D = ValueGroup.parse("quad:2:1,sqrt(2)")
    assert Bar.make(0, q(0, 1, 2), INF, D) == Bar.make(0, q(3), INF, D)


def test_spectral_invariants(QZ):
    T = QZ.T(1)
    E = direct_sum([elementary(QZ, "0", "1", 0), elementary(QZ, "1/2", "inf", 0)])
    # the boundary class is zero
    assert spectral_invariant(E, 0, (QZ.one, QZ.zero)) is NEG_INF
    assert spectral_invariant(E, 0, (QZ.zero, QZ.one)) == q(Fr(1, 2))
    # T^g scales rho by -g, and adding a boundary changes nothing
    assert spectral_invariant(E, 0, (QZ.one, T * T)) == q(Fr(-3, 2))
    with pytest.raises(ValueError):
        spectral_invariant(E, 1, (QZ.one,))


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=lambda c: f"{c[0]}-{c[1]}")
@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_barcode_of_sum_is_union(config, seed):
    F = make_field(*config)
    rng = random.Random(seed)
    A, _ = random_complex(rng, F, max_dim=3)
    B, _ = random_complex(rng, F, max_dim=3)
    both = barcodes(direct_sum([A, B]))[0]
    assert both.multiset() == barcodes(A)[0].multiset() + barcodes(B)[0].multiset()


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=lambda c: f"{c[0]}-{c[1]}")
@settings(max_examples=10, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_barcode_survives_isomorphism(config, seed):
    F = make_field(*config)
    rng = random.Random(seed)
    C, summands = random_complex(rng, F, max_dim=4)
    expected = Barcode([Bar.make(k, a, L, F.group) for a, L, k in summands], F.group, verbose=True)
    assert barcodes(C)[0] == expected
    assert barcodes(random_isomorphism(rng, C).target)[0] == expected
