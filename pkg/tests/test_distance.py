import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from novbar.barcode import Bar, Barcode
from novbar.distance import bar_distance, bottleneck_all, bottleneck_degree, matching_oracle, witness_problems
from novbar.exactnum import INF, QuadReal, ValueGroup
from novbar.generators import random_bars

T0 = ValueGroup.trivial()
Z = ValueGroup.parse("discrete:1")
D = ValueGroup.parse("quad:2:1,sqrt(2)")


def bar(G, a, L, k=0):
    return Bar.make(k, QuadReal(Fr(a)), INF if L == "inf" else QuadReal(Fr(L)), G)


@pytest.mark.parametrize(
    "G, s, t, want",
    [
        (T0, ("0", "1"), ("1/2", "1"), QuadReal(Fr(1, 2))),
        (Z, ("2/5", "1"), ("0", "1"), QuadReal(Fr(2, 5))),
        (Z, ("9/10", "1"), ("0", "1"), QuadReal(Fr(1, 10))),
        (Z, ("1/2", "1"), ("0", "2"), QuadReal(Fr(1, 2))),
        (D, ("1/3", "1"), ("0", "3"), QuadReal(1)),
        (T0, ("0", "inf"), ("1", "inf"), QuadReal(1)),
        (Z, ("0", "inf"), ("5/2", "inf"), QuadReal(Fr(1, 2))),
        (D, ("0", "inf"), ("1/3", "inf"), QuadReal(0)),
        (T0, ("0", "inf"), ("0", "1"), INF),
    ],
)
def test_bar_distance(G, s, t, want):
    assert bar_distance(G, bar(G, *s), bar(G, *t)) == want


def test_bottleneck_examples():
    S = [bar(T0, 0, 3), bar(T0, 1, 1)]
    T = [bar(T0, "1/2", 3)]
    d, res = bottleneck_degree(T0, S, T)
    assert d == QuadReal(Fr(1, 2)) == matching_oracle(T0, S, T)
    assert res.pairs == [(S[0], T[0])] and res.unmatched_S == [S[1]]
    assert witness_problems(T0, S, T, res) == []
    assert bottleneck_degree(T0, S, S)[0] == QuadReal(0)
    assert bottleneck_degree(T0, [bar(T0, 0, "inf")], [bar(T0, 0, 1)])[0] is INF
    assert bottleneck_degree(T0, [], [])[0] == QuadReal(0)


def test_bottleneck_all_takes_the_supremum():
    A = Barcode([bar(T0, 0, 1), bar(T0, 0, 4, k=1)], T0)
    B = Barcode([bar(T0, "1/2", 1)], T0)
    per = {}
    assert bottleneck_all(T0, A, B, per) == QuadReal(2)
    assert {k: v[0] for k, v in per.items()} == {0: QuadReal(Fr(1, 2)), 1: QuadReal(2)}
    assert bottleneck_all(T0, Barcode([], T0), Barcode([bar(T0, 0, 4)], T0)) == QuadReal(2)
    assert bottleneck_all(T0, A, A) == QuadReal(0)


def test_witness_checker_rejects_bad_matchings():
    S, T = [bar(T0, 0, 3)], [bar(T0, 2, 3)]
    d, res = bottleneck_degree(T0, S, T)
    res.delta = QuadReal(Fr(1, 2))
    assert witness_problems(T0, S, T, res)


def test_oracle_size_guard():
    with pytest.raises(ValueError):
        matching_oracle(T0, [bar(T0, 0, 1)] * 5, [bar(T0, 0, 1)] * 5)


@pytest.mark.parametrize("G", [T0, Z, D], ids=["trivial", "Z", "dense"])
@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6), ns=st.integers(0, 3), nt=st.integers(0, 3))
def test_bottleneck_matches_oracle(G, seed, ns, nt):
    rng = random.Random(seed)
    S, T = random_bars(rng, G, ns), random_bars(rng, G, nt)
    d, res = bottleneck_degree(G, S, T)
    assert d == matching_oracle(G, S, T)
    assert witness_problems(G, S, T, res) == []
    # symmetric, and zero against itself
    assert bottleneck_degree(G, T, S)[0] == d
    assert bottleneck_degree(G, S, S)[0] == QuadReal(0)
