import importlib
import random

import pytest
from hypothesis import given, settings, strategies as st

from novbar.complex import elementary
from novbar.exactnum import GF, QQ, QuadReal, ValueGroup
from novbar.filtered import FilteredSpace, level
from novbar.generators import FIELD_CONFIGS, make_field, random_complex, random_level, random_vector
from novbar.novikov import NovikovField
from novbar.svd import (
    LinearMap,
    SvdCheckError,
    SvdResult,
    boundary_depths,
    check_svd,
    dual_svd,
    extend_svd,
    robustness_oracle,
    svd,
    torsion_exponents,
)

q = QuadReal


def two_by_two(field):
    """Domain levels (1, 0), codomain levels (0, 0), columns e1 and e1 + e2."""
    return LinearMap(FilteredSpace([q(1), q(0)], field), FilteredSpace([q(0), q(0)], field),
                     [(1, 0), (1, 1)])


def test_two_by_two_frozen(QT):
    A = two_by_two(QT)
    r = svd(A, debug=True)
    assert r.rank == 2 and r.diffs == [q(1), q(0)]
    assert r.y == [(1, -1), (0, 1)]
    assert r.x == [(0, -1), (1, 1)]
    assert boundary_depths(A) == [q(1), q(0)]
    assert torsion_exponents(A, pad_to=3) == [q(1), q(0), q(0)]


def test_two_by_two_oracle_over_f2(F2):
    A = two_by_two(F2)
    assert [robustness_oracle(A, k) for k in (1, 2)] == [q(1), q(0)]
    assert boundary_depths(A, pad_to=2) == [q(1), q(0)]


def test_zero_map(QT, F2):
    Z = LinearMap.zero(FilteredSpace([q(1), q(2)], QT), FilteredSpace([q(0)], QT))
    r = svd(Z)
    assert r.rank == 0 and r.y == [(1, 0), (0, 1)] and r.x == [(1,)]
    assert boundary_depths(Z, pad_to=2) == [q(0), q(0)]
    Z2 = LinearMap.zero(FilteredSpace([q(1)], F2), FilteredSpace([q(0)], F2))
    assert robustness_oracle(Z2, 1) == q(0)


def test_elementary_boundary(QH, F2):
    E = elementary(QH, "1/2", "3/2", 0)
    r = svd(E.boundary(1))
    assert r.diffs == [q(3) / 2] and r.y == [(QH.one,)] and r.x == [(QH.one,)]
    E2 = elementary(F2, "0", "2", 0)
    assert boundary_depths(E2.boundary(1)) == [q(2)]
    assert robustness_oracle(E2.boundary(1), 1) == q(2)


def test_oracle_guards(QT, F2):
    with pytest.raises(ValueError):
        robustness_oracle(two_by_two(QT), 1)
    big = LinearMap(FilteredSpace([q(0)] * 5, F2), FilteredSpace([q(0)] * 5, F2),
                    [tuple(F2.one if i == j else F2.zero for i in range(5)) for j in range(5)])
    with pytest.raises(ValueError):
        robustness_oracle(big, 1)


def test_discrete_example_with_dual_and_extension(QZ):
    T = QZ.T(1)
    B = LinearMap(FilteredSpace([q(3), q(1)], QZ), FilteredSpace([q(0), q(0)], QZ),
                  [(QZ.one, T), (T, QZ.one - T)])
    r = svd(B)
    assert r.diffs == [q(3), q(1)] and check_svd(B, r) == []
    At, rt = dual_svd(B, r)
    assert check_svd(At, rt) == []
    Bx, rx = extend_svd(B, r, ValueGroup.parse("discrete:1/2"))
    assert check_svd(Bx, rx) == [] and rx.diffs == r.diffs


def test_check_svd_catches_damage(QT):
    A = two_by_two(QT)
    r = svd(A)
    bad = SvdResult(y=list(reversed(r.y)), x=r.x, rank=r.rank, y_levels=r.y_levels, x_levels=r.x_levels)
    assert check_svd(A, bad)
    short = SvdResult(y=r.y[:1], x=r.x, rank=1, y_levels=r.y_levels[:1], x_levels=r.x_levels)
    assert check_svd(A, short)


def test_linear_map_helpers(QT):
    A = two_by_two(QT)
    assert A.adjoint().columns == [(1, 1), (0, 1)]
    assert A.apply((1, 1)) == (2, 1) and A.entry(0, 1) == 1
    with pytest.raises(ValueError):
        LinearMap(A.domain, A.codomain, [(1, 0)])


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=lambda c: f"{c[0]}-{c[1]}")
@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_svd_postconditions_on_random_maps(config, seed):
    F = make_field(*config)
    rng = random.Random(seed)
    m, n = rng.randint(1, 4), rng.randint(1, 4)
    dom = FilteredSpace([random_level(rng, F.group) for _ in range(n)], F)
    cod = FilteredSpace([random_level(rng, F.group) for _ in range(m)], F)
    A = LinearMap(dom, cod, [random_vector(rng, cod) for _ in range(n)])
    r = svd(A)
    assert check_svd(A, r) == []
    At, rt = dual_svd(A, r)
    assert check_svd(At, rt) == []
    # the adjoint has the same level drops
    assert rt.diffs == r.diffs


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_depths_match_oracle_over_f2(seed):
    F = NovikovField(GF(2))
    rng = random.Random(seed)
    m, n = rng.randint(1, 3), rng.randint(1, 4)
    cod = FilteredSpace([random_level(rng, F.group) for _ in range(m)], F)
    cols = [tuple(F.one if rng.random() < 0.5 else F.zero for _ in range(m)) for _ in range(n)]
    # boundary depths are about maps that never raise levels
    dom = FilteredSpace([max(random_level(rng, F.group), level(cod, c)) if any(c) else random_level(rng, F.group)
                         for c in cols], F)
    A = LinearMap(dom, cod, cols)
    assert boundary_depths(A, pad_to=3) == [robustness_oracle(A, k) for k in (1, 2, 3)]


def test_debug_mode_raises_on_inconsistent_result(monkeypatch, QT):
    svd_mod = importlib.import_module("novbar.svd")  # the package re-exports a function of the same name

    monkeypatch.setattr(svd_mod, "check_svd", lambda A, r: ["forced failure"])
    with pytest.raises(SvdCheckError):
        svd_mod.svd(two_by_two(QT), debug=True)
