import random
from fractions import Fraction as Fr

import pytest

from novbar.barcode import barcodes
from novbar.complex import validate
from novbar.exactnum import INF, QuadReal
from novbar.filtered import is_orthogonal, level
from novbar.generators import (
    FIELD_CONFIGS,
    homotopy_equivalence,
    make_field,
    normal_form,
    perturb_levels,
    random_bars,
    random_complex,
    random_isomorphism,
    random_points,
    random_scalar,
    random_summands,
    split_quasiequivalence,
)

CONFIG_IDS = [f"{g}-{G}" for g, G in FIELD_CONFIGS]


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=CONFIG_IDS)
def test_same_seed_same_stream(config):
    F = make_field(*config)
    a = random_complex(random.Random(5), F)
    b = random_complex(random.Random(5), F)
    assert a[0] == b[0] and a[1] == b[1]


@pytest.mark.parametrize("config", [c for c in FIELD_CONFIGS if c[1] != "trivial"])
def test_scalars_respect_valuation_floor(config):
    F = make_field(*config)
    rng = random.Random(2)
    for _ in range(50):
        x = random_scalar(rng, F, min_valuation=QuadReal(1), nonzero=True)
        assert x and F.nu(x) >= QuadReal(1)


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=CONFIG_IDS)
def test_summands_fit_the_dimension_cap(config):
    F = make_field(*config)
    rng = random.Random(3)
    for _ in range(20):
        summands = random_summands(rng, F, max_dim=3)
        C = normal_form(F, summands).complex
        assert all(C.dim(k) <= 3 for k in C.degrees())
        assert all(L is INF or L >= 0 for _, L, _ in summands)


def test_normal_form_positions(QT):
    s = [(QuadReal(0), QuadReal(1), 0), (QuadReal(2), INF, 0), (QuadReal(1), QuadReal(0), 1)]
    nf = normal_form(QT, s)
    assert nf.positions == [(0, 0), (1, None), (1, 0)]
    assert nf.complex.levels(0) == [QuadReal(0), QuadReal(2)]
    assert nf.complex.levels(1) == [QuadReal(1), QuadReal(1)]
    assert nf.complex.levels(2) == [QuadReal(1)]


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=CONFIG_IDS)
def test_isomorphisms_are_filtered_and_invertible(config):
    F = make_field(*config)
    rng = random.Random(4)
    for _ in range(5):
        C, _ = random_complex(rng, F, max_dim=3, scramble=False)
        iso = random_isomorphism(rng, C)
        D = iso.target
        assert validate(D) == []
        for k in C.degrees():
            P = iso.P[k]
            assert is_orthogonal(C.space(k), P)
            assert [level(C.space(k), v) for v in P] == list(D.levels(k))


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=CONFIG_IDS)
def test_perturbations_move_levels_by_at_most_delta(config):
    F = make_field(*config)
    rng = random.Random(6)
    delta = QuadReal(Fr(3, 4))
    for _ in range(10):
        C, _ = random_complex(rng, F, max_dim=3)
        D = perturb_levels(rng, C, delta)
        assert validate(D) == []
        moves = [abs(b - a) if b >= a else a - b for k in C.degrees() for a, b in zip(C.levels(k), D.levels(k))]
        assert max(moves) == delta
        assert all(m <= delta for m in moves)


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=CONFIG_IDS)
def test_chain_maps_are_valid(config):
    F = make_field(*config)
    rng = random.Random(7)
    for _ in range(4):
        Phi, _ = homotopy_equivalence(rng, F, max_dim=3)
        assert Phi.violations() == []
        assert barcodes(Phi.source)[1] == barcodes(Phi.target)[1]
        delta = QuadReal(Fr(1, 2))
        Psi = split_quasiequivalence(rng, F, delta, max_dim=3)
        assert Psi.violations() == [] and Psi.shift == delta


def test_bars_and_points():
    rng = random.Random(8)
    bars = random_bars(rng, make_field("Q", "discrete:1").group, 20)
    assert all(b.L is INF or b.L > 0 for b in bars)
    pts = random_points(rng, 4, dim=3)
    assert len(pts) == 4 and all(len(p) == 3 for p in pts)
