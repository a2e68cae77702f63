import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from novbar.barcode import barcodes
from novbar.complex import (
    FilteredChainMap,
    FloerComplex,
    ValidationError,
    check,
    coefficient_extension,
    direct_sum,
    dual_complex,
    elementary,
    mapping_cone,
    mapping_cylinder,
    split_map,
    splitting,
    validate,
)
from novbar.exactnum import INF, QuadReal, ValueGroup
from novbar.filtered import Inconsistent, is_orthogonal, solve_linear
from novbar.generators import FIELD_CONFIGS, homotopy_equivalence, make_field, random_complex, split_quasiequivalence

q = QuadReal


def test_elementary_complexes(QT):
    E = elementary(QT, "1", "2", 0)
    assert E.levels(0) == [q(1)] and E.levels(1) == [q(3)]
    assert E.boundary(1).columns == [(1,)]
    assert validate(E) == []
    inf = elementary(QT, "0", "inf", 1)
    assert inf.degrees() == [1] and inf.levels(1) == [q(0)]
    with pytest.raises(ValueError):
        elementary(QT, "0", "-1", 0)


def test_validation_names_the_offender(QT):
    up = FloerComplex.from_levels(QT, {0: [q(1)], 1: [q(0)]}, {1: [[1]]})
    (v,) = validate(up)
    assert v.kind == "level" and v.degree == 1 and v.where == "g1_0"
    dd = FloerComplex.from_levels(QT, {0: [q(0)], 1: [q(1)], 2: [q(2)]}, {1: [[1]], 2: [[1]]})
    (v,) = validate(dd)
    assert v.kind == "d2" and "g0_0" in v.where and "g2_0" in v.where
    with pytest.raises(ValidationError):
        check(dd)


def test_strict_mode(QT):
    assert validate(elementary(QT, "0", "1", 0), strict=True) == []
    (v,) = validate(elementary(QT, "0", "0", 0), strict=True)
    assert v.kind == "strict" and v.where == "y"


def test_direct_sum(QT):
    S = direct_sum([elementary(QT, "0", "1", 0), elementary(QT, "2", "inf", 0)])
    assert [(b.a, b.L) for b in barcodes(S)[1].in_degree(0)] == [(q(0), q(1)), (q(2), INF)]
    E = elementary(QT, "0", "1", 0)
    assert barcodes(direct_sum([E, FloerComplex(QT, {})]))[0] == barcodes(E)[0]


def test_dual_is_an_involution(QT):
    E = elementary(QT, "1", "2", 0)
    assert dual_complex(dual_complex(E)) == E
    bars = barcodes(dual_complex(E))[0].bars
    assert [(b.degree, b.a, b.L) for b in bars] == [(-1, q(-3), q(2))]


def test_coefficient_extension_of_rips_pair(QT):
    from novbar.ingest import rips_complex

    C = rips_complex([[0], [Fr(5, 2)]], max_dim=1)
    ext = coefficient_extension(C, ValueGroup.parse("discrete:1"))
    bars = sorted((b.a, b.L) for b in barcodes(ext)[1].bars)
    assert bars == [(q(0), q(Fr(5, 2))), (q(0), INF)]
    assert coefficient_extension(C, C.group) == C


def test_splitting_of_elementary(QT):
    E = elementary(QT, "0", "1", 0)
    s = splitting(E)
    assert s.basis == {0: [], 1: [(1,)]} and s.kernel == {0: [(1,)], 1: []}
    assert s.is_valid()
    zero = FloerComplex.from_levels(QT, {0: [q(0), q(1)]})
    assert splitting(zero).basis == {0: []}


def test_split_map_of_identity(QT):
    E = elementary(QT, "0", "1", 0)
    ident = FilteredChainMap(E, E, {0: [(1,)], 1: [(1,)]})
    sp = split_map(ident)
    assert sp.map(0).columns == [(1,)] and sp.map(1).columns == [(1,)]


def test_cylinder_levels_and_barcode(QT):
    E = elementary(QT, "0", "1", 0)
    ident = FilteredChainMap(E, E, {0: [(1,)], 1: [(1,)]})
    cyl = mapping_cylinder(ident, "l0", q(1))
    # c-block +1, d-block unshifted, e-block +1
    assert cyl.levels(0) == [q(1), q(0)]
    assert cyl.levels(1) == [q(2), q(1), q(1)]
    assert cyl.levels(2) == [q(2)]
    assert barcodes(mapping_cylinder(ident, "l0", q(0)))[1] == barcodes(E)[1]
    with pytest.raises(ValueError):
        mapping_cylinder(ident, "plain", q(1))


def test_cone_examples(QT):
    E = elementary(QT, "0", "1", 0)
    ident = FilteredChainMap(E, E, {0: [(1,)], 1: [(1,)]})
    assert len(barcodes(mapping_cone(ident))[1]) == 0
    D = FloerComplex.from_levels(QT, {0: [q(2)]})
    C = FloerComplex.from_levels(QT, {0: [q(0)]})
    cone = mapping_cone(FilteredChainMap(C, D, {}, q(1)))
    assert cone.levels(0) == [q(3)] and cone.levels(1) == [q(2)]


def test_shift_violation_is_rejected(QT):
    C = FloerComplex.from_levels(QT, {0: [q(0)]})
    D = FloerComplex.from_levels(QT, {0: [q(2)]})
    Phi = FilteredChainMap(C, D, {0: [(1,)]}, q(1))
    assert Phi.violations()
    with pytest.raises(ValueError):
        mapping_cone(Phi)


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=lambda c: f"{c[0]}-{c[1]}")
@settings(max_examples=8, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_cylinder_and_cone_are_complexes(config, seed):
    F = make_field(*config)
    rng = random.Random(seed)
    Phi, _ = homotopy_equivalence(rng, F, max_dim=3)
    assert Phi.violations() == []
    assert validate(mapping_cylinder(Phi, "l0", q(0))) == []
    Psi = split_quasiequivalence(rng, F, q(Fr(1, 2)), max_dim=3)
    assert validate(mapping_cone(Psi)) == []
    assert validate(mapping_cylinder(Psi, "l1")) == []


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=lambda c: f"{c[0]}-{c[1]}")
@settings(max_examples=8, deadline=None)
@given(seed=st.integers(0, 10 ** 6))
def test_splittings_of_random_complexes(config, seed):
    F = make_field(*config)
    rng = random.Random(seed)
    C, _ = random_complex(rng, F, max_dim=4)
    s = splitting(C)
    assert s.is_valid()
    for k in C.degrees():
        assert is_orthogonal(C.space(k), s.basis[k] + s.kernel[k])
    # a split map carries F^C into F^D
    ident = FilteredChainMap(C, C, {k: C.space(k).basis() for k in C.degrees()})
    sp = split_map(ident, s, s)
    for k in C.degrees():
        for f in s.basis[k]:
            img = sp.map(k).apply(f)
            if any(img):
                assert solve_linear(C.space(k), s.basis[k], img) is not Inconsistent
