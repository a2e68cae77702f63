import json
import random
from fractions import Fraction as Fr

import pytest

from novbar.barcode import Bar, Barcode, barcodes, classical_oracle
from novbar.complex import ValidationError, elementary
from novbar.exactnum import INF, ConfigurationError, QuadReal, ValueGroup
from novbar.generators import FIELD_CONFIGS, make_field, random_complex
from novbar.ingest import (
    IngestError,
    barcode_csv,
    barcode_from_dict,
    barcode_svg,
    barcode_to_dict,
    complex_from_dict,
    complex_to_dict,
    load_barcode,
    load_complex,
    load_points,
    rips_complex,
    save_barcode,
    save_complex,
    save_outputs,
    spectrum_to_dict,
    svd_to_dict,
)
from novbar.svd import svd

q = QuadReal


def test_elementary_round_trip(tmp_path, QT):
    E = elementary(QT, "1", "2", 0)
    save_complex(E, tmp_path / "e.json")
    assert load_complex(tmp_path / "e.json") == E


@pytest.mark.parametrize("config", FIELD_CONFIGS, ids=lambda c: f"{c[0]}-{c[1]}")
def test_random_round_trips(config):
    F = make_field(*config)
    rng = random.Random(11)
    for _ in range(5):
        C, _ = random_complex(rng, F, max_dim=3)
        data = json.loads(json.dumps(complex_to_dict(C)))
        assert complex_from_dict(data) == C


def test_d_squared_nonzero_is_reported():
    data = {
        "field": "Q",
        "degrees": {"0": {"levels": ["0"]}, "1": {"levels": ["1"]}, "2": {"levels": ["2"]}},
        "boundaries": {"1": [[[["1", "0"]]]], "2": [[[["1", "0"]]]]},
    }
    with pytest.raises(ValidationError) as info:
        complex_from_dict(data)
    assert "g0_0" in str(info.value) and "g2_0" in str(info.value)
    assert complex_from_dict(data, check=False).dim(2) == 1


def test_exponent_outside_group_names_the_term():
    data = {
        "field": "Q",
        "value_group": {"d": 0, "generators": [["1", "0"]]},
        "degrees": {"0": {"levels": ["0"]}, "1": {"levels": ["1"]}},
        "boundaries": {"1": [[[["1", "1/2"]]]]},
    }
    with pytest.raises(IngestError) as info:
        complex_from_dict(data)
    assert info.value.location == "boundaries.1[0][0][0]"
    assert "1/2" in str(info.value)


def test_json_syntax_errors_carry_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"field": "Q",\n "degrees": {,}}')
    with pytest.raises(IngestError) as info:
        load_complex(p)
    assert info.value.location.endswith("bad.json:2:14")


def test_quotient_entries(QZ):
    T = QZ.T(1)
    from novbar.complex import FloerComplex

    C = FloerComplex.from_levels(QZ, {0: [q(0)], 1: [q(1)]}, {1: [[T / (QZ.one - T)]]})
    data = complex_to_dict(C)
    assert data["boundaries"]["1"][0][0] == {"num": [["1", "1"]], "den": [["1", "0"], ["-1", "1"]]}
    assert complex_from_dict(data) == C


def test_barcode_documents(tmp_path):
    G = ValueGroup.trivial()
    empty = Barcode([], G)
    assert barcode_to_dict(empty) == {"value_group": {"d": 0, "generators": []}, "verbose": False, "degrees": []}
    B = Barcode([Bar.make(0, q(0), q(1), G), Bar.make(1, q(2), INF, G), Bar.make(1, q(3), q(0), G)], G, verbose=True)
    doc = barcode_to_dict(B)
    assert doc["degrees"][1]["bars"] == [{"a": "2", "L": "inf"}, {"a": "3", "L": "0", "verbose_only": True}]
    save_barcode(B, tmp_path / "b.json")
    assert load_barcode(tmp_path / "b.json") == B
    assert barcode_from_dict(barcode_to_dict(empty)) == empty
    assert barcode_csv(B).splitlines()[0] == "degree,a,L"
    assert barcode_svg(B).startswith("<svg")
    with pytest.raises(IngestError):
        barcode_from_dict({"degrees": [{"degree": 0, "bars": [{"a": "0", "L": "-1"}]}]})


def test_other_outputs(tmp_path, QT):
    E = elementary(QT, "0", "1", 0)
    r = svd(E.boundary(1))
    assert svd_to_dict(r, QT)["diffs"] == ["1"]
    assert spectrum_to_dict(E)["spectrum"] == {"0": ["0"], "1": ["1"]}
    save_outputs(barcodes(E)[1], tmp_path / "c.csv", "csv")
    assert (tmp_path / "c.csv").read_text() == "degree,a,L\n0,0,1\n"
    save_outputs(E, tmp_path / "s.csv", "csv")
    assert (tmp_path / "s.csv").read_text() == "degree,coset\n0,0\n1,1\n"
    with pytest.raises(ValueError):
        save_outputs(r, tmp_path / "r.csv", "csv", QT)


def test_rips_examples():
    one = rips_complex([[5, 5]])
    assert one.degrees() == [0] and one.dim(0) == 1
    assert one.levels(0) == [q(0)]
    tri = rips_complex([[0, 0], [1, 0], [0, 2]], max_dim=2)
    assert tri.levels(1) == [q(1), q(2), q(2)] and tri.levels(2) == [q(2)]
    assert tri.names[1] == ["v0v1", "v0v2", "v1v2"]
    assert tri.boundary(2).columns == [(1, -1, 1)]
    pair = rips_complex([[0, 0], [3, 1]])
    assert classical_oracle(pair).concise() == barcodes(pair)[1]


def test_rips_metrics_and_cap():
    pts = [[0, 0], [1, 2]]
    assert rips_complex(pts, metric="L1").levels(1) == [q(3)]
    assert rips_complex(pts, metric="EuclidSq").levels(1) == [q(5)]
    assert rips_complex(pts, cap="1").dim(1) == 0
    with pytest.raises(ConfigurationError):
        rips_complex(pts, metric="L2")
    with pytest.raises(ConfigurationError):
        rips_complex(pts, max_dim=4)
    with pytest.raises(ConfigurationError):
        rips_complex([[i] for i in range(30)], max_dim=3, max_simplices=100)


def test_load_points(tmp_path):
    p = tmp_path / "pts.json"
    p.write_text('[[0, "1/2"], [1, 2]]')
    assert load_points(p) == [[0, Fr(1, 2)], [1, 2]]
    p.write_text('[[0, "x"]]')
    with pytest.raises(IngestError) as info:
        load_points(p)
    assert info.value.location == "[0]"
