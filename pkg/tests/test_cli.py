import json

import pytest

from novbar.cli import main
from novbar.complex import elementary
from novbar.ingest import save_complex


@pytest.fixture
def e010(tmp_path, QT):
    path = tmp_path / "e.json"
    save_complex(elementary(QT, "0", "1", 0), path)
    return path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_barcode_files(tmp_path, e010, capsys):
    code, _, _ = run(capsys, "barcode", e010, "-o", tmp_path / "out")
    assert code == 0
    concise = json.loads((tmp_path / "out.concise.json").read_text())
    assert concise["degrees"] == [{"degree": 0, "bars": [{"a": "0", "L": "1"}]}]
    assert (tmp_path / "out.verbose.json").exists()


def test_barcode_formats(tmp_path, e010, capsys):
    assert run(capsys, "barcode", e010, "--format", "csv", "-o", tmp_path / "c")[0] == 0
    assert (tmp_path / "c.concise.csv").read_text() == "degree,a,L\n0,0,1\n"
    assert run(capsys, "barcode", e010, "--format", "svg", "-o", tmp_path / "s")[0] == 0
    code, _, err = run(capsys, "barcode", e010, "--format", "csv")
    assert code == 2 and json.loads(err)["kind"] == "usage"
    code, out, _ = run(capsys, "barcode", e010, "--debug-checks", "--degree", "1")
    assert code == 0 and json.loads(out)["concise"]["degrees"] == []


def test_bottleneck_against_itself(tmp_path, e010, capsys):
    run(capsys, "barcode", e010, "-o", tmp_path / "out")
    b = tmp_path / "out.concise.json"
    code, out, _ = run(capsys, "bottleneck", b, b)
    assert code == 0
    report = json.loads(out)
    assert report["delta"] == "0" and report["per_degree"] == {"0": "0"}


def test_svd_report(e010, capsys):
    code, out, _ = run(capsys, "svd", e010, "--degree", "1", "--debug-checks")
    report = json.loads(out)
    assert code == 0 and report["rank"] == 1
    assert report["boundary_depths"] == report["torsion_exponents"] == ["1"]
    code, _, err = run(capsys, "svd", e010)
    assert code == 2 and json.loads(err)["kind"] == "usage"


def test_spectrum(e010, capsys):
    code, out, _ = run(capsys, "spectrum", e010)
    assert code == 0 and json.loads(out)["spectrum"] == {"0": ["0"], "1": ["1"]}
    code, out, _ = run(capsys, "spectrum", e010, "--format", "csv", "--degree", "1")
    assert out == "degree,coset\n1,1\n"


def test_rips_then_barcode(tmp_path, capsys):
    pts = tmp_path / "pts.json"
    pts.write_text("[[0, 0], [3, 1]]")
    code, _, _ = run(capsys, "rips", pts, "--max-dim", "1", "-o", tmp_path / "r.json", "--field", "Fp:2")
    assert code == 0
    code, out, _ = run(capsys, "barcode", tmp_path / "r.json", "--field", "Fp:2", "--gamma", "trivial")
    bars = json.loads(out)["concise"]["degrees"][0]["bars"]
    assert bars == [{"a": "0", "L": "3"}, {"a": "0", "L": "inf"}]
    code, _, err = run(capsys, "rips", pts, "--gamma", "discrete:1")
    assert code == 2 and json.loads(err)["kind"] == "conflict"


def test_diagnostics(tmp_path, e010, capsys):
    code, _, err = run(capsys, "barcode", e010, "--gamma", "discrete:1")
    assert code == 2 and json.loads(err)["kind"] == "conflict"
    code, _, err = run(capsys, "barcode", tmp_path / "missing.json")
    assert code == 3 and json.loads(err)["status"] == "error"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"field": "Q", "degrees": {"0": {"levels": ["0"]}, "1": {"levels": ["-1"]}},
                               "boundaries": {"1": [[[["1", "0"]]]]}}))
    code, _, err = run(capsys, "barcode", bad)
    diag = json.loads(err)
    assert code == 3 and diag["kind"] == "validation" and "g1_0" in diag["violations"][0]
    strict = tmp_path / "strict.json"
    save_complex(elementary(__import__("novbar").NovikovField(__import__("novbar").QQ), "0", "0", 0), strict)
    assert run(capsys, "barcode", strict)[0] == 0
    assert run(capsys, "barcode", strict, "--strict")[0] == 3
    with pytest.raises(SystemExit):
        main(["barcode"])


def test_verify_subset_is_deterministic(capsys):
    first = run(capsys, "verify", "--seed", "7", "--only", "3,10")
    second = run(capsys, "verify", "--seed", "7", "--only", "3,10")
    assert first[0] == 0 and first[1] == second[1]
    assert "criterion  3 [PASS]" in first[1]
    code, _, err = run(capsys, "verify", "--only", "12")
    assert code == 2


@pytest.mark.slow
def test_verify_full_battery_twice_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    assert run(capsys, "verify", "--seed", "7", "-o", a)[0] == 0
    assert run(capsys, "verify", "--seed", "7", "-o", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().rstrip().endswith("11/11 criteria passed")
