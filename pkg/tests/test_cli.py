import json
import subprocess
import sys

import pytest

from conftest import data_path
from toric_k3.cli import main

EXAMPLES_FILE = data_path("examples.txt")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_json(capsys):
    code, out, _ = run(capsys, "analyze", "--json", "--no-kodaira", EXAMPLES_FILE)
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "toric-k3-report/1"
    assert [r["label"] for r in doc["reports"]] == ["prism", "long_edge", "bipyramid", "plane_bundle", "tetra", "skew_tetra"]
    assert doc["config"]["kodaira"] is False


def test_analyze_text_uses_cox_names(capsys):
    code, out, _ = run(capsys, "analyze", EXAMPLES_FILE)
    assert code == 0
    assert "1) T  2) T  3) T" in out
    assert "Candelas-Font at z: L = [[-1, -1, 1], [-1, -1, -1]], (deg a, deg b) = (8, 12)" in out
    assert "Kodaira: 24 I1" in out


def test_scan_summary(capsys):
    code, out, _ = run(capsys, "scan", "--no-kodaira", "--jobs", "2", EXAMPLES_FILE)
    assert code == 0
    assert '"violations": 0' in out and "tetra: 15:TTT" in out


def test_planar_classes(capsys):
    code, out, _ = run(capsys, "planar-classes", "--json")
    doc = json.loads(out)
    assert code == 0 and len(doc["planar_classes"]) == 16
    c15 = doc["planar_classes"][14]
    assert c15["index"] == 15 and len(c15["monomials"]) == 7


def test_cut_and_weierstrass(capsys):
    code, out, _ = run(capsys, "cut", "--json", "--no-kodaira", "--fiber-class", "1", EXAMPLES_FILE)
    doc = json.loads(out)
    cut34 = doc["results"][3]["fibrations"][0]["cut"]
    assert code == 0 and cut34["valid"] is True
    code, out, _ = run(capsys, "weierstrass", "--json", "--fiber-class", "15", EXAMPLES_FILE)
    doc = json.loads(out)
    f44 = doc["results"][4]["fibrations"][0]
    assert f44["candelas_font"][0]["weierstrass"] == {"deg_a": 8, "deg_b": 12}
    assert f44["kodaira"]["fibers"] == {"I1": 24}


def test_input_errors_exit_1(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 four\n1 2 3\n")
    code, _, err = run(capsys, "analyze", str(bad))
    assert code == 1 and "line 1" in err
    code, _, err = run(capsys, "scan", str(tmp_path / "missing.txt"))
    assert code == 1 and "error" in err


def test_invariant_violation_exit_2(capsys, monkeypatch):
    import toric_k3.cli as cli

    real = cli.analyze

    def broken(rec, config):
        rep = real(rec, config)
        rep["violations"] = ["forced"]
        return rep

    monkeypatch.setattr(cli, "analyze", broken)
    code, _, _ = run(capsys, "analyze", "--no-kodaira", EXAMPLES_FILE)
    assert code == 2


def test_output_is_reproducible():
    cmd = [sys.executable, "-m", "toric_k3", "analyze", "--json", "--seed", "7", EXAMPLES_FILE]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_usage_error():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
