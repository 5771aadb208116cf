import csv
import json
from fractions import Fraction as F
from pathlib import Path

import pytest

from gaborlab.cli import main, parse_range

GOLDEN = Path(__file__).parent / "golden" / "skew_sweep.csv"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_density_sep2d(capsys):
    code, out, _ = run(capsys, "density", "--family", "sep2d", "--a", "1/2", "--b", "1/2")
    assert code == 0
    js = json.loads(out)
    assert js["density"] == "4" and js["approx"] == 4.0 and js["schema"] == 1


def test_density_skew(capsys):
    code, out, _ = run(capsys, "density", "--family", "skew", "--a", "0.5", "--b", "0.5")
    assert code == 0 and json.loads(out)["density"] == "2"


def test_density_singular(capsys, tmp_path):
    m = tmp_path / "m.txt"
    m.write_text("1\n1 2\n2 4\n")
    code, out, err = run(capsys, "density", "--matrix", str(m))
    assert code == 3 and out == "" and "error" in err


def test_parse_errors(capsys, tmp_path):
    assert run(capsys, "density", "--family", "skew", "--a", "abc", "--b", "1")[0] == 2
    assert run(capsys, "density", "--family", "hexagon")[0] == 2
    assert run(capsys, "density", "--family", "skew", "--a", "0", "--b", "1")[0] == 2
    assert run(capsys, "density")[0] == 2
    assert run(capsys, "density", "--matrix", str(tmp_path / "missing"))[0] == 2


def test_unsupported_dimension(capsys, tmp_path):
    rows = [" ".join("1" if i == j else "0" for j in range(8)) for i in range(8)]
    m = tmp_path / "m.txt"
    m.write_text("4\n" + "\n".join(rows) + "\n")
    assert run(capsys, "classify", "--matrix", str(m))[0] == 4


@pytest.mark.parametrize("a, b, outcome", [
    ("0.7", "0.7", "Incomplete"),
    ("0.7", "0.3", "Unknown"),
])
def test_classify_skew(capsys, a, b, outcome):
    code, out, _ = run(capsys, "classify", "--family", "skew", "--a", a, "--b", b)
    js = json.loads(out)
    assert code == 0 and js["outcome"] == outcome
    if outcome == "Incomplete":
        assert js["evidence"][-1]["rule"] == "coset-splitting"
        assert js["evidence"][-1]["detail"]["index"] == 2


def test_classify_sep2d_critical(capsys):
    code, out, _ = run(capsys, "classify", "--family", "sep2d", "--a", "1", "--b", "1")
    assert json.loads(out)["outcome"] == "CompleteNotFrame"


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "--family", "skew", "--a", "0.4", "--b", "0.4")
    js = json.loads(out)
    assert code == 0
    assert js["certificates"]["frame_sublattice"]["index"] == 2
    assert js["certificates"]["incompleteness"] is None


def test_zak_scan(capsys, tmp_path):
    out_csv = tmp_path / "scan.csv"
    code, out, _ = run(capsys, "zak-scan", "--m", "16", "--out", str(out_csv))
    js = json.loads(out)
    assert code == 0 and js["argmin"] == [0.5, 0.5]
    assert len(out_csv.read_text().splitlines()) == 257


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--family", "sep1d", "--a", "1/2", "--radius", "4")
    js = json.loads(out)
    assert code == 0 and 0 < js["A_est"] <= js["B_est"]
    assert {"R", "h", "T", "residual", "classification_flags"} <= set(js)


def test_bounds_coarse_grid(capsys):
    assert run(capsys, "bounds", "--family", "sep1d", "--a", "1/2", "--h", "0.5")[0] == 2


def test_sweep_golden(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _, _ = run(capsys, "sweep", "--family", "skew", "--a", "0.1:0.9", "--b", "0.1:0.9",
                     "--step", "0.1", "--out", str(out))
    assert code == 0
    assert out.read_bytes() == GOLDEN.read_bytes()


def test_golden_matches_statements():
    rows = list(csv.DictReader(GOLDEN.open()))
    assert len(rows) == 81
    half = F(1, 2)
    for r in rows:
        a, b = F(r["a"]), F(r["b"])
        assert r["confidence"] == "exact"
        if a < half and b < half:
            assert r["outcome"] == "Frame"
        elif a > half and b > half:
            assert r["outcome"] == "Incomplete"
        elif a == b == half:
            assert r["outcome"] == "CompleteNotFrame"
        elif 2 * a * b > 1:
            assert r["outcome"] == "Incomplete"
        else:
            assert r["outcome"] == "Unknown"


def test_sweep_thread_independent(capsys, monkeypatch):
    argv = ["sweep", "--family", "skew", "--a", "0.3:0.7", "--b", "0.3:0.7", "--step", "0.1"]
    _, one, _ = run(capsys, *argv)
    monkeypatch.setenv("GABORLAB_THREADS", "4")
    _, four, _ = run(capsys, *argv)
    assert one == four


def test_sweep_cor6_flags_certificate_region(capsys):
    code, out, _ = run(capsys, "sweep", "--family", "cor6", "--k", "5", "--a", "0.225:0.425",
                       "--b", "0.825:0.975", "--step", "0.05")
    rows = list(csv.DictReader(out.splitlines()))
    assert code == 0
    assert any(r["rule"] == "coset-splitting" for r in rows)


def test_sweep_empty_range(capsys):
    code, out, err = run(capsys, "sweep", "--family", "skew", "--a", "0.9:0.1", "--b", "0.5", "--step", "0.1")
    assert code == 2 and out == ""


def test_parse_range():
    assert parse_range("0.1:0.3", F(1, 10)) == [F(1, 10), F(1, 5), F(3, 10)]
    assert parse_range("1/3", None) == [F(1, 3)]


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("# analysis overrides\nmax_iter = 1\nradius = 4\n")
    code, out, err = run(capsys, "bounds", "--family", "sep1d", "--a", "1/2", "--config", str(cfg))
    js = json.loads(out)
    assert code == 0 and js["R"] == 4.0
    assert "not-converged" in js["classification_flags"] and "warning" in err
    cfg.write_text("bogus = 1\n")
    assert run(capsys, "classify", "--family", "skew", "--a", "0.4", "--b", "0.4", "--config", str(cfg))[0] == 2


def test_relation_check(capsys):
    code, out, err = run(capsys, "relation-check")
    assert code == 0 and json.loads(out)["passed"]
    assert "pass" in err


def test_relation_check_d2(capsys):
    code, out, _ = run(capsys, "relation-check", "--d", "2")
    names = {c["check"] for c in json.loads(out)["checks"]}
    assert code == 0 and "tensor-factorization" in names


def test_relation_check_coarse(capsys):
    code, out, _ = run(capsys, "relation-check", "--h", "0.5")
    assert code == 5
    assert any("GridTooCoarse" in c["note"] for c in json.loads(out)["checks"])
