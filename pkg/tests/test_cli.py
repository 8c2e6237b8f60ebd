import csv
import json
from fractions import Fraction
from pathlib import Path

import pytest

from sqwalk.cli import main
from sqwalk.specfile import shipped

DIAMOND = str(shipped("diamond_grover.json"))
ROOT = Path(__file__).resolve().parents[1]


def read_csv(path):
    lines = Path(path).read_text().splitlines()
    assert lines[0] == "# schema_version: 1"
    return list(csv.DictReader(lines[1:]))


def test_hitting_grover_exact(tmp_path):
    out = tmp_path / "hit.csv"
    assert main(["--exact", "hitting", "--graph", DIAMOND, "--nmax", "19", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert len(rows) == 20
    probs = {int(r["n"]): Fraction(r["prob"]) for r in rows}
    assert [probs[n] for n in (3, 7, 11, 15, 19)] == [Fraction(64, 81**m) for m in range(1, 6)]
    assert all(p == 0 for n, p in probs.items() if n % 4 != 3)
    assert Fraction(rows[-1]["cumulative"]) == sum(Fraction(64, 81**m) for m in range(1, 6))


def test_hitting_float(tmp_path):
    out = tmp_path / "hit.csv"
    assert main(["hitting", "--graph", DIAMOND, "--nmax", "7", "--out", str(out)]) == 0
    rows = read_csv(out)
    assert float(rows[3]["prob"]) == pytest.approx(64 / 81, abs=1e-14)


def test_green_exact(tmp_path):
    out = tmp_path / "g.json"
    assert main(["--exact", "green", "--graph", DIAMOND, "--entry", "entry", "--exit", "exit",
                 "--mode", "trans", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1 and doc["exact"] is True
    assert doc["numerator"] == [[0, 0], [0, 0], [0, 0], [8, 0]]
    assert doc["denominator"] == [[9, 0], [0, 0], [0, 0], [0, 0], [-1, 0]]


def test_green_float_normalised(tmp_path):
    out = tmp_path / "g.json"
    assert main(["green", "--graph", DIAMOND, "--mode", "refl", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["exact"] is False and doc["mode"] == "refl"
    assert doc["denominator"][0] == [1.0, 0.0] or abs(doc["denominator"][0][0] - 1) < 1e-15
    assert doc["exit"] == {"site": "i", "dir": "-1"}


def test_exact_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["--exact", "green", "--graph", DIAMOND, "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["--exact", "hitting", "--graph", DIAMOND, "--nmax", "12", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_paths_direct_crossings(tmp_path):
    out = tmp_path / "p.json"
    desc = ROOT / "descriptors" / "direct_crossing.json"
    assert main(["--exact", "paths", "--graph", DIAMOND, "--descriptor", str(desc), "--mode", "exact",
                 "--nmax", "9", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1
    assert len(doc["terms"]) == 2 and {t["n"] for t in doc["terms"]} == {3}
    monos = [set(t["monomial"]) for t in doc["terms"]]
    assert {"t_{0+,A}", "t_{+-,B}", "t_{+0,D}"} in monos
    assert {"t_{0-,A}", "t_{+-,C}", "t_{-0,D}"} in monos
    # two crossings of weight (2/3)(1)(2/3) each
    assert doc["amplitudes"][3] == ["8/9", 0]


def test_paths_inline_and_merged(tmp_path):
    out = tmp_path / "p.json"
    desc = (ROOT / "descriptors" / "superior_arm_n3.json").read_text()
    assert main(["paths", "--graph", DIAMOND, "--descriptor", desc, "--nmax", "11", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert {t["n"] for t in doc["terms"]} == {7, 9, 11}
    assert all(t["monomial"]["t_B"] == 3 for t in doc["terms"])


def test_paths_bad_descriptor(tmp_path, capsys):
    out = tmp_path / "p.json"
    bad = json.dumps({"factors": [{"kind": "r", "site": "B", "in": "+", "out": "-", "power": 1}]})
    assert main(["paths", "--graph", DIAMOND, "--descriptor", bad, "--nmax", "5", "--out", str(out)]) == 2
    assert "kind" in capsys.readouterr().err
    assert not out.exists()
    bad = json.dumps({"factors": [{"site": "i", "in": "+1", "out": "-1", "power": 1}]})
    assert main(["paths", "--graph", DIAMOND, "--descriptor", bad, "--nmax", "5", "--out", str(out)]) == 2
    assert main(["paths", "--graph", DIAMOND, "--descriptor", "{", "--nmax", "5", "--out", str(out)]) == 2
    assert main(["paths", "--graph", DIAMOND, "--descriptor", "{}", "--nmax", "99", "--out", str(out)]) == 2
    assert not out.exists()


def test_evolve_csv(tmp_path):
    out = tmp_path / "e.csv"
    assert main(["evolve", "--graph", DIAMOND, "--steps", "3", "--initial", "A:0", "--gamma", "0.0",
                 "--out", str(out)]) == 0
    rows = read_csv(out)
    assert list(rows[0]) == ["step", "site", "dir", "re", "im", "prob"]
    assert rows[0]["site"] == "A" and rows[0]["dir"] == "0"
    at3 = [r for r in rows if r["step"] == "3" and r["site"] == "f"]
    assert len(at3) == 1 and float(at3[0]["prob"]) == pytest.approx(64 / 81, abs=1e-14)


def test_evolve_rejects_exact(tmp_path):
    assert main(["--exact", "evolve", "--graph", DIAMOND, "--steps", "1", "--out", str(tmp_path / "x")]) == 2


def test_invalid_spec_writes_nothing(tmp_path):
    spec = tmp_path / "bad.json"
    doc = json.loads(Path(DIAMOND).read_text())
    doc["bonds"][0]["a"]["site"] = 42
    spec.write_text(json.dumps(doc))
    out = tmp_path / "out.json"
    for cmd in (["green"], ["hitting", "--nmax", "3"], ["evolve", "--steps", "2"]):
        assert main([cmd[0], "--graph", str(spec), *cmd[1:], "--out", str(out)]) == 2
        assert not out.exists()


def test_missing_spec_file(tmp_path, capsys):
    assert main(["green", "--graph", str(tmp_path / "nope.json")]) == 2
    assert "No such file" in capsys.readouterr().err


def test_unknown_state_name(tmp_path):
    assert main(["green", "--graph", DIAMOND, "--entry", "nowhere", "--out", str(tmp_path / "g")]) == 2
    assert main(["green", "--graph", DIAMOND, "--entry", "A:7", "--out", str(tmp_path / "g")]) == 2


def test_mutually_exclusive_flags():
    with pytest.raises(SystemExit) as info:
        main(["--exact", "--float", "green", "--graph", DIAMOND])
    assert info.value.code == 2


def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out and "checks passed" in out


def test_verify_tiny_tolerance(capsys):
    assert main(["verify", "--tol", "1e-20"]) == 1
    out = capsys.readouterr().out
    fails = [line for line in out.splitlines() if line.startswith("FAIL")]
    assert fails and all("residual" in line for line in fails)
