import json
import os
import subprocess
import sys

import pytest

from tridesign.cli import main
from tridesign.feasibility import run_scan
from tridesign.report import read_csv, to_csv, to_json


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_bound(capsys):
    assert run(["bound", "--n", "22", "--s", "1/4"], capsys)[:2] == (0, "891\n")
    assert run(["bound", "--n", "7", "--s", "1/3"], capsys)[:2] == (0, "56\n")
    code, _, err = run(["bound", "--n", "7", "--s", "0"], capsys)
    assert code != 0 and "bound undefined" in err
    assert run(["bound", "--n", "7", "--s", "x/y"], capsys)[0] == 64


def test_usage_errors(capsys):
    assert run(["scan", "--n-min", "10", "--n-max", "3"], capsys)[0] == 64
    assert run(["analyze", "--n", "3", "--t", "5"], capsys)[0] == 64
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--n-min", "x"])
    assert exc.value.code == 64


def test_unwritable_output(capsys, tmp_path):
    target = tmp_path / "missing" / "out.json"
    with pytest.raises(SystemExit) as exc:
        main(["scan", "--n-min", "3", "--n-max", "5", "--out", str(target)])
    assert exc.value.code == 74


def test_analyze_341(capsys):
    code, out, _ = run(["analyze", "--n", "341", "--t", "3744"], capsys)
    assert code == 0
    assert "(a, b, c) = (-1/7, -1/35, 1/14)" in out
    assert "X = 23205" in out
    assert "(X_a, Y_a, Z_a) = (1872/7, 552500/49, 571392/49)" in out
    assert "status: SurvivorRefutedByDerived" in out


def test_analyze_family_json(capsys):
    code, out, _ = run(["analyze", "--n", "22", "--t", "81", "--json"], capsys)
    doc = json.loads(out)
    assert doc["status"] == "KnownFamilyMatch"
    assert doc["families"] == ["Case3(m=3)"]
    assert doc["distribution"] == ["42", "512", "336"]


def test_scan_small_range_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for p in (a, b):
        assert main(["scan", "--n-min", "3", "--n-max", "60", "--no-timestamp", "--quiet", "--jobs", "1",
                     "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    keys = [(r["n"], r["M"]) for r in doc["records"]]
    assert keys == sorted(keys)
    assert (7, 56) in keys and (22, 891) in keys and (23, 552) in keys
    assert {r["status"] for r in doc["records"]} == {"KnownFamilyMatch"}
    assert doc["metadata"]["examined"] == sum(doc["metadata"]["counts"].values())


def test_csv_and_json_encode_same_records():
    res = run_scan(3, 80, verbose=False)
    js = json.loads(to_json(res, (3, 80), timestamp=False))
    rows = read_csv(to_csv(res))
    assert len(rows) == len(js["records"])
    assert [(int(r["n"]), int(r["M"])) for r in rows] == [(r["n"], r["M"]) for r in js["records"]]


def test_rationals_serialized_as_strings():
    res = run_scan(341, 341)
    rec = json.loads(to_json(res, (341, 341), timestamp=False))["records"][0]
    assert rec["inner_products"] == ["-1/7", "-1/35", "1/14"]
    assert rec["derived"][0]["values"] == ["1872/7", "552500/49", "571392/49"]
    assert rec["derived"][0]["verdict"] == "ContradictionNonInteger"


def test_verbose_scan_emits_rejections():
    res = run_scan(5, 5, verbose=True)
    assert len(res.records) == res.examined


def test_check_design(tmp_path, capsys):
    f = tmp_path / "e8.txt"
    assert main(["fixture", "e8_derived_56", "--out", str(f)]) == 0
    code, out, _ = run(["check-design", str(f)], capsys)
    assert code == 0 and "strength: 5" in out

    import math
    angles = [2 * math.pi * k / 6 for k in range(6)]
    angles[0] += 0.05  # move one vector off the hexagon
    bad = tmp_path / "bad.txt"
    bad.write_text("design coords dim=2 size=6 numeric\n"
                   + "".join(f"{math.cos(t)!r} {math.sin(t)!r}\n" for t in angles))
    code, out, _ = run(["check-design", str(bad)], capsys)
    assert code != 0 and "FAIL strength" in out

    num = tmp_path / "ico.txt"
    main(["fixture", "icosahedron", "--out", str(num)])
    code, _, err = run(["check-design", str(num), "--exact"], capsys)
    assert code == 65 and "exact mode requires rational tokens" in err
    capsys.readouterr()
    assert run(["check-design", str(num)], capsys)[0] == 0


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "tridesign.cli", "bound", "--n", "341", "--s", "1/14"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "638352"
