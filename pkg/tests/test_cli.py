import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from fsfdesign.cli import main


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_design_json(capsys):
    code, out, _ = run(["design", "--n", "16", "--bw", "4", "--ntrans", "1"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["coefficients"][0] == pytest.approx(0.40474097, abs=1e-6)
    assert doc["psl_db"] == pytest.approx(-41.6636, abs=0.02)
    assert doc["grid"]["g"] == 0.001


def test_design_text_and_cycles(capsys):
    code, out, _ = run(["design", "--n", "16", "--bw", "4", "--format", "text"], capsys)
    assert code == 0 and "psl_db: -41.66" in out
    _, rad, _ = run(["design", "--n", "16", "--bw", "4"], capsys)
    _, cyc, _ = run(["design", "--n", "16", "--bw", "4", "--units", "cycles"], capsys)
    w_rad, w_cyc = json.loads(rad)["extremal_omegas"], json.loads(cyc)["extremal_omegas"]
    np.testing.assert_allclose(np.array(w_rad) / (2 * np.pi), w_cyc, rtol=1e-15)


def test_design_independent_bandpass(capsys):
    code, out, _ = run(["design", "--n", "16", "--type", "bandpass", "--bw", "3", "--m1", "2",
                        "--binding", "independent"], capsys)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["coefficients"]) == 2
    assert doc["psl_db"] <= -38.128 + 1e-6


@pytest.mark.parametrize("argv", [
    ["design", "--n", "16", "--bw", "9"],
    ["design", "--n", "16", "--bw", "4", "--m1", "3"],
    ["design", "--n", "16", "--type", "bandpass", "--bw", "3"],
    ["design", "--n", "16", "--bw", "4", "--binding", "independent"],
    ["design", "--n", "16", "--bw", "4", "--grid", "0"],
    ["design", "--n", "16", "--bw", "4", "--bogus"],
    ["verify", "--n", "32", "--bw", "6", "--coeffs", "0.4", "0.1"],
    ["verify", "--n", "32", "--bw", "6", "--coeffs", "1.5"],
    ["table", "lpf-cos-99"],
    ["table", "comparative", "--n", "999"],
    ["sweep-grid", "--n", "16", "--bw", "4", "--grids", "0.01,-1"],
    ["response", "--n", "16", "--bw", "4", "--coeffs", "0.4", "--range", "2,1"],
])
def test_input_errors_exit_2(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_no_convergence_is_exit_3(capsys, monkeypatch):
    from fsfdesign import cli
    from fsfdesign.errors import NoConvergence

    def boom(*a, **k):
        raise NoConvergence("stuck")

    monkeypatch.setattr(cli, "optimize", boom)
    assert run(["design", "--n", "16", "--bw", "4"], capsys)[0] == 3


def test_unwritable_output_is_exit_4(tmp_path, capsys):
    dest = tmp_path / "missing" / "x.json"
    assert run(["design", "--n", "16", "--bw", "4", "--out", str(dest)], capsys)[0] == 4


def test_verify(capsys):
    code, out, _ = run(["verify", "--n", "32", "--bw", "6", "--coeffs", "0.37172559"], capsys)
    assert code == 0
    assert json.loads(out)["psl_db"] == pytest.approx(-40.1590, abs=0.02)


def test_verify_118_tap_bandpass(capsys):
    code, out, _ = run(["verify", "--n", "118", "--type", "bandpass", "--bw", "11", "--m1", "22",
                        "--coeffs", "0.385346"], capsys)
    assert code == 0
    assert json.loads(out)["psl_db"] == pytest.approx(-40.98, abs=0.02)


def test_design_then_verify_round_trip(capsys):
    _, out, _ = run(["design", "--n", "33", "--bw", "8", "--ntrans", "3"], capsys)
    d = json.loads(out)
    coeffs = [repr(c) for c in d["coefficients"]]
    _, out, _ = run(["verify", "--n", "33", "--bw", "8", "--ntrans", "3", "--coeffs", *coeffs], capsys)
    assert json.loads(out)["psl_db"] == pytest.approx(d["psl_db"], abs=1e-9)


def test_byte_identical_reruns(capsys):
    argv = ["design", "--n", "24", "--bw", "3", "--ntrans", "2"]
    assert run(argv, capsys)[1] == run(argv, capsys)[1]


def test_table_filtered(tmp_path, capsys):
    dest = tmp_path / "t.md"
    code, _, _ = run(["table", "comparative", "--n", "16", "--bw", "4", "--out", str(dest)], capsys)
    assert code == 0
    text = dest.read_text()
    assert "~~-49.6~~" in text and "-34.7897" in text
    code, out, _ = run(["table", "comparative", "--n", "16", "--bw", "4", "--format", "csv"], capsys)
    assert code == 0 and len(out.splitlines()) == 4


def test_sweep_grid_formats(capsys):
    base = ["sweep-grid", "--n", "16", "--bw", "4", "--grids", "0.01,0.001"]
    code, out, _ = run(base, capsys)
    rows = json.loads(out)["rows"]
    assert code == 0 and [r["g"] for r in rows] == [0.01, 0.001]
    _, out, _ = run(base + ["--format", "csv"], capsys)
    assert out.splitlines()[0] == "g,coefficients,psl_db"
    _, out, _ = run(base + ["--format", "md"], capsys)
    assert out.startswith("| N*dw |") and len(out.splitlines()) == 4


def test_response_file(tmp_path, capsys):
    dest = tmp_path / "r.csv"
    code, _, _ = run(["response", "--n", "32", "--bw", "6", "--coeffs", "0.39201059",
                      "--step", "0.0005", "--out", str(dest)], capsys)
    assert code == 0
    with dest.open() as fh:
        rows = list(csv.DictReader(fh))
    w = np.array([float(r["omega_rad"]) for r in rows])
    db = np.array([float(r["db"]) if r["db"] else -np.inf for r in rows])
    assert db[w >= 2 * np.pi * 7 / 32].max() == pytest.approx(-42.464, abs=0.02)


def test_export_taps(capsys):
    code, out, _ = run(["export-taps", "--n", "16", "--bw", "4", "--coeffs", "0.40474097"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "index,value" and len(lines) == 17
    taps = np.array([float(ln.split(",")[1]) for ln in lines[1:]])
    np.testing.assert_allclose(taps, taps[::-1], atol=1e-15)
    assert taps.sum() == pytest.approx(1.0, abs=1e-12)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "fsfdesign", "--version"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("fsfdesign ")
