import json
import math
import subprocess
import sys

import pytest

from stokes_edge.cli import CONE_REPORT_SCHEMA, main, spectrum_from_csv, spectrum_to_csv
from stokes_edge.pencil import Eigenvalue, Region, Spectrum, WedgeConfig

import jsonschema


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_example(capsys):
    code, out, _ = run(["pencil", "classify", "--theta", "6.283185307", "--dm", "0", "--dp", "0"], capsys)
    assert code == 0
    lam1 = float(out.splitlines()[0].split("=")[1])
    assert abs(lam1 - 0.5) < 1e-8


def test_green_eval_example(capsys):
    code, out, _ = run(["green", "eval", "--bc", "mixed-normal", "--x", "0,0,1", "--xi", "0,0,2",
                        "--row", "3", "--col", "3"], capsys)
    assert code == 0 and abs(float(out) - 0.1061033) < 1e-7


def test_green_eval_delta_and_json(capsys):
    code, out, _ = run(["green", "eval", "--bc", "neumann", "--x", "0,0,1", "--xi", "0,0,2",
                        "--row", "4", "--col", "4"], capsys)
    assert code == 0 and "delta: -1" in out
    code, out, _ = run(["green", "eval", "--bc", "free-space", "--x", "1,0,0", "--xi", "0,0,0", "--json"], capsys)
    doc = json.loads(out)
    assert doc["format_version"] == 1 and len(doc["entries"]) == 16
    assert doc["delta"] == [{"row": 4, "col": 4, "coefficient": -1.0}]


def test_green_eval_derivative(capsys):
    code, out, _ = run(["green", "eval", "--bc", "free-space", "--x", "1,0,0", "--xi", "0,0,0",
                        "--row", "1", "--col", "1", "--dx", "1,0,0"], capsys)
    # d/dx1 of (1/r + x1^2/r^3)/(8 pi) at x = e1 is -2/(8 pi)
    assert code == 0 and abs(float(out.splitlines()[0]) + 2 / (8 * math.pi)) < 1e-8


@pytest.mark.parametrize("argv", [
    ["pencil", "classify", "--theta", "90deg", "--dm", "0", "--dp", "0"],
    ["pencil", "classify", "--theta", "7", "--dm", "0", "--dp", "0"],
    ["pencil", "classify", "--theta", "1", "--dm", "5", "--dp", "0"],
    ["green", "eval", "--bc", "dirichlet", "--x", "0,0", "--xi", "0,0,1"],
    ["green", "eval", "--bc", "dirichlet", "--x", "0,0,1", "--xi", "0,0,1"],
    ["green", "eval", "--bc", "dirichlet", "--x", "0,0,1", "--xi", "0,0,2", "--row", "1"],
    ["frobnicate"],
])
def test_usage_errors_exit_2(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 2 and err


def test_cone_schema_violation_exit_3(tmp_path, capsys):
    p = tmp_path / "c.json"
    p.write_text(json.dumps({"edges": [], "lambda_minus": -1, "lambda_plus": 1, "bogus": 0}))
    assert run(["cone", "report", "--config", str(p)], capsys)[0] == 3
    p.write_text(json.dumps({"edges": [{"name": "a", "theta": 9, "d_plus": 0, "d_minus": 0}],
                             "lambda_minus": -1, "lambda_plus": 1}))
    assert run(["cone", "report", "--config", str(p)], capsys)[0] == 3
    p.write_text("{not json")
    assert run(["cone", "report", "--config", str(p)], capsys)[0] == 3


def test_cone_report_roundtrip(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({
        "edges": [{"name": f"e{k}", "theta": math.pi / 2, "d_plus": 0, "d_minus": 3} for k in range(3)],
        "lambda_minus": -1.2, "lambda_plus": 0.4, "lambda_provenance": "assumed", "epsilon": 0.02}))
    out = tmp_path / "r.json"
    assert run(["cone", "report", "--config", str(cfg), "--out", str(out)], capsys)[0] == 0
    doc = json.loads(out.read_text())
    jsonschema.validate(doc, CONE_REPORT_SCHEMA)
    first = out.read_bytes()
    assert run(["cone", "report", "--config", str(cfg), "--out", str(out)], capsys)[0] == 0
    assert out.read_bytes() == first


def test_spectrum_csv_roundtrip_and_determinism(tmp_path, capsys):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    argv = ["pencil", "spectrum", "--theta", "1.5707963267948966", "--dm", "0", "--dp", "3"]
    assert run(argv + ["--csv", str(p1)], capsys)[0] == 0
    assert run(argv + ["--csv", str(p2)], capsys)[0] == 0
    assert p1.read_bytes() == p2.read_bytes()
    text = p1.read_text()
    assert text.splitlines()[0] == "re,im,source,theta,d_minus,d_plus"
    spec = spectrum_from_csv(text)
    assert spectrum_to_csv(spec) == text
    vals = spec.values()
    assert any(abs(z - 0.5946116440568355) < 1e-12 for z in vals)
    # conjugate pairs are both listed
    for z in vals:
        assert min(abs(z.conjugate() - w) for w in vals) < 1e-12


def test_csv_roundtrip_is_exact():
    cfg = WedgeConfig(1.234567890123456, 1, 2)
    spec = Spectrum(cfg, Region(), [Eigenvalue(complex(0.1 + 0.2, 1 / 3), "eq01"), Eigenvalue(2.0 + 0j, "lattice")])
    back = spectrum_from_csv(spectrum_to_csv(spec))
    assert [e.value for e in back.eigenvalues] == [e.value for e in spec.eigenvalues]
    assert back.config == cfg


def test_sweep_csv(tmp_path, capsys):
    p = tmp_path / "s.csv"
    assert run(["pencil", "sweep", "--dm", "0", "--dp", "0", "--theta-grid", "4", "--csv", str(p)], capsys)[0] == 0
    rows = p.read_text().splitlines()
    assert len(rows) == 5 and rows[-1].split(",")[4] == "0.5"


def test_verify_subprocess_green(tmp_path):
    out = tmp_path / "v.json"
    r = subprocess.run([sys.executable, "-m", "stokes_edge", "verify", "green", "--seed", "2", "--out", str(out)],
                       capture_output=True, text=True)
    assert r.returncode == 0, r.stderr
    assert json.loads(out.read_text())["passed"] is True
