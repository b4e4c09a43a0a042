import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from rittcalc import linalg
from rittcalc.cli import EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK, EXIT_VERIFY, main


def _write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def _matrix(tmp_path, a, name="T.json"):
    return _write(tmp_path / name, linalg.matrix_to_json(np.asarray(a)))


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_identity(tmp_path, capsys):
    code, out, _ = _run(["analyze", _matrix(tmp_path, np.eye(2)), "--N", "64"], capsys)
    assert code == EXIT_OK
    rep = json.loads(out)["report"]
    assert rep["power_bound"] == pytest.approx(1.0) and rep["ritt_ratio"] == 0


def test_analyze_minus_one(tmp_path, capsys):
    code, out, _ = _run(["analyze", _matrix(tmp_path, np.diag([-1.0]))], capsys)
    rep = json.loads(out)["report"]
    assert code == EXIT_OK and rep["divergence_flag"] and rep["cayley_angle"] == "undefined"
    assert rep["ritt_ratio"] == pytest.approx(512.0)


def test_analyze_is_deterministic(tmp_path, capsys):
    m = _matrix(tmp_path, [[0.5, 0.2], [0.0, 0.3 + 0.1j]])
    outs = [_run(["analyze", m, "--N", "32"], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_analyze_csv_and_out(tmp_path, capsys):
    m = _matrix(tmp_path, np.diag([0.5]))
    dest = tmp_path / "s.csv"
    code, out, _ = _run(["analyze", m, "--format", "csv", "--out", str(dest), "--grid-nodes", "32"], capsys)
    assert code == EXIT_OK and out == ""
    lines = dest.read_text().splitlines()
    assert lines[0] == "z_re,z_im,abs_z_minus_1,scaled_resolvent_norm" and len(lines) > 32


def test_input_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 1, "re": [[1.0]')
    code, _, err = _run(["analyze", str(bad)], capsys)
    assert code == EXIT_INPUT and "bad.json:1" in err
    assert _run(["analyze", str(tmp_path / "missing.json")], capsys)[0] == EXIT_INPUT
    m = _matrix(tmp_path, np.eye(2))
    assert _run(["analyze", m, "--radii", "0.5"], capsys)[0] == EXIT_INPUT
    assert _run(["analyze", m, "--tol", "-1"], capsys)[0] == EXIT_INPUT
    phi = _write(tmp_path / "f.json", {"kind": "named", "family": "nope"})
    assert _run(["apply", m, phi], capsys)[0] == EXIT_INPUT
    assert _run(["improve-check", phi], capsys)[0] == EXIT_INPUT
    assert _run(["demo-angle-growth", "--format", "csv"], capsys)[0] == EXIT_INPUT


def test_apply_not_power_bounded(tmp_path, capsys):
    m = _matrix(tmp_path, [[2.0]])
    f = _write(tmp_path / "f.json", {"kind": "convex", "coeffs": [0.0, 1.0]})
    assert _run(["apply", m, f], capsys)[0] == EXIT_NUMERICAL


def test_apply_hausdorff_on_shift(tmp_path, capsys):
    m = _matrix(tmp_path, np.diag(np.ones(4), -1))
    f = _write(tmp_path / "f.json", {"kind": "named", "family": "h_alpha", "alpha": 0.5})
    code, out, _ = _run(["apply", m, f, "--N", "64", "--grid-nodes", "64"], capsys)
    res = json.loads(out)
    assert code == EXIT_OK and res["passed"]
    assert [v["kind"] for v in res["verifications"]] == ["improving", "subordination"]
    S = linalg.matrix_from_json(res["result_matrix"])
    assert abs(S[1, 0] - 0.5) < 1e-9


def test_apply_identity_series_on_non_ritt(tmp_path, capsys):
    T = np.diag([1.0, -1.0, 1j])
    f = _write(tmp_path / "f.json", {"kind": "convex", "coeffs": [0.0, 1.0]})
    code, out, _ = _run(["apply", _matrix(tmp_path, T), f, "--N", "32"], capsys)
    res = json.loads(out)
    assert code == EXIT_OK and "note" in res and res["verifications"] == []
    np.testing.assert_allclose(linalg.matrix_from_json(res["result_matrix"]), T)


def test_improve_check_h_alpha(tmp_path, capsys):
    f = _write(tmp_path / "f.json", {"kind": "named", "family": "h_alpha", "alpha": 0.5})
    code, out, _ = _run(["improve-check", f, "--samples", "20000"], capsys)
    res = json.loads(out)
    assert code == EXIT_OK and "seconds" not in res["estimate"]
    assert res["reference"]["angle"] == pytest.approx(math.pi / 4)
    assert -1e-2 <= res["reference"]["gamma_hat_minus_reference"] <= 1e-6


def test_demo_angle_growth(tmp_path, capsys):
    dest = tmp_path / "diag.json"
    code, out, _ = _run(["demo-angle-growth", "--n-grid", "64", "--eps", "0.2",
                         "--write-matrix", str(dest)], capsys)
    res = json.loads(out)
    assert code == EXIT_OK and res["passed"] and res["epsilon_scenario"]["holds"]
    D = linalg.matrix_from_json(json.loads(dest.read_text()))
    assert D.shape == (64, 64)
    code, out, _ = _run(["analyze", str(dest), "--N", "32", "--grid-nodes", "32"], capsys)
    assert json.loads(out)["report"]["minimal_angle"] == pytest.approx(res["result"]["alpha_hat"])


def test_verify_suite(capsys):
    code, out, err = _run(["verify", "appendix_b"], capsys)
    res = json.loads(out)
    assert code == EXIT_OK and res["passed"]
    assert "seconds" not in res["suites"][0]["checks"][0]
    assert err.count("PASS") == len(res["suites"][0]["checks"]) and "FAIL" not in err


def test_verify_csv(capsys):
    code, out, _ = _run(["verify", "appendix_a", "--format", "csv"], capsys)
    assert code == EXIT_OK and out.startswith("suite,check,passed")


def test_module_entry_point_and_threads(tmp_path):
    m = _matrix(tmp_path, np.eye(1))
    r = subprocess.run([sys.executable, "-m", "rittcalc", "analyze", m], capture_output=True, text=True,
                       env={**os.environ, "RITT_CALC_THREADS": "x"})
    assert r.returncode == EXIT_INPUT and "RITT_CALC_THREADS" in r.stderr


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL, EXIT_VERIFY) == (0, 2, 3, 4)
