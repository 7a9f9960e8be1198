from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from qorbit.cli import main, report_schema


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- exit codes ------------------------------------------------------------------------

def test_usage_error_exit_2(capsys):
    code, _, err = run(capsys, "verify", "--suite", "eigen", "--n-max", "0")
    assert code == 2
    assert "usage:" in err and "n must be >= 1" in err


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "norm", "--n-min", "1"],
    ["verify", "--m-max", "-1"],
    ["verify", "--tol", "0"],
    ["verify", "--suite", "nope"],
    ["norm", "--m", "0", "--n", "1"],
    ["coeffs", "--op", "EK", "--m", "-1", "--n", "1"],
    ["psi", "--m", "0"],
])
def test_invalid_parameters(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_pass_exit_0(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "eigen", "--n-max", "2", "--m-max", "3")
    assert code == 0
    assert out.splitlines()[-1].startswith("OK: 8 passed, 0 failed")


def test_failure_exit_1(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "tridiag", "--n-max", "1", "--m-max", "0")
    assert code == 1
    assert "FAIL tridiag Kinv2 m=0 n=1: beta: derived=(u^2 + u^6)/(1 + u^8)" in out


def test_amended_exit_0(capsys):
    code, _, _ = run(capsys, "verify", "--suite", "tridiag", "--n-max", "2", "--m-max", "2",
                     "--amended")
    assert code == 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qorbit", "verify", "--suite", "eigen", "--n-max", "0"],
                          capture_output=True, text=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "qorbit", "psi", "--m", "1", "--n", "1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "(q^2 z - i)/((q^-2 z + i)(z + i))"


# -- JSON reports ------------------------------------------------------------------------

@pytest.mark.parametrize("suite", ["field", "relations", "leibniz", "star", "eigen", "tridiag",
                                   "limit", "classical", "group", "norm"])
def test_json_validates(capsys, tmp_path, suite):
    path = tmp_path / "r.json"
    argv = ["verify", "--suite", suite, "--n-min", "2", "--n-max", "3", "--m-max", "2",
            "--samples", "20", "--pairs", "3", "--jmax", "2", "--format", "json",
            "--output", str(path)]
    code = main(argv)
    doc = json.loads(path.read_text("utf-8"))
    jsonschema.validate(doc, report_schema())
    assert doc["suite"] == suite
    assert doc["summary"]["seconds"] is None
    assert code == (0 if doc["summary"]["failed"] == 0 else 1)
    assert len(doc["cases"]) == doc["summary"]["passed"] + doc["summary"]["failed"]


def test_tridiag_grid_counts(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "tridiag", "--n-max", "6", "--m-max", "12",
                       "--format", "json")
    doc = json.loads(out)
    assert len(doc["cases"]) == 3 * 6 * 13
    bad = [(c["m"], c["n"], c["check"]) for c in doc["cases"] if c["status"] == "fail"]
    assert all(check == "Kinv2" and n != 2 for _, n, check in bad)
    assert code == 1
    assert all(c["residual"].startswith("beta: derived=") for c in doc["cases"] if c["status"] == "fail")


def test_json_deterministic_across_workers(capsys, monkeypatch):
    argv = ["verify", "--suite", "limit", "--n-max", "3", "--m-max", "4", "--format", "json"]
    monkeypatch.setenv("QORBIT_THREADS", "1")
    _, first, _ = run(capsys, *argv)
    monkeypatch.setenv("QORBIT_THREADS", "3")
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_seeded_suites_deterministic(capsys):
    argv = ["verify", "--suite", "group", "--n-max", "2", "--seed", "5", "--pairs", "4",
            "--format", "json"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_all_has_coverage(capsys, tmp_path):
    path = tmp_path / "all.json"
    main(["verify", "--suite", "all", "--n-max", "2", "--m-max", "2", "--samples", "10",
          "--pairs", "2", "--jmax", "2", "--format", "json", "--output", str(path)])
    doc = json.loads(path.read_text("utf-8"))
    jsonschema.validate(doc, report_schema())
    assert doc["coverage"]
    assert all(v["cases"] > 0 for v in doc["coverage"].values())
    assert set(doc["suites"]) == {"field", "relations", "leibniz", "star", "eigen", "tridiag",
                                  "limit", "classical", "group", "norm"}


def test_norm_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "norm", "--n-min", "2", "--n-max", "5",
                       "--m-max", "3", "--tol", "1e-8")
    assert code == 0, out


def test_latex_report(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "relations", "--n-max", "2", "--format", "latex")
    assert code == 0
    assert out.startswith("\\begin{tabular}") and "relations & 15 & 0" in out


# -- coeffs / psi / norm ------------------------------------------------------------------

def test_coeffs_text(capsys):
    code, out, _ = run(capsys, "coeffs", "--op", "EK", "--m", "0", "--n", "1", "--format", "text")
    assert code == 0
    assert out == "alpha=0  beta=(i*u^4)/(1 + u^8)  gamma=(i*u^4)/(1 + u^8)\n"


def test_coeffs_classical(capsys):
    code, out, _ = run(capsys, "coeffs", "--op", "EK", "--m", "1", "--n", "1", "--q", "1")
    assert code == 0 and out == "(i/2, 3i/2, i)\n"
    code, out, _ = run(capsys, "coeffs", "--op", "FK", "--m", "2", "--n", "3", "--q", "1")
    assert out == "(i, -7i/2, 5i/2)\n"


def test_coeffs_latex_flags_discrepancy(capsys):
    code, out, _ = run(capsys, "coeffs", "--op", "K2", "--m", "0", "--n", "1", "--format", "latex")
    assert code == 1
    assert "\\beta = \\frac{q + q^{3}}{1 + q^{4}}" in out
    assert "transcription differs" in out


def test_coeffs_json(capsys):
    code, out, _ = run(capsys, "coeffs", "--op", "K2", "--m", "1", "--n", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["match"] is True
    assert doc["derived"] == doc["transcribed"]


def test_psi_json(capsys):
    code, out, _ = run(capsys, "psi", "--m", "0", "--n", "1", "--format", "json")
    doc = json.loads(out)
    assert doc["expanded"] == "1/(i + z)"


def test_norm_commands(capsys):
    assert run(capsys, "norm", "--m", "0", "--n", "2", "--method", "closed")[1] == "pi/4\n"
    code, out, _ = run(capsys, "norm", "--m", "0", "--n", "2", "--method", "quadrature",
                       "--tol", "1e-8")
    assert code == 0
    assert out.startswith("0.785398") and out.rstrip().endswith("(est err < 1e-8)")
    doc = json.loads(run(capsys, "norm", "--m", "1", "--n", "3", "--format", "json")[1])
    assert doc["pi_multiple"] == "1/96"  # 4^-2 * 1! * 1! / 3!
