import csv
import io
import json
import math
import subprocess
import sys

import pytest

from hardwall import __version__
from hardwall.cli import parse_and_run


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = parse_and_run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    assert code == 0, err + out
    return json.loads(out)


def test_constants():
    rep = run_json("constants")
    assert rep["command"] == "constants" and rep["tool_version"] == __version__
    c = rep["outputs"]["constants"]
    assert c["gamma_in"] == pytest.approx(0.23876, abs=5e-5)
    assert set(c) == {"alpha_in", "beta_in", "gamma_in", "alpha_out", "beta_out", "gamma_out"}
    res = rep["outputs"]["identity_residuals"]
    assert abs(res["in"]) < 1e-9 and abs(res["out"]) < 1e-9


def test_constants_csv():
    code, out, _ = run("constants", "--emit", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 8
    assert list(rows[0]) == ["name", "value", "error"]


def test_geometry():
    out = run_json("geometry", "--potential", "annulus-log a=0.5")["outputs"]
    assert out["r0"] == pytest.approx(math.sqrt(0.5), abs=1e-12)
    assert out["r1"] == pytest.approx(math.sqrt(1.5), abs=1e-12)
    assert out["eta"] == pytest.approx(0.5)
    assert out["regime"] == "InOutAnnulus_Interior"


def test_geometry_infinite_radius_is_a_string():
    out = run_json("geometry", "--potential", "gauss-scaled s=0.00000001")["outputs"]
    assert out["r1"] == "inf"


@pytest.mark.parametrize("method", ["quad", "gamma"])
def test_exact(method):
    out = run_json("exact", "--potential", "gauss-scaled s=1", "--n", "1", "--method", method)["outputs"]
    assert out["log_z_over_2pi_pow_n"] == pytest.approx(math.log(0.5 * -math.expm1(-1)), rel=1e-13)
    assert len(out["per_term_logs"]) == 1


def test_exact_csv_columns():
    code, out, _ = run("exact", "--potential", "pinned c=2", "--n", "5", "--emit", "csv")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "j,log_uj" and len(lines) == 6


def test_terms():
    code, out, _ = run("terms", "--potential", "annulus-log a=0.5", "--n", "400",
                       "--j-range", "190:210", "--compare", "oracle", "--emit", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and list(rows[0]) == ["j", "regime", "log_uj_asym", "log_uj_exact", "rel_err"]
    assert len(rows) == 20
    assert all(abs(float(r["rel_err"])) < 1e-2 for r in rows)
    assert {r["regime"] for r in rows} == {"InnerNear", "OuterNear"}


def test_terms_range_beyond_n():
    code, _, err = run("terms", "--potential", "annulus-log a=0.5", "--n", "10", "--j-range", "0:20")
    assert code == 2 and "exceeds" in err


def test_predict():
    out = run_json("predict", "--potential", "gauss-scaled s=0.8", "--n", "400")["outputs"]
    assert out["c2"] == pytest.approx(-0.5376)
    assert out["clog"] == "-1/3"
    assert out["regime"] == "InOutDisk_Interior"
    assert "predicted" in out


def test_verify_csv():
    code, out, _ = run("verify", "--potential", "gauss-scaled s=0.8", "--n", "100,200,400",
                       "--emit", "csv", "--method", "gamma")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and list(rows[0]) == ["n", "exact", "predicted", "remainder", "ratio"]
    assert [int(r["n"]) for r in rows] == [100, 200, 400]
    assert rows[0]["ratio"] == ""
    assert abs(float(rows[2]["remainder"])) < abs(float(rows[0]["remainder"]))


@pytest.mark.parametrize("argv", [
    ("constants",),
    ("geometry", "--potential", "pinned c=2"),
    ("exact", "--potential", "pinned c=2", "--n", "20"),
    ("terms", "--potential", "pinned c=2", "--n", "20"),
    ("predict", "--potential", "pinned c=2"),
    ("verify", "--potential", "pinned c=2", "--n", "10,20"),
])
def test_tolerance_is_honored(argv):
    rep = run_json(*argv, "--tol", "1e-8")
    assert rep["tolerances"]["rel_tol"] == 1e-8
    assert rep["inputs"]["tol"] == 1e-8


def test_tolerance_changes_quadrature():
    tight = run_json("exact", "--potential", "mittag mu=0.5 a=0.7", "--n", "30")
    loose = run_json("exact", "--potential", "mittag mu=0.5 a=0.7", "--n", "30", "--tol", "1e-3")
    a = tight["outputs"]["log_z_over_2pi_pow_n"]
    b = loose["outputs"]["log_z_over_2pi_pow_n"]
    assert b == pytest.approx(a, rel=1e-3)


def test_threads_give_identical_output():
    base = ("exact", "--potential", "annulus-log a=0.5", "--n", "40")
    one = run(*base)[1]
    two = run(*base, "--threads", "2")[1].replace('"threads": 2', '"threads": 1')
    assert one == two


@pytest.mark.parametrize("argv,code_name", [
    (("geometry", "--potential", "hexagon a=1"), "unknown_preset"),
    (("geometry", "--potential", "annulus-log a=x"), "malformed_number"),
    (("geometry", "--potential", "pinned c=0.2"), "bad_parameters"),
    (("exact", "--n", "3"), "usage"),
    (("frobnicate",), "usage"),
    (("exact", "--potential", "pinned c=2", "--n", "0"), "usage"),
    (("verify", "--potential", "pinned c=2", "--n", "1,x"), "usage"),
    (("constants", "--tol", "-1"), "usage"),
    (("constants", "--threads", "zero"), "usage"),
])
def test_usage_errors(argv, code_name):
    code, out, err = run(*argv)
    assert code == 2
    assert err.startswith("hardwall: error:")
    assert json.loads(out)["error"]["code"] == code_name


def test_numerical_failure_exit_code():
    code, out, _ = run("predict", "--potential", "gauss-scaled s=1.5")
    assert code == 1
    rep = json.loads(out)
    assert rep["error"]["code"] == "regime_failure" and rep["command"] == "predict"


def test_oracle_for_unsupported_preset_fails_cleanly():
    code, out, _ = run("exact", "--potential", "polylog a=0.6 c1=0.5 c2=0.5", "--n", "5",
                       "--method", "gamma")
    assert code == 1
    assert json.loads(out)["error"]["code"]


def test_byte_identical_subprocess_runs():
    argv = [sys.executable, "-m", "hardwall", "predict", "--potential", "annulus-log a=0.5", "--n", "100"]
    first = subprocess.run(argv, capture_output=True, check=True).stdout
    second = subprocess.run(argv, capture_output=True, check=True).stdout
    assert first == second and first.startswith(b"{")


def test_float_formatting():
    out = run("constants")[1]
    for token in out.replace(",", " ").split():
        if token[0].isdigit() or token[0] == "-":
            digits = token.lstrip("-").replace(".", "").split("e")[0].lstrip("0")
            assert len(digits) <= 15
