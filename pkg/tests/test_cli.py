"""Command line interface: schemas, exit codes, determinism."""

import json

import pytest

import hypdet.cli as cli_mod
from hypdet.cli import main


def _run(capsys, argv):
    rc = main(argv)
    captured = capsys.readouterr()
    return rc, captured.out, captured.err


def _run_json(capsys, argv):
    rc, out, err = _run(capsys, argv)
    assert rc == 0, err
    return json.loads(out)


# ---------------------------------------------------------------------------
# Success paths
# ---------------------------------------------------------------------------

def test_x1_verify(capsys):
    doc = _run_json(capsys, ["x1-verify"])
    assert doc["schema"] == "hypdet/1"
    assert doc["matches_paper"] is True
    assert doc["coefficients"]["ZDZ1"] == "-37/36"
    assert doc["coefficients"]["LOG2"] == "-167/216"
    assert doc["numeric_value"].startswith("-0.516106111150")


def test_mv_check(capsys):
    doc = _run_json(capsys, ["mv-check", "--signature", "0;inf,2,3"])
    assert doc["coeff_L"] == "-61/216"
    assert doc["coeff_LL"] == "1/3"
    assert doc["difference"] == "0"


def test_cgamma(capsys):
    doc = _run_json(capsys, ["cgamma", "--signature", "0;inf,2,3", "--digits", "20"])
    assert "35/3*ZP1" in doc["cgamma"]
    assert "LPCHI3" in doc["reduced"]
    assert doc["numeric"].startswith("-0.356938981698904693")


def test_cusp_det(capsys):
    doc = _run_json(capsys, ["cusp-det"])
    assert doc["asymptotic"] == "[1/3*PI]*a + [1/2*ONE]*log_a + [0] + o(1)"
    assert doc["coeff_L"] == "1/6"
    assert doc["coeff_LL"] == "1/2"


def test_cone_det(capsys):
    doc = _run_json(capsys, ["cone-det", "--omega", "2"])
    assert "log_eta(2)" in doc["asymptotic"]
    assert "4*ZP1" in doc["asymptotic"]


def test_specfun_selftest(capsys):
    doc = _run_json(capsys, ["specfun-selftest"])
    assert doc["all_passed"] is True
    assert doc["failed"] == []
    assert all(c["passed"] for c in doc["checks"])


def test_sarnak(capsys):
    doc = _run_json(capsys, ["sarnak", "--s", "1.5", "--d-max", "500"])
    assert float(doc["log_z"]) < 0
    assert doc["class_number_sum"] > 0
    assert float(doc["k_tail_bound"]) >= 0


def test_cusp_scan_csv(capsys):
    rc, out, err = _run(capsys, ["cusp-scan", "--a", "1", "--k-max", "1",
                                 "--r-max", "12", "--format", "csv"])
    assert rc == 0, err
    lines = out.strip().splitlines()
    assert lines[0] == "k,j,r,lambda"
    assert len(lines) >= 2
    assert lines[1].startswith("1,1,9.7687700")


def test_cone_scan_csv(capsys):
    rc, out, err = _run(capsys, ["cone-scan", "--omega", "2", "--eta", "0.5",
                                 "--k-max", "1", "--r-max", "8", "--format", "csv"])
    assert rc == 0, err
    lines = out.strip().splitlines()
    assert lines[0] == "omega,k,j,r,lambda"
    assert lines[1].startswith("2,0,1,4.8182135")


def test_cusp_zeta_report(capsys):
    doc = _run_json(capsys, ["cusp-zeta", "--a", "1", "--s", "1.75",
                             "--k-max", "1", "--r-max", "10"])
    row = doc["results"][0]
    assert set(row) >= {"s", "direct", "direct_tail", "contour", "k_max",
                        "abs_difference", "tail_budget"}
    assert float(row["direct"]) > 0
    assert float(row["contour"]) > 0


def test_cone_zeta_report(capsys):
    doc = _run_json(capsys, ["cone-zeta", "--omega", "2", "--eta", "0.5",
                             "--s", "1.5", "--k-max", "5", "--r-max", "40"])
    row = doc["results"][0]
    rel = abs(float(row["direct"]) - float(row["contour"])) / float(row["direct"])
    assert rel < 2e-2


# ---------------------------------------------------------------------------
# Determinism, output file, precision control
# ---------------------------------------------------------------------------

def test_byte_identical_reports(capsys):
    rc1, out1, _ = _run(capsys, ["x1-verify"])
    rc2, out2, _ = _run(capsys, ["x1-verify"])
    assert rc1 == rc2 == 0
    assert out1 == out2
    rc1, mv1, _ = _run(capsys, ["mv-check", "--signature", "1;2"])
    rc2, mv2, _ = _run(capsys, ["mv-check", "--signature", "1;2"])
    assert rc1 == rc2 == 0
    assert mv1 == mv2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc, _, err = _run(capsys, ["x1-verify", "--out", str(target)])
    assert rc == 0, err
    doc = json.loads(target.read_text())
    assert doc["schema"] == "hypdet/1"


def test_precision_env_override(capsys, monkeypatch):
    monkeypatch.setenv("HYPDET_PRECISION", "20")
    doc = _run_json(capsys, ["x1-verify"])
    mantissa = doc["numeric_value"].lstrip("-0.")
    assert len(mantissa) >= 19


def test_precision_env_invalid(capsys, monkeypatch):
    monkeypatch.setenv("HYPDET_PRECISION", "abc")
    rc, out, err = _run(capsys, ["x1-verify"])
    assert rc == 1
    assert json.loads(err)["error"]["code"] == "USAGE"


# ---------------------------------------------------------------------------
# Failure paths
# ---------------------------------------------------------------------------

def test_missing_required_option(capsys):
    rc, out, err = _run(capsys, ["mv-check"])
    assert rc == 1
    msg = json.loads(err)["error"]["message"]
    assert "signature" in msg


def test_digits_too_low(capsys):
    rc, _, err = _run(capsys, ["x1-verify", "--digits", "3"])
    assert rc == 1
    assert json.loads(err)["error"]["code"] == "USAGE"


def test_csv_only_for_scans(capsys):
    rc, _, err = _run(capsys, ["mv-check", "--signature", "1;2", "--format", "csv"])
    assert rc == 1
    assert json.loads(err)["error"]["code"] == "USAGE"


def test_invalid_signature_exit(capsys):
    rc, _, err = _run(capsys, ["mv-check", "--signature", "0;2,3"])
    assert rc in (1, 2)
    assert json.loads(err)["error"]["code"] in ("NOT_HYPERBOLIC", "INVALID_SIGNATURE")


def test_assertion_failure_exits_two(capsys, monkeypatch):
    def fake(sig):
        return {"signature": "1;2", "coeff_L": "0", "coeff_LL": "0",
                "log_deta": "0", "cgamma_direct": "0",
                "cgamma_from_assembly": "1/6", "difference": "1/6"}

    monkeypatch.setattr(cli_mod, "reconcile", fake)
    rc, _, err = _run(capsys, ["mv-check", "--signature", "1;2"])
    assert rc == 2
    assert json.loads(err)["error"]["code"] == "MISMATCH"
