"""End-to-end checks of the command-line surface.

Each test drives cli.main in process and inspects stdout and the exit
status, the same contract a shell user sees.
"""

import json
import os

import pytest

from cylq.cli import main, MAX_ORACLE_TOTAL

GOLDEN = os.path.join(os.path.dirname(__file__), os.pardir, "golden")


def run(capsys, *argv):
    rc = main(list(argv))
    return rc, capsys.readouterr().out


# ---------------------------------------------------------------------------
# expand
# ---------------------------------------------------------------------------

def test_expand_sum_constant_term(capsys):
    rc, out = run(capsys, "expand", "--sum", "S11", "--rho", "1,1,1",
                  "--sigma", "1,1,1", "--order", "10", "--zmax", "3")
    assert rc == 0
    assert out.splitlines()[1] == "q^0: 1"


def test_expand_product_series(capsys):
    rc, out = run(capsys, "expand", "--product",
                  "theta:2,3,3,4,4,5,5@11;euler", "--order", "10", "--json")
    assert rc == 0
    data = json.loads(out)
    coeffs = {a: c for a, b, c in data["terms"]}
    assert [coeffs.get(e, 0) for e in range(6)] == [1, 1, 3, 6, 12, 21]


def test_expand_order_zero(capsys):
    rc, out = run(capsys, "expand", "--product", "theta:1@5", "--order", "0")
    assert rc == 0
    assert out.splitlines() == ["order: 0", "q^0: 1"]


def test_expand_sum_matches_product_at_z_one(capsys):
    # both sides of the top m=11 identity, through the same order
    rc, out = run(capsys, "expand", "--sum", "S11", "--rho", "1,1,1",
                  "--sigma", "1,1,1", "--order", "12", "--json")
    assert rc == 0
    lhs = json.loads(out)
    at_z1 = {}
    for a, b, c in lhs["terms"]:
        at_z1[a] = at_z1.get(a, 0) + c
    rc, out = run(capsys, "expand", "--product",
                  "theta:2,3,3,4,4,5,5@11;euler", "--order", "12", "--json")
    rhs = {a: c for a, b, c in json.loads(out)["terms"]}
    assert at_z1 == rhs


@pytest.mark.parametrize("argv", [
    ("expand", "--order", "5"),
    ("expand", "--sum", "S11", "--product", "euler", "--order", "5"),
    ("expand", "--sum", "S11", "--rho", "1,x", "--sigma", "1,1,1",
     "--order", "5"),
    ("expand", "--sum", "S11", "--rho", "1,1", "--sigma", "1,1,1",
     "--order", "5"),
    ("expand", "--product", "teta:1@5", "--order", "5"),
    ("expand", "--sum", "S11", "--rho", "1,1,1", "--sigma", "1,1,1",
     "--order", "-2"),
])
def test_expand_usage_errors(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    assert exc.value.code == 2


def test_expand_deterministic(capsys):
    args = ("expand", "--product", "theta:1,2@5;euler", "--order", "15")
    _, out1 = run(capsys, *args)
    _, out2 = run(capsys, *args)
    assert out1 == out2


# ---------------------------------------------------------------------------
# enumerate
# ---------------------------------------------------------------------------

def test_enumerate_with_borodin_check(capsys):
    rc, out = run(capsys, "enumerate", "--profile", "2,0,2",
                  "--max-total", "8")
    assert rc == 0
    data = json.loads(out)
    assert data["borodin_check"] == "ok"
    assert {"max_part": 0, "total": 0, "count": 1} in data["entries"]


def test_enumerate_rotated_profile_same_table(capsys):
    _, out1 = run(capsys, "enumerate", "--profile", "2,0,2",
                  "--max-total", "7")
    _, out2 = run(capsys, "enumerate", "--profile", "0,2,2",
                  "--max-total", "7")
    assert json.loads(out1)["entries"] == json.loads(out2)["entries"]


def test_enumerate_total_zero(capsys):
    rc, out = run(capsys, "enumerate", "--profile", "3,1,0",
                  "--max-total", "0")
    assert rc == 0
    assert json.loads(out)["entries"] == [
        {"max_part": 0, "total": 0, "count": 1}]


def test_enumerate_bound(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["enumerate", "--profile", "1,1,0",
              "--max-total", str(MAX_ORACLE_TOTAL + 1)])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def test_verify_classical_short(capsys):
    rc, out = run(capsys, "verify", "--suite", "classical", "--order", "12")
    assert rc == 0
    lines = out.splitlines()
    assert lines[-1].endswith("passed")
    assert all(ln.startswith("pass") for ln in lines[:-1])


def test_verify_mod13_short(capsys):
    rc, out = run(capsys, "verify", "--suite", "mod13", "--order", "10")
    assert rc == 0
    assert "23 of 23 passed" in out


def test_verify_extra_is_conjectural(capsys):
    rc, out = run(capsys, "verify", "--suite", "extra", "--order", "15")
    assert rc == 0
    assert "conjectural" in out


def test_verify_unknown_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "mod15"])
    assert exc.value.code == 2


# ---------------------------------------------------------------------------
# prove
# ---------------------------------------------------------------------------

def test_prove_single_profile_certificate(capsys):
    rc, out = run(capsys, "prove", "--modulus", "11", "--cap", "6",
                  "--profile", "6,1,1")
    assert rc == 0
    assert "R1[{1},{{0,1,1},{0,1,1}}] : 1 / 1" in out
    assert "R1[{1},{{1,1,1},{1,1,1}}] : -1 + q*z / 1" in out
    assert "R2[{1},{{2,1,1},{-1,1,1}}] : q*z / 1" in out
    assert len([ln for ln in out.splitlines() if " : " in ln]) == 3


def test_prove_cap_zero_fails(capsys):
    rc, out = run(capsys, "prove", "--modulus", "7", "--cap", "0",
                  "--profile", "2,2,0")
    assert rc == 1
    assert "failed" in out


def test_prove_campaign_writes_outputs(tmp_path, capsys):
    rc, out = run(capsys, "prove", "--modulus", "7", "--cap", "4",
                  "--output-dir", str(tmp_path))
    assert rc == 0
    assert "summary: proved=2, trivial=3" in out
    rep = json.loads((tmp_path / "m7_report.json").read_text())
    assert rep["modulus"] == 7
    for row in rep["profiles"]:
        assert row["status"] in ("trivial", "proved")
        if row["certificate_file"]:
            assert (tmp_path / row["certificate_file"]).exists()
    # the written certificates must satisfy the independent checker
    rc, out = run(capsys, "check-cert",
                  "--file", str(tmp_path / "m7_H2_2_0.cert"),
                  "--modulus", "7", "--profile", "2,2,0")
    assert rc == 0 and out.startswith("pass")


def test_prove_campaign_failure_exit(capsys):
    rc, out = run(capsys, "prove", "--modulus", "7", "--cap", "0")
    assert rc == 1
    assert "campaign FAILED on profiles:" in out
    assert "(2, 2, 0)" in out


# ---------------------------------------------------------------------------
# check-cert
# ---------------------------------------------------------------------------

def test_check_cert_golden(capsys):
    rc, out = run(capsys, "check-cert",
                  "--file", os.path.join(GOLDEN, "m11_H7_1_0.cert"),
                  "--modulus", "11", "--profile", "7,1,0")
    assert rc == 0
    assert out.startswith("pass")


def test_check_cert_corrupted(tmp_path, capsys):
    src = os.path.join(GOLDEN, "m11_H6_1_1.cert")
    bad = tmp_path / "bad.cert"
    bad.write_text(open(src).read().replace("q*z", "q*z + 1", 1))
    rc, out = run(capsys, "check-cert", "--file", str(bad),
                  "--modulus", "11", "--profile", "6,1,1")
    assert rc == 1
    assert out.startswith("fail")


def test_check_cert_parse_error_names_line(tmp_path, capsys):
    src = open(os.path.join(GOLDEN, "m11_H6_1_1.cert")).read()
    bad = tmp_path / "mangled.cert"
    bad.write_text(src.replace("R2", "ZZ"))
    rc, out = run(capsys, "check-cert", "--file", str(bad),
                  "--modulus", "11", "--profile", "6,1,1")
    assert rc == 1
    assert "line 6" in out


def test_check_cert_wrong_modulus(capsys):
    rc, out = run(capsys, "check-cert",
                  "--file", os.path.join(GOLDEN, "m11_H7_1_0.cert"),
                  "--modulus", "13", "--profile", "7,1,0")
    assert rc == 1
    assert "modulus 11" in out


def test_check_cert_trivial_profile(capsys):
    rc, out = run(capsys, "check-cert",
                  "--file", os.path.join(GOLDEN, "m11_H7_1_0.cert"),
                  "--modulus", "11", "--profile", "8,0,0")
    assert rc == 1
    assert "trivializes" in out


def test_check_cert_missing_file(capsys):
    rc, out = run(capsys, "check-cert", "--file", "/nonexistent.cert",
                  "--modulus", "11", "--profile", "7,1,0")
    assert rc == 1
    assert out.startswith("fail")


# ---------------------------------------------------------------------------
# report
# ---------------------------------------------------------------------------

def test_report_golden_m11(capsys):
    rc, out = run(capsys, "report", "--output-dir", GOLDEN,
                  "--modulus", "11")
    assert rc == 0
    assert "modulus 11: 15 profiles" in out
    assert "counts: proved=10, trivial=5" in out


def test_report_flags_failure(tmp_path, capsys):
    rep = {"modulus": 9, "profiles": [
        {"profile": [6, 0, 0], "status": "failed", "certificate_file": None,
         "max_index_magnitude": 0, "wall_time": 0.0}]}
    path = tmp_path / "m9_report.json"
    path.write_text(json.dumps(rep))
    rc, out = run(capsys, "report", "--file", str(path))
    assert rc == 1
    assert "failed=1" in out


def test_report_needs_location(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["report"])
    assert exc.value.code == 2
