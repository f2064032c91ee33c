"""End-to-end tests of the command-line interface."""

import json
from fractions import Fraction

from hypermoyal import Binarion, ExpPoly, Sigma, Ultradistribution, WaveFunction
from hypermoyal.cli import main

H = Sigma.HYPERBOLIC


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- star ---------------------------------------------------------------------


def test_star_hyperbolic(capsys):
    code, out, _ = run(capsys, "star", "p", "q", "--sigma", "+1")
    assert code == 0
    assert out == "sigma=+1: q1*p1 + 1j*h\n"


def test_star_complex(capsys):
    code, out, _ = run(capsys, "star", "q", "p", "--sigma", "-1")
    assert code == 0
    assert out == "sigma=-1: q1*p1\n"


def test_star_unit_absorbs(capsys):
    code, out, _ = run(capsys, "star", "1", "q^2", "--sigma", "+1")
    assert code == 0
    assert out == "sigma=+1: q1^2\n"


def test_star_both_signatures(capsys):
    code, out, _ = run(capsys, "star", "p", "q", "--sigma", "both")
    assert code == 0
    assert out.splitlines() == [
        "sigma=+1: q1*p1 + 1j*h",
        "sigma=-1: q1*p1 - 1i*h",
    ]


def test_star_numeric_h(capsys):
    code, out, _ = run(capsys, "star", "p", "q", "--sigma", "+1", "--h", "1/2")
    assert code == 0
    assert out == "sigma=+1: q1*p1 + 1/2j\n"
    code, _, err = run(capsys, "star", "p", "q", "--h", "-1")
    assert code == 2 and "positive" in err


def test_star_json_format(capsys):
    code, out, _ = run(capsys, "star", "p", "q", "--sigma", "+1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["result"] == "q1*p1 + 1j*h"


def test_star_parse_error_has_position_and_fails(capsys):
    code, _, err = run(capsys, "star", "p", "q +", "--sigma", "+1")
    assert code == 2
    assert "position" in err


# -- limit ----------------------------------------------------------------------


def test_limit_q_p_is_exact(capsys):
    code, out, _ = run(capsys, "limit", "q", "p", "--sigma", "both")
    assert code == 0
    assert "residual = 0" in out


def test_limit_cubes_shows_linear_decay(capsys):
    code, out, _ = run(capsys, "limit", "q^3", "p^3", "--sigma", "+1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["constant_term_zero"] is True
    values = data["values_at_ones"]
    # the residual is O(h): successive halvings shrink by at least ~2
    norms = [abs(float(v["re"])) + abs(float(v["im"])) for v in values]
    for a, b in zip(norms, norms[1:]):
        assert b < a / 1.9


def test_limit_constant_inputs(capsys):
    code, out, _ = run(capsys, "limit", "5", "q", "--sigma", "+1")
    assert code == 0
    assert "residual = 0" in out


# -- fourier and apply -------------------------------------------------------------


def test_fourier_command(tmp_path, capsys):
    lam = Ultradistribution.delta((0,), H, order=(2,))
    path = tmp_path / "atoms.json"
    path.write_text(json.dumps(lam.to_json_dict()), encoding="utf-8")
    code, out, _ = run(capsys, "fourier", str(path))
    assert code == 0
    # (-j*y)^2 = j^2 * y^2 = y^2 in the hyperbolic ring
    assert out.strip() == "x1^2"


def test_fourier_json_round_trip(tmp_path, capsys):
    lam = Ultradistribution.delta((Fraction(1, 2),), H, weight=Binarion(0, 1, H))
    path = tmp_path / "atoms.json"
    path.write_text(json.dumps(lam.to_json_dict()), encoding="utf-8")
    code, out, _ = run(capsys, "fourier", str(path), "--format", "json")
    assert code == 0
    assert ExpPoly.from_json_dict(json.loads(out)) == lam.fourier()


def test_apply_command_with_expression_symbol(tmp_path, capsys):
    op_path = tmp_path / "op.json"
    op_path.write_text(
        json.dumps({"symbol": "p", "h": "1/2", "sigma": 1}), encoding="utf-8"
    )
    phi = WaveFunction.plane_wave(Fraction(1), Fraction(1, 2), H)
    phi_path = tmp_path / "phi.json"
    phi_path.write_text(json.dumps(phi.to_json_dict()), encoding="utf-8")
    code, out, _ = run(capsys, "apply", str(op_path), str(phi_path), "--format", "json")
    assert code == 0
    result = WaveFunction.from_json_dict(json.loads(out))
    # plane wave with momentum 1 is an eigenfunction with eigenvalue 1
    assert result == phi


def test_apply_command_missing_file_fails(capsys):
    code, _, err = run(capsys, "apply", "/nonexistent.json", "/also-missing.json")
    assert code == 2
    assert err


# -- interfere -----------------------------------------------------------------------


CSV_ROWS = "0.5,0.5,0.5,0.5\n0.5,0.5,0.5,0.9\n0.5,0.9,0.1,0.95\n"


def test_interfere_json_report(tmp_path, capsys):
    path = tmp_path / "tables.csv"
    path.write_text(CSV_ROWS, encoding="utf-8")
    code, out, _ = run(capsys, "interfere", str(path))
    assert code == 0
    data = json.loads(out)
    assert [d["report"]["outcomes"][0]["regime"] for d in data] == [
        "trigonometric",
        "trigonometric",
        "hyperbolic",
    ]
    assert data[1]["report"]["outcomes"][0]["lambda"] == "4/5"
    assert data[2]["report"]["outcomes"][0]["lambda"] == "3/2"
    assert data[2]["theta_range"][0]["cosh_max"] == "5/3"


def test_interfere_csv_report(tmp_path, capsys):
    path = tmp_path / "tables.csv"
    path.write_text(CSV_ROWS, encoding="utf-8")
    code, out, _ = run(capsys, "interfere", str(path), "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("row,outcome,")
    assert len(lines) == 1 + 6  # header + two outcomes per table


def test_interfere_empty_csv(tmp_path, capsys):
    path = tmp_path / "empty.csv"
    path.write_text("", encoding="utf-8")
    code, out, _ = run(capsys, "interfere", str(path))
    assert code == 0
    assert json.loads(out) == []


def test_interfere_malformed_probability(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("0.5,0.5,0.5,1.2\n", encoding="utf-8")
    code, _, err = run(capsys, "interfere", str(path))
    assert code == 2
    assert "row 1" in err


# -- super ----------------------------------------------------------------------------


def test_super_product(capsys):
    code, out, _ = run(capsys, "super", "t2", "t1", "--gens", "2")
    assert code == 0
    assert "a*b = -θ1θ2" in out
    assert "supercommutator = 0" in out


def test_super_witness(capsys):
    code, out, _ = run(capsys, "super", "--witness", "3", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["witness"] == "θ1θ2θ3"
    assert data["odd_monomials_annihilated"] == 4
    assert data["nonzero"] is True


def test_super_needs_arguments(capsys):
    code, _, err = run(capsys, "super")
    assert code == 2
    assert "witness" in err


# -- selftest ----------------------------------------------------------------------------


def test_selftest_fast_passes_and_is_deterministic(tmp_path, capsys):
    out1 = tmp_path / "r1.json"
    out2 = tmp_path / "r2.json"
    code1 = main(["selftest", "--fast", "--seed", "3", "--out", str(out1)])
    code2 = main(["selftest", "--fast", "--seed", "3", "--out", str(out2)])
    capsys.readouterr()
    assert code1 == 0 and code2 == 0
    assert out1.read_bytes() == out2.read_bytes()
    report = json.loads(out1.read_text())
    assert report["all_passed"] is True
    assert [c["id"] for c in report["criteria"]] == list(range(1, 11))


def test_selftest_text_format(capsys):
    code, out, _ = run(capsys, "selftest", "--fast", "--seed", "1", "--format", "text")
    assert code == 0
    assert out.count("[PASS]") == 10
    assert "all passed" in out


def test_out_writes_file(tmp_path, capsys):
    target = tmp_path / "star.txt"
    code = main(["star", "p", "q", "--sigma", "+1", "--out", str(target)])
    capsys.readouterr()
    assert code == 0
    assert target.read_text() == "sigma=+1: q1*p1 + 1j*h\n"
