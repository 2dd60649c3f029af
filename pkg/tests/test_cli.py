"""Command-line surface: exit codes, report stability, file round trips."""

import json

import pytest

from matchconn.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_det_prints_the_order_six_value(capsys):
    code, out, _ = run(capsys, "det", "--k", "6")
    assert code == 0
    assert "-131072" in out
    assert out.startswith("# matchconn")
    assert "# command: det" in out


def test_rank_mod_p(capsys):
    code, out, _ = run(capsys, "rank", "--k", "10", "--field", "p:7")
    assert code == 0
    assert "945" in out


def test_rank_rational(capsys):
    code, out, _ = run(capsys, "rank", "--k", "6", "--field", "q")
    assert code == 0
    assert "15" in out


def test_rank_rejects_odd_order(capsys):
    code, _, err = run(capsys, "rank", "--k", "7", "--field", "q")
    assert code == 2
    assert "error:" in err


def test_bad_field_token(capsys):
    code, _, err = run(capsys, "rank", "--k", "6", "--field", "gf4")
    assert code == 2
    assert "error:" in err


def test_spectrum_table(capsys):
    code, out, _ = run(capsys, "spectrum", "4")
    assert code == 0
    assert "-6" in out and "14" in out
    assert "56" in out


def test_tableaux_listing(capsys):
    code, out, _ = run(capsys, "tableaux", "3")
    assert code == 0
    assert "15" in out


def test_amplify_reports_identity(capsys):
    code, out, _ = run(capsys, "amplify", "--B", "4", "--t", "2", "--p", "3")
    assert code == 0
    assert "ok" in out.lower() or "holds" in out.lower()


def test_basis_report_is_byte_identical_across_runs(capsys):
    code1, out1, _ = run(capsys, "basis", "--beta", "5", "--gamma", "1", "--p", "3")
    code2, out2, _ = run(capsys, "basis", "--beta", "5", "--gamma", "1", "--p", "3")
    assert code1 == code2 == 0
    assert out1 == out2
    assert "d=11101;M=1-3|2-5" in out1


def test_basis_too_small_is_a_validation_failure(capsys):
    code, _, err = run(capsys, "basis", "--beta", "4", "--gamma", "1", "--p", "3")
    assert code == 2
    assert "increase beta" in err


def test_reduce_then_count_round_trip(tmp_path, capsys):
    cnf = tmp_path / "xor.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n-1 -2 0\n", encoding="ascii")
    out = tmp_path / "xor.hcg"
    code, text, _ = run(
        capsys, "reduce", "--cnf", str(cnf), "--p", "5", "--out", str(out)
    )
    assert code == 0
    assert "predicted residue 2 mod 5" in text
    assert out.exists()
    sidecar = json.loads((tmp_path / "xor.hcg.json").read_text())
    assert sidecar == {
        "p": 5,
        "beta": 5,
        "gamma": 1,
        "q": 2,
        "width": sidecar["width"],
        "predicted_mod_p": 2,
    }

    code, text, _ = run(capsys, "count", "--graph", str(out), "--mod", "5")
    assert code == 0
    payload = json.loads(text)
    assert payload["residue"] == 2
    assert payload["modulus"] == 5
    assert payload["states_peak"] > 0
    assert "runtime_ms" in payload


def test_count_output_stable_except_runtime(tmp_path, capsys):
    cnf = tmp_path / "one.cnf"
    cnf.write_text("p cnf 1 1\n1 0\n", encoding="ascii")
    out = tmp_path / "one.hcg"
    run(capsys, "reduce", "--cnf", str(cnf), "--p", "3", "--out", str(out))
    _, text1, _ = run(capsys, "count", "--graph", str(out), "--mod", "3")
    _, text2, _ = run(capsys, "count", "--graph", str(out), "--mod", "3")
    p1, p2 = json.loads(text1), json.loads(text2)
    p1.pop("runtime_ms")
    p2.pop("runtime_ms")
    assert p1 == p2
    assert p1["residue"] == 1


def test_count_missing_file(capsys):
    code, _, err = run(capsys, "count", "--graph", "/nonexistent/g.hcg")
    assert code == 2
    assert "error:" in err


def test_reduce_rejects_bad_dimacs(tmp_path, capsys):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 1 1\n1\n", encoding="ascii")
    code, _, err = run(capsys, "reduce", "--cnf", str(bad), "--p", "3")
    assert code == 2
    assert "error:" in err


def test_verify_single_suite(capsys):
    code, out, _ = run(capsys, "verify", "determinant")
    assert code == 0
    assert "PASS [determinant]" in out
    assert "FAIL" not in out
    assert "checks passed" in out


def test_verify_unknown_suite_rejected(capsys):
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])


def test_matrix_dump(capsys):
    code, out, _ = run(capsys, "matrix", "--kind", "M", "--k", "4")
    assert code == 0
    body = [l for l in out.splitlines() if not l.startswith("#")]
    assert any("0 1 1" in l.replace(",", " ") for l in body) or "011" in out.replace(
        " ", ""
    ).replace(",", "")
