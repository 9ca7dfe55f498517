import json

import pytest

from infrank.cli import main
from infrank.intmat import IntMatrix
from infrank.serialize import (
    format_matrix_text,
    parse_chain,
    parse_document,
    serialize_aut,
    serialize_certificate,
)
from infrank.witness import tau_power, zaushko_commutator
from infrank.autrep import graded


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classify_tau(tmp_path, capsys):
    aut_file = tmp_path / "tau.aut"
    aut_file.write_text(serialize_aut(tau_power(1)))
    code, out, _ = run(["classify", str(aut_file)], capsys)
    assert code == 0
    assert "normal generator: True" in out
    assert "ladder rung: 1" in out


def test_classify_shear4(tmp_path, capsys):
    aut_file = tmp_path / "t4.aut"
    aut_file.write_text(serialize_aut(tau_power(4)))
    code, out, _ = run(["classify", str(aut_file)], capsys)
    assert code == 0
    assert "congruence gcd: 4" in out
    assert "divisors of 4" in out
    assert "ladder rung: 4" in out
    assert "witness chain" in out


def test_classify_graded_no_max(tmp_path, capsys):
    aut_file = tmp_path / "g.aut"
    aut_file.write_text(serialize_aut(graded((2, 3), ())))
    code, out, _ = run(["classify", str(aut_file)], capsys)
    assert code == 0
    assert "no maximal level" in out


def test_shear_writes_certificate(tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, out, _ = run(["shear", "--n", "3", "--m", "5"], capsys)
    assert code == 0
    assert "-5" in out  # sigma matrix contains -m
    cert = parse_document((tmp_path / "shear-n3-m5.cert").read_text())
    from infrank.words import verify_certificate

    assert verify_certificate(cert).ok


def test_zaushko_cli(tmp_path, capsys):
    rho = tmp_path / "rho.txt"
    rho.write_text(format_matrix_text(IntMatrix.from_rows([[-1]])))
    out_file = tmp_path / "z.cert"
    code, out, _ = run(["zaushko", str(rho), "--out", str(out_file)], capsys)
    assert code == 0
    assert out_file.exists()


def test_wans_cli(tmp_path, capsys):
    f = tmp_path / "f.txt"
    f.write_text(format_matrix_text(IntMatrix.from_rows([[5, 0], [0, 7]])))
    out_file = tmp_path / "w.cert"
    code, out, _ = run(["wans", str(f), "--out", str(out_file)], capsys)
    assert code == 0
    assert "verified: True" in out


def test_factor_cli(tmp_path, capsys):
    z = tmp_path / "z.txt"
    z.write_text(format_matrix_text(IntMatrix.from_rows([[2, 1], [0, 1]])))
    out_file = tmp_path / "f.cert"
    code, _, _ = run(["factor", str(z), "--m", "2", "--out", str(out_file)], capsys)
    assert code == 0


def test_pipeline_cli_and_verify(tmp_path, capsys):
    out_file = tmp_path / "chain.cert"
    code, out, _ = run(
        ["pipeline", "--k", "3", "--m", "2", "--out", str(out_file)], capsys
    )
    assert code == 0
    assert "euler-gcd-reduction" in out
    chain = parse_chain(out_file.read_text())
    assert chain.level == 2
    code, out, _ = run(["verify", str(out_file)], capsys)
    assert code == 0
    assert "verified: True" in out


def test_verify_rejects_tampered(tmp_path, capsys):
    _, _, cert = zaushko_commutator(IntMatrix.from_rows([[-1]]))
    text = serialize_certificate(cert)
    broken = text.replace('"block":[[1,2],[0,1]]', '"block":[[1,3],[0,1]]')
    assert broken != text
    cert_file = tmp_path / "bad.cert"
    cert_file.write_text(broken)
    code, out, _ = run(["verify", str(cert_file)], capsys)
    assert code == 1
    assert "MISMATCH" in out


def test_verify_malformed_is_error_not_false(tmp_path, capsys):
    cert_file = tmp_path / "broken.cert"
    cert_file.write_text("{not json")
    code, _, err = run(["verify", str(cert_file)], capsys)
    assert code == 1
    assert "error:" in err


def test_filters_demo_cli(capsys):
    code, out, _ = run(
        ["filters", "demo-counterexample", "--primes", "3,5", "--probe", "7"], capsys
    )
    assert code == 0
    assert "all memberships verified: True" in out


def test_filters_centered_cli(tmp_path, capsys):
    desc = {
        "format_version": 1,
        "kind": "descriptors",
        "items": [
            {"type": "finite", "primes": [2, 3]},
            {"type": "finite", "primes": [3, 5]},
        ],
    }
    desc_file = tmp_path / "desc.json"
    desc_file.write_text(json.dumps(desc))
    code, out, _ = run(["filters", "centered", str(desc_file)], capsys)
    assert code == 0
    assert "common prime 3" in out


def test_unknown_subcommand_usage():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_byte_identical_artifacts(tmp_path, capsys):
    a = tmp_path / "a.cert"
    b = tmp_path / "b.cert"
    assert main(["pipeline", "--k", "1", "--m", "3", "--out", str(a)]) == 0
    assert main(["pipeline", "--k", "1", "--m", "3", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_selftest_cli(capsys):
    code, out, _ = run(["selftest"], capsys)
    assert code == 0
    assert "checks passed" in out
