import json
from fractions import Fraction

import pytest

from xxxfermion import cli
from xxxfermion.matsubara import MatsubaraData
from xxxfermion.omega import OmegaMatrix, omega_md


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_gen_md_writes_manifest(tmp_path, capsys):
    out = tmp_path / "md.txt"
    code, stdout, _ = run(capsys, "gen-md", "--L", 4, "--m", 1, "--seed", 3, "--out", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "# manifest: md.txt.manifest.json"
    md = MatsubaraData.from_text(lines[1])
    assert md.bethe_residuals() == [0]
    man = cli.RunManifest.from_json((tmp_path / "md.txt.manifest.json").read_text())
    assert man.command == "gen-md" and man.seed == 3
    assert man.outputs[str(out)] == cli.sha256(out)
    assert cli.RunManifest.from_json(man.to_json()) == man


def test_omega_zero_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a" / "omega.txt", tmp_path / "b" / "omega.txt"
    for path in (a, b):
        code, _, _ = run(capsys, "omega", "--mode", "zero", "--order", 10, "--prec", 40, "--out", path)
        assert code == 0
    assert a.read_bytes() == b.read_bytes()


def test_expect_exact_on_matsubara_data(tmp_path, capsys):
    md_file = tmp_path / "md.txt"
    run(capsys, "gen-md", "--L", 3, "--m", 1, "--seed", 5, "--out", md_file)
    om = tmp_path / "omega.txt"
    assert run(capsys, "omega", "--mode", "md", "--md", md_file, "--order", 4, "--out", om)[0] == 0
    op = tmp_path / "op.txt"
    op.write_text("zz 1\npm 2\nmp 2\niii 1\n")
    code, stdout, _ = run(capsys, "expect", "--n", 2, "--operator", op, "--omega", om,
                          "--tables", tmp_path / "tables", "--out", tmp_path / "e.txt")
    assert code == 0
    md = MatsubaraData.from_text(md_file.read_text().splitlines()[1])
    assert Fraction(stdout.strip()) == 1 - 2 * omega_md(md, 2)[0][0]


def test_entropy_two_sites(tmp_path, capsys):
    om = tmp_path / "omega.txt"
    run(capsys, "omega", "--mode", "zero", "--prec", 40, "--out", om)
    code, stdout, _ = run(capsys, "entropy", "--n", 2, "--omega", om, "--prec", 40,
                          "--tables", tmp_path / "tables", "--out", tmp_path / "s.csv")
    assert code == 0
    assert stdout.startswith("0.953671626569789457385573")
    assert (tmp_path / "s.csv").read_text().splitlines()[1] == "quantity,value"


def test_density_csv(tmp_path, capsys):
    om = tmp_path / "omega.txt"
    run(capsys, "omega", "--mode", "zero", "--prec", 30, "--out", om)
    code, _, _ = run(capsys, "density", "--n", 3, "--omega", om, "--prec", 30,
                     "--tables", tmp_path / "tables", "--out", tmp_path / "d.csv")
    assert code == 0
    rows = (tmp_path / "d.csv").read_text().splitlines()
    assert rows[1] == "j,multiplicity,index,eigenvalue"
    assert rows[2].startswith("1/2,2,0,0.45077133868")


def test_error_exit_code(tmp_path, capsys):
    code, _, err = run(capsys, "omega", "--mode", "md", "--out", tmp_path / "x.txt")
    assert code == 2
    rec = json.loads(err.strip().splitlines()[-1])
    assert rec["status"] == "error" and rec["command"] == "omega"


def test_verify_properties(capsys):
    code, stdout, _ = run(capsys, "verify", "--suite", "properties")
    assert code == 0
    assert "FAIL" not in stdout


def test_verify_failure_exit_code(monkeypatch, capsys):
    monkeypatch.setattr(cli, "_verify_properties", lambda args: [("forced", 1, 0)])
    code, stdout, err = run(capsys, "verify", "--suite", "properties")
    assert code == 1
    assert "FAIL" in stdout and json.loads(err)["status"] == "verification-failed"


def test_solve_x_writes_tables(tmp_path, capsys):
    code, stdout, _ = run(capsys, "solve-x", "--n", 3, "--out", tmp_path)
    assert code == 0
    rep = json.loads(stdout)
    assert rep["rank"] == rep["dimV"] == 4
    for name in ("X3.txt", "V3.txt", "D3.txt", "report3.json"):
        assert (tmp_path / name).exists()


def test_manifest_belongs_to_out_when_tables_are_solved(tmp_path, capsys):
    omega = tmp_path / "omega.txt"
    run(capsys, "omega", "--mode", "zero", "--prec", 30, "--out", omega)
    out, tables = tmp_path / "s3.txt", tmp_path / "tables"
    code, _, _ = run(capsys, "entropy", "--n", 3, "--omega", omega, "--tables", tables, "--out", out)
    assert code == 0
    man = cli.RunManifest.from_json((tmp_path / "s3.txt.manifest.json").read_text())
    assert str(out) in man.outputs and str(tables / "X2.txt") in man.outputs
    assert (tables / "X2.txt").read_text().startswith("# manifest: s3.txt.manifest.json")
