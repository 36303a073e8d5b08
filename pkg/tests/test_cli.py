import pytest
from click.testing import CliRunner

from quiverkit.cli import main
from quiverkit.kronecker import preprojective, std_kronecker
from quiverkit.linalg import Field
from quiverkit.quiver import direct_sum
from quiverkit.repfile import parse_certificate, read_rep, write_rep

F5 = Field(5)


@pytest.fixture
def files(tmp_path):
    p1 = tmp_path / "p1.rep"
    p2 = tmp_path / "p2.rep"
    q2 = tmp_path / "q2.rep"
    write_rep(preprojective(3, 1, F5), p1)
    write_rep(preprojective(3, 2, F5), p2)
    write_rep(direct_sum([std_kronecker("P", 1, field=F5), std_kronecker("R", 2, 3, F5)]), q2)
    return tmp_path, str(p1), str(p2), str(q2)


def run(*args):
    return CliRunner().invoke(main, ["--field", "Fp:5", "--seed", "1", *args])


def test_hom_and_ext(files):
    _, p1, p2, _ = files
    r = run("hom", p1, p2)
    assert r.exit_code == 0, r.output
    assert "RESULT PASS" in r.output and "3" in r.output
    r = run("ext", p2, p1)
    assert r.exit_code == 0 and "RESULT PASS" in r.output


def test_field_mismatch_is_a_usage_error(files):
    _, p1, _, _ = files
    r = CliRunner().invoke(main, ["--field", "Q", "hom", p1, p1])
    assert r.exit_code == 2


def test_decompose_and_classify(files):
    _, _, _, q2 = files
    r = run("decompose", q2)
    assert r.exit_code == 0, r.output
    r = run("classify-q2", q2)
    assert r.exit_code == 0 and "(1,2)" in r.output


def test_reflect_and_coxeter_write(files):
    tmp, p1, _, _ = files
    out = tmp / "r.rep"
    r = run("reflect", p1, "--vertex", "y", "--write", str(out))
    assert r.exit_code == 0, r.output
    assert read_rep(out).dimvec == (1, 0)
    out2 = tmp / "c.rep"
    r = run("coxeter", p1, "--power", "1", "--write", str(out2))
    assert r.exit_code == 0 and read_rep(out2).dimvec == (8, 21)


def test_schofield_and_tree_certificate(files):
    tmp, _, p2, _ = files
    assert run("schofield", p2).exit_code == 0
    cert = tmp / "p2.cert"
    r = run("tree-cert", p2, "--write", str(cert))
    assert r.exit_code == 0, r.output
    m, basis = parse_certificate(cert.read_text())
    assert m.dimvec == (3, 8) and set(basis) == {"x", "y"}


def test_lift_then_pushdown(tmp_path):
    out = tmp_path / "lift.rep"
    r = run("lift", "--n", "3", "--index", "2", "--write", str(out))
    assert r.exit_code == 0, r.output
    r = run("pushdown", str(out), "--n", "3")
    assert r.exit_code == 0, r.output


def test_verify_tables_reports_each_row():
    r = CliRunner().invoke(main, ["verify-tables"])
    assert r.output.count("end-dim[") == 18
    assert r.exit_code in (0, 1)
    assert ("RESULT PASS" in r.output) == (r.exit_code == 0)


def test_strata_check_single_family():
    r = CliRunner().invoke(main, ["--seed", "3", "strata-check", "--family", "B11/U3", "--points", "20",
                                  "--no-trees"])
    assert r.exit_code == 0, r.output


def test_curve_and_access(files, tmp_path):
    r = CliRunner().invoke(main, ["--field", "Fp:7", "curve", "B11_to_B9", "--eps", "0,1"])
    assert r.exit_code == 0, r.output
    p = tmp_path / "p1f2.rep"
    write_rep(preprojective(3, 1, Field(2)), p)
    r = CliRunner().invoke(main, ["--field", "Fp:2", "access", str(p)])
    assert r.exit_code == 0, r.output


def test_out_option_writes_report(files, tmp_path):
    _, p1, _, _ = files
    out = tmp_path / "report.txt"
    r = CliRunner().invoke(main, ["--field", "Fp:5", "--out", str(out), "hom", p1, p1])
    assert r.exit_code == 0 and "RESULT PASS" in out.read_text()
