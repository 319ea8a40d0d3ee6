import pytest

from gamma_affine.affine import TwistedAffine
from gamma_affine.algebras import heisenberg, heisenberg1
from gamma_affine.cli import main
from gamma_affine.config import ConfigError, parse_config, parse_terms
from gamma_affine.examples import list_examples, load_example
from gamma_affine.scalars import ONE, Scalar, qvar
from gamma_affine.suites import dims_oracle, run_suite

TABLE_SL2 = """
[meta]
name = table_sl2
[group]
torsion = 2
[character]
conductor = 2
images = -1
[algebra]
labels = e f h
bracket e f = h
bracket h e = 2 : e
bracket h f = -2 : f
form e f = 1
form h h = 2
action 1 e = -1 : f
action 1 f = -1 : e
action 1 h = -1 : h
[suites]
run = lie-axioms affine
"""


def test_table_config_runs():
    cfg = parse_config(TABLE_SL2)
    assert cfg.presentation.bracket({"e": ONE}, {"f": ONE}) == {"h": ONE}
    rep = run_suite(cfg, window=2)
    assert rep.passed, rep.render(False)


def test_missing_group_section():
    with pytest.raises(ConfigError, match="missing group section"):
        parse_config("[meta]\nname = x\n")


def test_bad_torsion_image_has_line_number():
    text = "[group]\ntorsion = 2\n[character]\nconductor = 3\nimages = z\n[algebra]\nbuilder = heisenberg1\n"
    with pytest.raises(ConfigError) as e:
        parse_config(text)
    assert e.value.errors[0][0] == 5
    assert "order 2" in e.value.errors[0][1]


@pytest.mark.parametrize("text,msg", [
    ("[group]\nfree = x\n", "integer"),
    ("[nope]\n", "unknown section"),
    ("free = 1\n", "outside of a section"),
    ("[group]\nfree = 1\n[character]\nimages = q1\nparams = 1\n[suites]\nrun = bogus\n[algebra]\nbuilder = gl_torus\n",
     "unknown suite"),
])
def test_config_errors(text, msg):
    with pytest.raises(ConfigError, match=msg):
        parse_config(text)


def test_parse_terms():
    cfg = parse_config("[group]\nfree = 1\n[character]\nparams = 1\nimages = q1\n[algebra]\nbuilder = gl_torus\n")
    got = parse_terms(cfg, "q1/2 : k ; T^2 L ; 2 : T L ; T L")
    assert got == {(0, "k"): qvar(1, 1) / Scalar.const(2), (2, "L"): ONE, (1, "L"): Scalar.const(3)}
    assert parse_terms(cfg, "0") == {}


def test_dims_oracle():
    assert dims_oracle(TwistedAffine(heisenberg()), 6) == [1, 1, 2, 3, 5, 7, 11]
    assert dims_oracle(TwistedAffine(heisenberg1()), 6) == [1, 1, 1, 2, 2, 3, 4]


def test_bundled_examples_listed():
    names = {e.name for e in list_examples()}
    assert {"sl2_chevalley", "heisenberg", "virasoro", "corrupted_sl2"} <= names
    assert load_example("virasoro").conformal_presentation is not None


def test_cli_check_pass(capsys):
    assert main(["check", "heisenberg1", "--no-timing", "--suite", "lie-axioms"]) == 0
    out = capsys.readouterr().out
    assert "summary pass=" in out and "fail=0" in out
    assert "time=" not in out


def test_cli_check_negative_control(capsys):
    assert main(["check", "corrupted_sl2", "--no-timing"]) == 1
    assert "status=fail" in capsys.readouterr().out


def test_cli_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.cfg"
    bad.write_text("[meta]\nname = x\n")
    assert main(["check", str(bad)]) == 2
    assert "missing group section" in capsys.readouterr().err


def test_cli_verify_and_build(capsys):
    assert main(["verify", "jacobi", "sl2_chevalley", "--window", "2", "--no-timing"]) == 0
    assert main(["build", "module", "heisenberg"]) == 0
    out = capsys.readouterr().out
    assert "build=module" in out


def test_cli_report_file(tmp_path):
    out = tmp_path / "r.txt"
    assert main(["check", "virasoro", "--report", str(out), "--no-timing"]) == 0
    assert "summary pass=" in out.read_text()


@pytest.mark.parametrize("name", [e.name for e in list_examples()])
def test_example_matches_expectation(name):
    cfg = load_example(name)
    rep = run_suite(cfg)
    assert rep.passed == (cfg.expect == "pass"), rep.render(False)
