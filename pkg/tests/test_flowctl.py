import io
import subprocess
import sys
from pathlib import Path

import pytest

from conftest import CYLINDER_FOL, PLANE_FOL
from wanderflow.flowctl import cli
from wanderflow.flowctl.formats import (
    ParseError, fixture_names, fixture_text, format_fol, format_lin, load_fixture, parse_fol, parse_lin,
)

FIX = Path(__file__).resolve().parents[1] / "src" / "wanderflow" / "flowctl" / "fixtures"


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out=out)
    return code, out.getvalue()


@pytest.mark.parametrize("name", PLANE_FOL + CYLINDER_FOL)
def test_fol_round_trip(name):
    m = load_fixture(name)
    text = format_fol(m)
    assert parse_fol(text) == m
    assert format_fol(parse_fol(text)) == text


@pytest.mark.parametrize("name", [n for n in fixture_names() if n.endswith(".lin")])
def test_lin_round_trip(name):
    lin = load_fixture(name)
    assert parse_lin(format_lin(lin)) == lin


def test_unicode_minus_accepted():
    text = fixture_text("twoseps.fol").replace("sign +", "sign −")
    assert parse_fol(text).insep_edges[0].sign == -1


@pytest.mark.parametrize("text,line,fragment", [
    ("surface plane\nsep a\nsep a\n", 3, "duplicate id a"),
    ("surface plane\nfrob x\n", 2, "unknown directive"),
    ("surface plane\nsep a\nband b lo a:X:src hi free\n", 3, "side must be L or R"),
    ("surface torus\n", 1, "surface"),
    ("sep a\n", 1, "missing 'surface'"),
    ("surface plane\nsep a\norbit o in b at one\n", 3, "rational"),
])
def test_fol_errors_name_the_line(text, line, fragment):
    with pytest.raises(ParseError) as err:
        parse_fol(text, "m.fol")
    assert err.value.line == line
    assert fragment in str(err.value)
    assert str(err.value).startswith(f"m.fol:{line}:")


@pytest.mark.parametrize("text", [
    "topology interval\nfixed 1/2 1/3\n", "topology line\n", "topology interval\nrec accum(\n",
    "fixed 0\n",
])
def test_lin_errors(text):
    with pytest.raises(ParseError):
        parse_lin(text)


# --- CLI ---------------------------------------------------------------------------

def test_cli_examples():
    assert run("model", "rank", "fixtures/fourseps.fol") == (0, "rank 2\n")
    code, out = run("model", "equiv", "fixtures/twoseps.fol", "fixtures/fourseps.fol")
    assert (code, out) == (1, "inequivalent\n")
    code, out = run("num", "link", "--field", "saddle", "--p", "0,-1", "--q", "0,1", "--eps", "0.05", "--T", "5")
    assert code == 0 and out.startswith("witness start=")


@pytest.mark.parametrize("argv,code", [
    (["model", "validate", str(FIX / "waz_trunc.fol")], 0),
    (["model", "lyapunov", str(FIX / "fourseps.fol")], 0),
    (["model", "lyapunov", str(FIX / "cylinder_f2.fol")], 1),
    (["model", "chordal", str(FIX / "fourseps.fol"), "--check-axioms"], 0),
    (["model", "equiv", str(FIX / "twoseps.fol"), str(FIX / "twoseps_mirror.fol")], 0),
    (["model", "sigma", str(FIX / "twoseps.fol"), "--orbit", "g"], 0),
    (["model", "sigma", str(FIX / "twoseps.fol"), "--orbit", "nope"], 2),
    (["model", "rank", "missing.fol"], 2),
    (["model", "frobnicate"], 2),
    (["line", "lambda", str(FIX / "xn_interval.lin"), "--x", "0", "--k", "2"], 0),
    (["line", "lambda", str(FIX / "xn_interval.lin"), "--x", "zero"], 2),
    (["line", "rank", str(FIX / "circle3.lin")], 2),
    (["num", "link", "--field", "saddle", "--p", "0,0", "--q", "0,0", "--eps", "0.01", "--T", "10",
      "--budget", "40"], 1),
    (["num", "integrate", "--field", "nope", "--p0", "0,0", "--t", "1"], 2),
    (["num", "no-return", "--field", "sine", "--p", "0,0"], 0),
])
def test_exit_codes(argv, code):
    assert run(*argv)[0] == code


def test_parse_error_exit(tmp_path, capsys):
    bad = tmp_path / "bad.fol"
    bad.write_text("surface plane\nsep a\nband x lo q hi free\n")
    assert run("model", "rank", str(bad))[0] == 2
    assert f"{bad}:3:" in capsys.readouterr().err


def test_lambda_tables():
    _, out = run("model", "lambda", str(FIX / "fourseps.fol"), "--order", "2")
    assert "lambda2(s1) = {s2, s3, s4}" in out
    _, out = run("model", "lambda", str(FIX / "twoseps.fol"), "--orbit", "s-")
    assert out == "lambda1(s-) = {s+}\n"


def test_reverse_writes_a_valid_model(tmp_path):
    target = tmp_path / "rev.fol"
    assert run("model", "reverse", str(FIX / "fourseps.fol"), "--out", str(target))[0] == 0
    assert run("model", "rank", str(target)) == (0, "rank 2\n")


def test_line_rank_marks_extrapolation(tmp_path):
    assert run("line", "rank", str(FIX / "g_omega_squared.lin")) == (0, "rank w^2\n")
    f = tmp_path / "x.lin"
    f.write_text("topology interval\nfixed 0 1\nrec concat(leaf, accum(leaf))\n")
    assert run("line", "rank", str(f)) == (0, "rank 2 (derived rule)\n")


def test_csv_output_and_determinism():
    argv = ["--format", "csv", "num", "integrate", "--field", "sine", "--p0", "0.3,0.2", "--t", "2",
            "--emit", "samples"]
    a, b = run(*argv), run(*argv)
    assert a == b and a[0] == 0
    lines = a[1].split("\n")
    assert lines[0] == "t,x,y" and "\r" not in a[1] and len(lines) == 13
    check = ["--format", "csv", "num", "check-h", "--field", "sine", "--n", "5", "--seed", "4"]
    assert run(*check) == run(*check)
    assert run(*check) != run("--format", "csv", "num", "check-h", "--field", "sine", "--n", "5", "--seed", "5")


def test_global_flags_after_subcommand():
    assert run("model", "rank", str(FIX / "fourseps.fol"), "--format", "csv") == (0, "rank\n2\n")


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "wanderflow", "model", "rank", str(FIX / "twoseps.fol")],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "rank 1\n"
