import json
import subprocess
import sys

import pytest

from stabpar import cli, plants
from stabpar.fracring import Fraction
from stabpar.parse import ParseError, parse_expr, parse_matrix, parse_problem
from stabpar.polyring import PolyRing


def test_expressions():
    R = PolyRing("z1 z2")
    z1, z2 = R.gens()
    e = parse_expr("z1^2*z2 - 3/2*z1 + 1", R)
    assert e.constant_term() == 1 and e.total_degree() == 3
    assert parse_expr("1/(1 - z1)", R) == Fraction(R.one(), 1 - z1)
    assert parse_matrix("[z1, 0; 1, z2]", R).shape == (2, 2)


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("ring z\nplant [ z^ ]", 2, 12),
        ("ring z\nplant [ 1/(1-2*w) ]", 2, 16),
        ("ring z\nplant [ 1, 2; 3 ]", 2, 7),
        ("plant [z]", 1, 1),
    ],
)
def test_parse_errors_locate(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_problem(text)
    assert e.value.line == line and e.value.col == col


def test_problem_files():
    pf = parse_problem("ring z\nplant [ 1/(1-2*z) ]")
    assert pf.plant.shape == (1, 1) and not pf.declared
    pf = parse_problem("[z1/z2]", ring="z1 z2")
    assert pf.ring.variables == ("z1", "z2")
    with pytest.raises(ParseError):
        parse_problem("ring z\nplant [z]\nfraction N [z] D [1, 0]")


def run(*argv, stdin=None):
    p = subprocess.run(
        [sys.executable, "-m", "stabpar", *argv], input=stdin, capture_output=True, text=True, check=False
    )
    return p.returncode, p.stdout


def test_check_exit_codes():
    code, out = run("check", "--plant", plants.path("scalar_unstable_pole"))
    assert code == 0 and json.loads(out)["stabilizable"] is True
    code, out = run("check", "--plant", plants.path("bivariate_unstabilizable"))
    assert code == 1 and json.loads(out)["stabilizable"] is False


def test_verify_and_extract(tmp_path):
    c = tmp_path / "c.txt"
    c.write_text("[2*z]")
    code, out = run("verify", "--plant", plants.path("scalar_unstable_pole"), "--c", str(c))
    assert code == 0 and json.loads(out)["stabilizing"] is True
    c.write_text("[0]")
    code, _ = run("verify", "--plant", plants.path("scalar_unstable_pole"), "--c", str(c))
    assert code == 1
    q = tmp_path / "q.txt"
    q.write_text("[0, 0; 0, 1]")
    code, out = run("extract", "--plant", plants.path("scalar_unstable_pole"), "--q", str(q))
    rep = json.loads(out)
    assert code == 0 and rep["controller"] == [["(-4*z^2 + 4*z) / (-2*z + 1)"]]
    assert all(ch["passed"] for ch in rep["checks"])


def test_report_schema_and_json_flag(tmp_path):
    out_path = tmp_path / "r.json"
    code, out = run("synthesize", "--plant", plants.path("scalar_two_piece"), "--json", str(out_path))
    rep = json.loads(out)
    assert code == 0 and out_path.read_text() == out
    for key in ("command", "input_echo", "verdict", "certificate", "controller", "closed_loop", "checks"):
        assert key in rep
    assert rep["input_echo"]["fraction"]["construction"] == "diagonal column denominators"


def test_gef_command():
    code, out = run("gef", "--plant", plants.path("scalar_two_piece"))
    rep = json.loads(out)
    assert code == 0 and len(rep["gef"]) == 2
    assert all(ch["passed"] for ch in rep["checks"])


def test_input_errors(tmp_path):
    bad = tmp_path / "bad.plant"
    bad.write_text("ring z\nplant [ z^ ]\n")
    code, out = run("check", "--plant", str(bad))
    assert code == 2 and "line 2" in json.loads(out)["error"]
    code, _ = run("check", "--plant", str(tmp_path / "missing"))
    assert code == 2
    code, _ = run("check", "--plant", "-", "--ring", "z1 z2", stdin="[z1/z2]")
    assert code == 1


def test_parameterize_in_process():
    args = cli.build_parser().parse_args(["parameterize", "--plant", plants.path("scalar_unstable_pole"), "--count", "3"])
    rep, code = cli.run(args)
    assert code == 0 and len(rep["samples"]) == 3
