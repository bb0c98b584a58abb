import io
import json
import subprocess
import sys

import jsonschema
import pytest

from virtualcalc.cli import main, repl, run_command
from virtualcalc.config import Settings

REPORT_SCHEMA = {
    "type": "object",
    "required": ["status", "verb", "payload", "meta"],
    "additionalProperties": False,
    "properties": {
        "status": {"enum": ["ok", "error"]},
        "verb": {"type": "string"},
        "payload": {"type": "object"},
        "meta": {
            "type": "object",
            "required": ["trunc", "depth", "tol", "seed"],
            "additionalProperties": False,
            "properties": {
                "trunc": {"type": "integer"},
                "depth": {"type": "integer"},
                "tol": {"type": "number"},
                "seed": {"type": "integer"},
            },
        },
    },
}


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, _ = run("--json", *argv)
    assert out.endswith("\n") and out.count("\n") == 1
    report = json.loads(out)
    jsonschema.validate(report, REPORT_SCHEMA)
    assert out.strip() == json.dumps(report, sort_keys=True, ensure_ascii=False)
    return code, report


class TestExamples:
    def test_eval_worked_quotient(self):
        assert run("eval", "((5+del)^2 - 25)/del") == (0, "10 + del  (≈ 10)\n", "")

    def test_classify_oscillating(self):
        code, out, _ = run("classify", "(+-)inf")
        assert code == 0 and out == "infinite; not > R; not < R\n"

    def test_integrate(self):
        code, rep = run_json("integrate", "x^2", "0", "1")
        assert code == 0
        assert abs(rep["payload"]["value"] - 1 / 3) <= 1e-6
        assert rep["payload"]["verdict"] == "HoldsToDepth"

    def test_near(self):
        assert run("near", "inf", "sqrt(inf^2+1)")[0] == 0
        assert run("near", "inf", "inf^2")[0] == 1

    def test_deriv(self):
        code, out, _ = run("deriv", "sin(x)", "0")
        assert code == 0 and out == "f'(0) = 1  [Holds]\n"
        assert run("deriv", "abs(x)", "0")[0] == 1

    def test_deriv_patch_and_differentiability(self):
        code, rep = run_json("deriv", "x^2*sin(1/x)", "0", "--patch", "0=0", "--differentiable")
        assert code == 1
        assert abs(float(rep["payload"]["value"])) < 1e-6

    def test_taylor(self):
        code, out, _ = run("taylor", "exp(x)", "0", "2", "--trunc", "6")
        assert code == 0 and "O(del^3)" in out

    def test_uc(self):
        assert run("uc", "cos(x)", "R")[0] == 0
        assert run("uc", "x^2", "R")[0] == 1

    def test_geom_and_ftc(self):
        code, rep = run_json("geom", "arc", "x", "0", "1")
        assert code == 0 and abs(rep["payload"]["value"] - 2**0.5) < 1e-9
        assert run("ftc", "exp(x)", "0", "0.5")[0] == 0

    def test_props(self):
        code, out, _ = run("props", "geometry")
        assert code == 0 and "fails as expected" in out


class TestErrors:
    def test_unknown_verb(self):
        code, out, err = run("frobnicate", "1")
        assert code == 2 and out == "" and "invalid choice" in err

    def test_missing_argument(self):
        assert run("near", "1")[0] == 2

    @pytest.mark.parametrize(
        "argv",
        [
            ("eval", "1/0"),
            ("eval", "sin("),
            ("eval", "step(del)"),
            ("integrate", "ln(x)", "-1", "1"),
            ("geom", "torus", "x", "0", "1"),
            ("props", "nonesuch"),
            ("deriv", "sqrt(x)", "0"),
        ],
    )
    def test_errors_are_reported_not_raised(self, argv):
        code, rep = run_json(*argv)
        assert code == 2 and rep["status"] == "error"
        assert rep["payload"]["error"]

    def test_usage_error_in_json(self):
        code, rep = run_json("near", "1")
        assert code == 2 and rep["verb"] == "usage"


VERB_LINES = [
    ("eval", "inf - sqrt(inf^2+1)"),
    ("classify", "sin(inf)"),
    ("near", "1 + del", "1"),
    ("order", "del^2", "del"),
    ("deriv", "1/x", "2"),
    ("taylor", "sin(x)", "0", "3"),
    ("integrate", "x", "1", "0"),
    ("uc", "sqrt(x)", "[0,1]"),
    ("geom", "volume", "x", "0", "1"),
    ("ftc", "cos(x)", "0", "1"),
    ("props", "magnitude", "--instances", "20"),
]


@pytest.mark.parametrize("argv", VERB_LINES, ids=[v[0] for v in VERB_LINES])
def test_json_schema_and_determinism(argv):
    first = run("--json", *argv)
    jsonschema.validate(json.loads(first[1]), REPORT_SCHEMA)
    assert run("--json", *argv) == first
    assert run(*argv) == run(*argv)


def test_options_reach_meta():
    _, rep = run_json("eval", "del", "--trunc", "5", "--seed", "3")
    assert rep["meta"] == {"trunc": 5, "depth": 14, "tol": 1e-9, "seed": 3}
    _, rep = run_json("--depth", "16", "eval", "del")
    assert rep["meta"]["depth"] == 16


def test_unicode_is_not_escaped():
    code, out, _ = run("--json", "eval", "10 + del")
    assert code == 0 and "\\u" not in out


class TestRepl:
    def session(self, text):
        out = io.StringIO()
        assert repl(io.StringIO(text), out) == 0
        return out.getvalue().splitlines()

    def test_expression(self):
        assert self.session("inf - sqrt(inf^2+1)\n")[0].endswith("(≈ 0)")

    def test_set_trunc(self):
        lines = self.session(":set trunc 4\nsin(del)\neval sin(del)\n")
        assert lines == ["del - del^3/6 + O(del^5)  (≈ 0)"] * 2

    def test_blank_lines_and_errors_do_not_stop(self):
        lines = self.session("\n\nsin(\n1 + del\n")
        assert lines[0].startswith("error:") and lines[1] == "1 + del  (≈ 1)"

    def test_meta_commands(self):
        lines = self.session(":set depth 16\n:show\n:set trunc x\n:nope\n:quit\ndel\n")
        assert lines[0] == "trunc=16 depth=16 tol=1e-09 seed=0"
        assert lines[1].startswith("error: bad value")
        assert lines[2].startswith("commands:")
        assert len(lines) == 3

    def test_session_settings_passed_in(self):
        out = io.StringIO()
        repl(io.StringIO("sin(del)\n"), out, Settings(trunc=2))
        assert out.getvalue() == "del + O(del^3)  (≈ 0)\n"


def test_main_returns_exit_code(capsys):
    assert main(["eval", "del"]) == 0
    assert capsys.readouterr().out == "del  (≈ 0)\n"


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "virtualcalc", "classify", "(+-)inf"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0 and proc.stdout == "infinite; not > R; not < R\n"
