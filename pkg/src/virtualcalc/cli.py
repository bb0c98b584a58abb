"""Command-line front end: ``vcalc VERB ARGS`` and an interactive loop.

Exit status is 0 on success, 1 when the requested check comes out Fails and
2 on usage or evaluation errors.
"""
from __future__ import annotations

import argparse
import dataclasses
import enum
import json
import math
import shlex
import sys
from fractions import Fraction

from . import calculus
from .classify import Finitude, classification_report, classify, near, standard_part
from .integrate import Measure, element_check, ftc_check, geom_measure, integrate
from .magnitude import compare_magnitude
from . import realfun as R
from .config import Settings, current, settings
from .errors import NoStandardPart, NotDerivable, VirtualCalcError
from .lift import evaluate
from .normal_form import format_virtual, read_virtual
from .props import SUITES, run_props
from .verdict import Verdict

VERBS = ("eval", "classify", "near", "order", "deriv", "taylor", "integrate", "uc", "geom",
         "ftc", "props", "repl")
OK, FAILS, ERROR = 0, 1, 2

_GEOM_KINDS = {
    "area": Measure.AREA,
    "volume": Measure.VOLUME,
    "arc": Measure.ARC_LENGTH,
    "surface": Measure.SURFACE,
}


class UsageError(Exception):
    pass


@dataclasses.dataclass
class Outcome:
    verb: str
    text: str
    payload: dict
    code: int = OK


# -- argument helpers ----------------------------------------------------------
def _real(text: str):
    """A real argument: exact when it parses to a rational constant."""
    node = R.parse_expr(text)
    if isinstance(node, R.Const):
        return node.value
    if isinstance(node, R.Neg) and isinstance(node.arg, R.Const):
        return -node.arg.value
    return R.eval_real(node, 0.0)


def _function(text: str, patch: str | None = None) -> R.Expr:
    f = R.parse_expr(text)
    if patch:
        at, _, value = patch.partition("=")
        if not value:
            raise UsageError("--patch takes AT=VALUE")
        f = R.patch(f, _real(at), _real(value))
    return f


def _std_text(a) -> str:
    try:
        return R.format_scalar(standard_part(a))
    except NoStandardPart as exc:
        return "no standard part" if not exc.unknown else "standard part unknown"


def _jsonable(x):
    if isinstance(x, Fraction):
        return int(x) if x.denominator == 1 else float(x)
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, Verdict):
        return x.label
    if isinstance(x, enum.Enum):
        return x.value
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def _code(v: Verdict) -> int:
    return FAILS if v.fails else OK


# -- verbs -----------------------------------------------------------------------
def cmd_eval(args) -> Outcome:
    a = evaluate(R.parse_expr(args.expr, decimals_exact=False))
    nf, std = format_virtual(a), _std_text(a)
    return Outcome("eval", f"{nf}  (≈ {std})", {"normal_form": nf, "standard_part": std})


_CLASS_TEXT = {
    Finitude.INFINITESIMAL: "infinitesimal",
    Finitude.FINITE: "finite, not infinitesimal",
    Finitude.ABOVE_R: "infinite; > R",
    Finitude.BELOW_R: "infinite; < R",
    Finitude.OSCILLATING: "infinite; not > R; not < R",
    Finitude.UNKNOWN: "unknown at this depth",
}


def cmd_classify(args) -> Outcome:
    a = read_virtual(args.expr)
    c = classify(a)
    text = _CLASS_TEXT[c.tag]
    if c.depth:
        text += f"  [{c.verdict.label}, depth {c.depth}]"
    return Outcome("classify", text, classification_report(a))


def cmd_near(args) -> Outcome:
    a, b = read_virtual(args.a), read_virtual(args.b)
    v = near(a, b)
    diff = format_virtual(a - b)
    return Outcome("near", f"{v.label}  (difference {diff})",
                   {"verdict": v.label, "difference": diff, "depth": v.depth}, _code(v))


def cmd_order(args) -> Outcome:
    e, d = read_virtual(args.e), read_virtual(args.d)
    res = compare_magnitude(e, d)
    return Outcome("order", f"{res.outcome.value}  [{res.verdict.label}]",
                   {"outcome": res.outcome.value, "verdict": res.verdict.label})


def cmd_deriv(args) -> Outcome:
    f, x = _function(args.f, args.patch), _real(args.x)
    try:
        rep = calculus.derivative_at(f, x)
    except NotDerivable as exc:
        per = {k: None if v is None else float(v) for k, v in exc.per_probe.items()}
        return Outcome("deriv", f"not derivable at {R.format_scalar(x)}: {exc}",
                       {"verdict": "Fails", "derivable": False, "per_probe": per}, FAILS)
    payload = rep.to_dict()
    payload["derivable"] = True
    text = f"f'({R.format_scalar(x)}) = {R.format_scalar(rep.value)}  [{rep.verdict.label}]"
    code = _code(rep.verdict)
    if args.differentiable:
        d = calculus.differentiability_report(f, x)
        payload["differentiable"] = d.to_dict()
        text += f"\ndifferentiable: {d.verdict.label}"
        code = max(code, _code(d.verdict))
    return Outcome("deriv", text, payload, code)


def cmd_taylor(args) -> Outcome:
    f, x = _function(args.f), _real(args.x)
    rep = calculus.taylor_expand(f, x, args.n)
    terms = " + ".join(f"{c!r}*h^{k}" for k, c in enumerate(rep.coefficients))
    text = (f"{terms}\nremainder {rep.remainder_text}\n"
            f"remainder is O(del^{args.n + 1}): {rep.remainder.label}")
    return Outcome("taylor", text, rep.to_dict(), _code(rep.remainder))


def cmd_integrate(args) -> Outcome:
    f = _function(args.f, args.patch)
    rep = integrate(f, _real(args.a), _real(args.b))
    value = "undefined" if rep.value is None else repr(rep.value)
    return Outcome("integrate", f"{value}  [{rep.verdict.label}, n = {rep.depth}]",
                   rep.to_dict(), _code(rep.verdict))


def cmd_uc(args) -> Outcome:
    f, A = _function(args.f), R.parse_domain(args.domain)
    rep = calculus.check_uniform_continuity(f, A)
    text = rep.verdict.label
    if rep.witness:
        w = rep.witness
        text += f"  (witness {w['family']}, gap {w['gap']!r} at n = {w['index']})"
    return Outcome("uc", text, rep.to_dict(), _code(rep.verdict))


def cmd_geom(args) -> Outcome:
    kind, f = _GEOM_KINDS[args.kind], _function(args.f)
    a, b = _real(args.a), _real(args.b)
    rep = geom_measure(kind, f, a, b)
    payload = {"measure": kind.value, **rep.to_dict()}
    value = "undefined" if rep.value is None else repr(rep.value)
    text = f"{kind.value} = {value}  [{rep.verdict.label}]"
    code = _code(rep.verdict)
    if kind in (Measure.ARC_LENGTH, Measure.SURFACE):
        x = (float(a) + float(b)) / 2
        for wrong in (False, True):
            el = element_check(kind, f, x, wrong=wrong)
            key = "naive_element" if wrong else "element"
            payload[key] = {"approximation": el.approximation, "verdict": el.verdict.label,
                            "ratio": el.ratio}
            text += f"\n{key} {el.approximation} at x = {x!r}: {el.verdict.label}"
    return Outcome("geom", text, payload, code)


def cmd_ftc(args) -> Outcome:
    f = _function(args.f)
    rep = ftc_check(f, _real(args.a), _real(args.x))
    text = f"{rep.verdict.label}  (|ds - f(x)dx|/dx = {rep.ratio:.3e} at n = {rep.depth})"
    return Outcome("ftc", text, {"verdict": rep.verdict.label, "ratio": rep.ratio,
                                 "depth": rep.depth}, _code(rep.verdict))


def cmd_props(args) -> Outcome:
    rep = run_props(args.suite, instances=args.instances, seed=current().seed)
    return Outcome("props", "\n".join(rep.lines()), rep.to_dict(), OK if rep.ok else FAILS)


HANDLERS = {
    "eval": cmd_eval,
    "classify": cmd_classify,
    "near": cmd_near,
    "order": cmd_order,
    "deriv": cmd_deriv,
    "taylor": cmd_taylor,
    "integrate": cmd_integrate,
    "uc": cmd_uc,
    "geom": cmd_geom,
    "ftc": cmd_ftc,
    "props": cmd_props,
}


# -- parser --------------------------------------------------------------------
class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _options(p: argparse.ArgumentParser, default) -> None:
    p.add_argument("--trunc", type=int, default=default(16), help="truncation order (default 16)")
    p.add_argument("--depth", type=int, default=default(14), help="schedule exponent (default 14)")
    p.add_argument("--tol", type=float, default=default(1e-9), help="tolerance (default 1e-9)")
    p.add_argument("--seed", type=int, default=default(0), help="random tag seed (default 0)")
    p.add_argument("--json", action="store_true", default=default(False), help="emit a JSON report")


def build_parser(base: Settings | None = None) -> argparse.ArgumentParser:
    parser = _Parser(prog="vcalc", description="Calculus with virtual numbers.")
    _options(parser, lambda v: v)
    if base is not None:
        parser.set_defaults(**dataclasses.asdict(base))
    sub = parser.add_subparsers(dest="verb", metavar="VERB", parser_class=_Parser)
    sub.required = True

    def verb(name, help_, *positional):
        p = sub.add_parser(name, help=help_)
        _options(p, lambda v: argparse.SUPPRESS)
        for arg in positional:
            p.add_argument(arg)
        return p

    verb("eval", "normal form of an expression", "expr")
    verb("classify", "finitude class", "expr")
    verb("near", "whether two values are infinitely close", "a", "b")
    verb("order", "compare magnitudes", "e", "d")
    p = verb("deriv", "derivative at a point", "f", "x")
    p.add_argument("--patch", metavar="AT=VALUE", help="redefine f at one point")
    p.add_argument("--differentiable", action="store_true", help="also test differentiability")
    p = verb("taylor", "Taylor coefficients and remainder order", "f", "x")
    p.add_argument("n", type=int)
    p = verb("integrate", "Riemann integral", "f", "a", "b")
    p.add_argument("--patch", metavar="AT=VALUE", help="redefine f at one point")
    verb("uc", "uniform continuity on a domain such as '[0,1]' or R", "f", "domain")
    verb("geom", "area, volume, arc length or surface of revolution", "kind", "f", "a", "b")
    verb("ftc", "increment of the integral function", "f", "a", "x")
    p = verb("props", "run proposition suites")
    p.add_argument("suite", nargs="?", default="all", help=f"one of {', '.join(SUITES)} or all")
    p.add_argument("--instances", type=int, default=200)
    verb("repl", "interactive session")
    return parser


def _settings_of(args) -> Settings:
    return Settings(trunc=args.trunc, depth=args.depth, tol=args.tol, seed=args.seed)


def _emit(out, ns_json: bool, status: str, verb: str, payload, text: str, meta: Settings) -> None:
    if ns_json:
        report = {"status": status, "verb": verb, "payload": _jsonable(payload),
                  "meta": dataclasses.asdict(meta)}
        out.write(json.dumps(report, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        out.write(text + "\n")


def run_command(argv: list[str], out=None, err=None, base: Settings | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    base = base or Settings()
    parser = build_parser(base)
    want_json = "--json" in argv
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _emit(err if not want_json else out, want_json, "error", "usage",
              {"error": str(exc)}, str(exc), base)
        return ERROR
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    meta = _settings_of(args)
    if args.verb == "repl":
        return repl(sys.stdin, out, meta)
    if args.verb == "geom" and args.kind not in _GEOM_KINDS:
        msg = f"unknown measure {args.kind!r}; choose from {', '.join(_GEOM_KINDS)}"
        _emit(err if not args.json else out, args.json, "error", "geom", {"error": msg}, msg, meta)
        return ERROR
    try:
        with settings(**dataclasses.asdict(meta)):
            res = HANDLERS[args.verb](args)
    except (VirtualCalcError, UsageError, ValueError, ZeroDivisionError, OverflowError) as exc:
        msg = f"error: {type(exc).__name__}: {exc}"
        _emit(err if not args.json else out, args.json, "error", args.verb,
              {"error": str(exc), "kind": type(exc).__name__}, msg, meta)
        return ERROR
    _emit(out, args.json, "ok", res.verb, res.payload, res.text, meta)
    return res.code


# -- repl ------------------------------------------------------------------------
_SETTABLE = {"trunc": int, "depth": int, "tol": float, "seed": int}


def repl(stream, out, session: Settings | None = None) -> int:
    """Evaluate one expression or verb per line; ``:set NAME VALUE`` changes settings."""
    session = session or Settings()
    interactive = getattr(stream, "isatty", lambda: False)()
    while True:
        if interactive:
            out.write("vc> ")
            out.flush()
        line = stream.readline()
        if not line:
            return OK
        line = line.strip()
        if not line:
            continue
        if line in (":q", ":quit", ":exit"):
            return OK
        if line.startswith(":"):
            session = _meta_command(line, session, out)
            continue
        words = line.split(None, 1)
        try:
            if words[0] in HANDLERS:
                run_command(shlex.split(line), out, out, session)
                continue
            with settings(**dataclasses.asdict(session)):
                a = evaluate(R.parse_expr(line, decimals_exact=False))
                out.write(f"{format_virtual(a)}  (≈ {_std_text(a)})\n")
        except (VirtualCalcError, ValueError, ZeroDivisionError, OverflowError) as exc:
            out.write(f"error: {type(exc).__name__}: {exc}\n")


def _meta_command(line: str, session: Settings, out) -> Settings:
    parts = line[1:].split()
    if parts and parts[0] == "show":
        out.write(" ".join(f"{k}={v}" for k, v in dataclasses.asdict(session).items()) + "\n")
        return session
    if len(parts) == 3 and parts[0] == "set" and parts[1] in _SETTABLE:
        try:
            value = _SETTABLE[parts[1]](parts[2])
        except ValueError:
            out.write(f"error: bad value {parts[2]!r} for {parts[1]}\n")
            return session
        return dataclasses.replace(session, **{parts[1]: value})
    out.write("commands: :set trunc|depth|tol|seed VALUE, :show, :quit\n")
    return session


def main(argv: list[str] | None = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
