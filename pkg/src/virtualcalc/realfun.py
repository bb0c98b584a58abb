"""Expression trees for unary real functions.

Grammar (whitespace-insensitive)::

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('-'|'+') unary | factor
    factor := base ('^' ['-'] integer)?
    base   := number | 'x' | 'pi' | 'e' | 'inf' | 'del'
            | '(+-)' factor | '(-+)' factor
            | func '(' expr ')' | 'O' '(' expr ')' | '(' expr ')'
    func   := sin | cos | exp | ln | sqrt | abs

Unary minus and the ``O(...)`` remainder term extend the CLI grammar so that
printed normal forms read back.  ``**`` is accepted for ``^`` and the
symbols ``∞ ∂ π ± ∓`` for their ASCII names.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .errors import (
    DomainError,
    ExprSyntaxError,
    NonSmoothNode,
    ParseError,
    UnsupportedSet,
    UnknownIdentifier,
    UnsupportedExpression,
)
from .series import Scalar, scalar

FUNCTIONS = ("sin", "cos", "exp", "ln", "sqrt", "abs")
NAMED = ("pi", "e", "inf", "del")
_PIECEWISE = {"step", "sign", "sgn", "heaviside", "floor", "ceil", "max", "min", "if"}


# -- nodes ---------------------------------------------------------------
@dataclass(frozen=True)
class Const:
    value: Scalar

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Var:
    def __str__(self):
        return "x"


@dataclass(frozen=True)
class Named:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Neg:
    arg: "Expr"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Call:
    fn: str
    arg: "Expr"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Parity:
    sign: str  # "+-" or "-+"
    arg: "Expr"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Compose:
    outer: "Expr"
    inner: "Expr"

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Patch:
    """``body`` everywhere except at ``x == at``, where the value is ``value``.

    Used for removable singularities such as ``x^2 sin(1/x)`` with ``f(0) = 0``.
    """

    body: "Expr"
    at: Scalar
    value: Scalar

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class BigO:
    arg: "Expr"

    def __str__(self):
        return to_text(self)


Expr = Union[Const, Var, Named, Neg, BinOp, Pow, Call, Parity, Compose, Patch, BigO]
RealFunction = Expr

X = Var()


# -- tokenizer / parser ----------------------------------------------------
_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<pm>\(\+-\)|±)|(?P<mp>\(-\+\)|∓)"
    r"|(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<id>[A-Za-z_][A-Za-z_0-9]*|∞|∂|π)"
    r"|(?P<op>\*\*|[-+*/^()])"
    r")"
)
_ALIASES = {"∞": "inf", "∂": "del", "π": "pi", "infty": "inf", "log": "ln"}


def _tokenize(text: str):
    pos, out = 0, []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos, text)
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        if kind == "op" and val == "**":
            val = "^"
        if kind == "id":
            val = _ALIASES.get(val, val)
        out.append((kind, val, start))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, decimals_exact: bool = True):
        self.text = text
        self.decimals_exact = decimals_exact
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val):
        kind, v, pos = self.take()
        if v != val or kind not in ("op",):
            raise ExprSyntaxError(f"expected {val!r}, found {v or 'end of input'!r}", pos, self.text)

    def parse(self) -> Expr:
        node = self.expr()
        kind, v, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {v!r}", pos, self.text)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        kind, v, _ = self.peek()
        if kind == "op" and v in ("-", "+"):
            self.take()
            arg = self.unary()
            return Neg(arg) if v == "-" else arg
        return self.factor()

    def factor(self):
        base = self.base()
        kind, v, _ = self.peek()
        if kind == "op" and v == "^":
            self.take()
            sign = 1
            kind, v, pos = self.peek()
            if kind == "op" and v in ("-", "+"):
                self.take()
                sign = -1 if v == "-" else 1
                kind, v, pos = self.peek()
            if kind != "num" or not re.fullmatch(r"\d+", v):
                raise ExprSyntaxError("exponent must be an integer", pos, self.text)
            self.take()
            return Pow(base, sign * int(v))
        return base

    def base(self):
        kind, v, pos = self.take()
        if kind == "num":
            if self.decimals_exact or re.fullmatch(r"\d+", v):
                return Const(Fraction(v))
            return Const(float(v))
        if kind in ("pm", "mp"):
            return Parity("+-" if kind == "pm" else "-+", self.factor())
        if kind == "op" and v == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "id":
            if v == "x":
                return X
            if v in NAMED:
                return Named(v)
            if v in FUNCTIONS or v == "O":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return BigO(arg) if v == "O" else Call(v, arg)
            if v.lower() in _PIECEWISE:
                raise UnsupportedExpression(f"piecewise construct {v!r} is not in the grammar", pos, self.text)
            raise UnknownIdentifier(f"unknown identifier {v!r}", pos, self.text)
        if kind == "end":
            raise ExprSyntaxError("unexpected end of input", pos, self.text)
        raise ExprSyntaxError(f"unexpected {v!r}", pos, self.text)


def parse_expr(text: str, decimals_exact: bool = True) -> Expr:
    """Parse ``text`` into an expression tree.

    Decimal literals are exact rationals unless ``decimals_exact`` is false.
    """
    return _Parser(text, decimals_exact).parse()


# -- printer ---------------------------------------------------------------
_PREC_SUM, _PREC_PROD, _PREC_UNARY, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def format_scalar(c: Scalar) -> str:
    """Literal text for a scalar; exact non-decimal fractions print as ``p/q``."""
    if isinstance(c, Fraction):
        if c.denominator == 1:
            return str(c.numerator)
        d = c.denominator
        for p in (2, 5):
            while d % p == 0:
                d //= p
        if d == 1:
            digits = 0
            while (c * 10**digits).denominator != 1:
                digits += 1
            return f"{float(c):.{digits}f}" if digits <= 15 else f"{c.numerator}/{c.denominator}"
        return f"{c.numerator}/{c.denominator}"
    return repr(float(c))


def _text(node: Expr) -> tuple[str, int]:
    if isinstance(node, Const):
        s = format_scalar(node.value)
        if s.startswith("-"):
            return s, _PREC_UNARY
        return (f"({s})", _PREC_ATOM) if "/" in s else (s, _PREC_ATOM)
    if isinstance(node, Var):
        return "x", _PREC_ATOM
    if isinstance(node, Named):
        return node.name, _PREC_ATOM
    if isinstance(node, Neg):
        return "-" + _wrap(node.arg, _PREC_UNARY), _PREC_UNARY
    if isinstance(node, BinOp):
        prec = _PREC_SUM if node.op in "+-" else _PREC_PROD
        left = _wrap(node.left, prec)
        right = _wrap(node.right, prec + 1)
        sep = f" {node.op} " if prec == _PREC_SUM else node.op
        return left + sep + right, prec
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _PREC_ATOM)}^{node.exp}", _PREC_POW
    if isinstance(node, Call):
        return f"{node.fn}({_text(node.arg)[0]})", _PREC_ATOM
    if isinstance(node, BigO):
        return f"O({_text(node.arg)[0]})", _PREC_ATOM
    if isinstance(node, Parity):
        return f"({node.sign}){_wrap(node.arg, _PREC_POW)}", _PREC_POW
    if isinstance(node, Compose):
        return _text(substitute(node.outer, node.inner))
    if isinstance(node, Patch):
        body = _text(node.body)[0]
        return (
            f"[{body} | x={format_scalar(node.at)} -> {format_scalar(node.value)}]",
            _PREC_ATOM,
        )
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node: Expr, need: int) -> str:
    s, p = _text(node)
    return s if p >= need else f"({s})"


def to_text(node: Expr) -> str:
    return _text(node)[0]


# -- structure helpers -----------------------------------------------------
def children(node: Expr) -> tuple[Expr, ...]:
    if isinstance(node, (Neg, Call, Parity, BigO)):
        return (node.arg,)
    if isinstance(node, BinOp):
        return (node.left, node.right)
    if isinstance(node, Pow):
        return (node.base,)
    if isinstance(node, Compose):
        return (node.outer, node.inner)
    if isinstance(node, Patch):
        return (node.body,)
    return ()


def walk(node: Expr):
    yield node
    for c in children(node):
        yield from walk(c)


def has_var(node: Expr) -> bool:
    if isinstance(node, Compose):
        return has_var(node.inner) and has_var(node.outer)
    return any(isinstance(n, (Var, Patch)) for n in walk(node))


def is_virtual(node: Expr) -> bool:
    """True when the tree mentions inf, del, parity signs or O()."""
    return any(
        (isinstance(n, Named) and n.name in ("inf", "del")) or isinstance(n, (Parity, BigO))
        for n in walk(node)
    )


def substitute(node: Expr, repl: Expr) -> Expr:
    """Replace the variable by ``repl``."""
    if isinstance(node, Var):
        return repl
    if isinstance(node, (Const, Named)):
        return node
    if isinstance(node, Neg):
        return Neg(substitute(node.arg, repl))
    if isinstance(node, BinOp):
        return BinOp(node.op, substitute(node.left, repl), substitute(node.right, repl))
    if isinstance(node, Pow):
        return Pow(substitute(node.base, repl), node.exp)
    if isinstance(node, Call):
        return Call(node.fn, substitute(node.arg, repl))
    if isinstance(node, Parity):
        return Parity(node.sign, substitute(node.arg, repl))
    if isinstance(node, BigO):
        return node
    if isinstance(node, Compose):
        return Compose(node.outer, substitute(node.inner, repl))
    if isinstance(node, Patch):
        if isinstance(repl, Var):
            return node
        return Compose(node, repl)
    raise TypeError(node)


def compose(outer: Expr, inner: Expr) -> Compose:
    return Compose(outer, inner)


def patch(body: Expr, at, value) -> Patch:
    return Patch(body, scalar(at), scalar(value))


# -- real evaluation -------------------------------------------------------
def eval_real(f: Expr, x=None) -> float:
    """Evaluate at a real point with domain guards."""
    return _eval(f, None if x is None else float(x))


def _eval(node: Expr, x: float | None) -> float:
    if isinstance(node, Const):
        return float(node.value)
    if isinstance(node, Var):
        if x is None:
            raise DomainError("expression has a free variable x", node)
        return x
    if isinstance(node, Named):
        if node.name == "pi":
            return math.pi
        if node.name == "e":
            return math.e
        raise DomainError(f"{node.name} is not a real number", node)
    if isinstance(node, Neg):
        return -_eval(node.arg, x)
    if isinstance(node, BinOp):
        a, b = _eval(node.left, x), _eval(node.right, x)
        if node.op == "+":
            return a + b
        if node.op == "-":
            return a - b
        if node.op == "*":
            return a * b
        if b == 0:
            raise DomainError("division by zero", node)
        return a / b
    if isinstance(node, Pow):
        b = _eval(node.base, x)
        if b == 0 and node.exp < 0:
            raise DomainError("zero to a negative power", node)
        try:
            return b**node.exp
        except OverflowError as exc:
            raise DomainError("overflow", node) from exc
    if isinstance(node, Call):
        return _call_real(node, _eval(node.arg, x))
    if isinstance(node, Compose):
        return _eval(node.outer, _eval(node.inner, x))
    if isinstance(node, Patch):
        if x is not None and x == node.at:
            return float(node.value)
        return _eval(node.body, x)
    if isinstance(node, (Parity, BigO)):
        raise DomainError("parity signs and O() terms are not real", node)
    raise TypeError(node)


def _call_real(node: Call, v: float) -> float:
    fn = node.fn
    if fn == "sin":
        return math.sin(v)
    if fn == "cos":
        return math.cos(v)
    if fn == "exp":
        try:
            return math.exp(v)
        except OverflowError as exc:
            raise DomainError("exp overflow", node) from exc
    if fn == "ln":
        if v <= 0:
            raise DomainError("ln of a non-positive number", node)
        return math.log(v)
    if fn == "sqrt":
        if v < 0:
            raise DomainError("sqrt of a negative number", node)
        return math.sqrt(v)
    if fn == "abs":
        return abs(v)
    raise UnknownIdentifier(f"unknown function {fn!r}")


# -- symbolic derivative ---------------------------------------------------
ZERO, ONE, TWO = Const(Fraction(0)), Const(Fraction(1)), Const(Fraction(2))


def _is_const(node, value=None):
    return isinstance(node, Const) and (value is None or node.value == value)


def _add(a, b):
    if isinstance(b, Neg):
        return _sub(a, b.arg)
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if _is_const(a) and _is_const(b):
        return Const(a.value + b.value)
    return BinOp("+", a, b)


def _sub(a, b):
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return _neg(b)
    if _is_const(a) and _is_const(b):
        return Const(a.value - b.value)
    return BinOp("-", a, b)


def _neg(a):
    if _is_const(a):
        return Const(-a.value)
    if isinstance(a, Neg):
        return a.arg
    if isinstance(a, BinOp) and a.op in "*/" and _is_const(a.left):
        return BinOp(a.op, Const(-a.left.value), a.right)
    return Neg(a)


def _mul(a, b):
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if _is_const(a, -1):
        return _neg(b)
    if _is_const(b, -1):
        return _neg(a)
    if _is_const(a) and _is_const(b):
        return Const(a.value * b.value)
    if _is_const(a) and a.value < 0:
        return _neg(_mul(Const(-a.value), b))
    return BinOp("*", a, b)


def _div(a, b):
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    if _is_const(a) and a.value < 0:
        return _neg(_div(Const(-a.value), b))
    return BinOp("/", a, b)


def _pow(a, k):
    if k == 0:
        return ONE
    if k == 1:
        return a
    return Pow(a, k)


def diff_expr(f: Expr) -> Expr:
    """Symbolic derivative with respect to ``x``.

    Raises :class:`NonSmoothNode` for ``abs`` and :class:`Patch` nodes.
    """
    if isinstance(f, (Const, Named)):
        return ZERO
    if isinstance(f, Var):
        return ONE
    if isinstance(f, Neg):
        return _neg(diff_expr(f.arg))
    if isinstance(f, BinOp):
        u, v = f.left, f.right
        du, dv = diff_expr(u), diff_expr(v)
        if f.op == "+":
            return _add(du, dv)
        if f.op == "-":
            return _sub(du, dv)
        if f.op == "*":
            return _add(_mul(du, v), _mul(u, dv))
        return _div(_sub(_mul(du, v), _mul(u, dv)), _pow(v, 2))
    if isinstance(f, Pow):
        du = diff_expr(f.base)
        return _mul(_mul(Const(Fraction(f.exp)), _pow(f.base, f.exp - 1)), du)
    if isinstance(f, Call):
        u = f.arg
        du = diff_expr(u)
        if f.fn == "sin":
            outer = Call("cos", u)
        elif f.fn == "cos":
            outer = _neg(Call("sin", u))
        elif f.fn == "exp":
            outer = f
        elif f.fn == "ln":
            return _div(du, u)
        elif f.fn == "sqrt":
            return _div(du, _mul(TWO, f))
        else:
            raise NonSmoothNode(f"{f.fn} has no derivative rule")
        return _mul(outer, du)
    if isinstance(f, Parity):
        return Parity(f.sign, diff_expr(f.arg))
    if isinstance(f, Compose):
        return _mul(Compose(diff_expr(f.outer), f.inner), diff_expr(f.inner))
    if isinstance(f, Patch):
        raise NonSmoothNode("patched point has no symbolic derivative")
    raise NonSmoothNode(f"cannot differentiate {type(f).__name__}")


# -- flat programs for the array kernels ------------------------------------
OPCODES = {
    "push": 0,
    "x": 1,
    "+": 2,
    "-": 3,
    "*": 4,
    "/": 5,
    "neg": 6,
    "powi": 7,
    "sin": 8,
    "cos": 9,
    "exp": 10,
    "ln": 11,
    "sqrt": 12,
    "abs": 13,
    "patch": 14,
}


@dataclass(frozen=True)
class Program:
    """Postfix form of a real function; see :mod:`virtualcalc.kernels`."""

    ops: np.ndarray
    arg1: np.ndarray
    arg2: np.ndarray
    stack: int


def compile_program(f: Expr) -> Program:
    code: list[tuple[int, float, float]] = []
    depth = [0, 0]

    def push(op, a1=0.0, a2=0.0, delta=0):
        code.append((OPCODES[op], a1, a2))
        depth[0] += delta
        depth[1] = max(depth[1], depth[0])

    def emit(node, var):
        if isinstance(node, Const):
            push("push", float(node.value), delta=1)
        elif isinstance(node, Var):
            if var is None:
                push("x", delta=1)
            else:
                emit(var, None)
        elif isinstance(node, Named):
            if node.name not in ("pi", "e"):
                raise DomainError(f"{node.name} is not a real number", node)
            push("push", math.pi if node.name == "pi" else math.e, delta=1)
        elif isinstance(node, Neg):
            emit(node.arg, var)
            push("neg")
        elif isinstance(node, BinOp):
            emit(node.left, var)
            emit(node.right, var)
            push(node.op, delta=-1)
        elif isinstance(node, Pow):
            emit(node.base, var)
            push("powi", float(node.exp))
        elif isinstance(node, Call):
            emit(node.arg, var)
            push(node.fn)
        elif isinstance(node, Compose):
            inner = node.inner if var is None else substitute(node.inner, var)
            emit(node.outer, inner)
        elif isinstance(node, Patch):
            if var is not None:
                raise UnsupportedExpression("patched functions cannot be composed inside a kernel")
            emit(node.body, None)
            push("patch", float(node.at), float(node.value))
        else:
            raise DomainError(f"{type(node).__name__} is not a real function node", node)

    emit(f, None)
    ops, a1, a2 = zip(*code)
    return Program(
        np.asarray(ops, dtype=np.int32),
        np.asarray(a1, dtype=np.float64),
        np.asarray(a2, dtype=np.float64),
        depth[1],
    )


def extend_apply(f: Expr, alpha=None):
    """Virtual extension of ``f`` at ``alpha``; see :mod:`virtualcalc.lift`."""
    from .lift import extend_apply as lifted

    return lifted(f, alpha)


# -- domains -----------------------------------------------------------------
@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = True

    def __post_init__(self):
        if self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed)):
            raise UnsupportedSet(f"empty or reversed interval {self}")
        if math.isinf(self.lo) and self.lo_closed or math.isinf(self.hi) and self.hi_closed:
            object.__setattr__(self, "lo_closed", self.lo_closed and not math.isinf(self.lo))
            object.__setattr__(self, "hi_closed", self.hi_closed and not math.isinf(self.hi))

    @property
    def bounded(self) -> bool:
        return not (math.isinf(self.lo) or math.isinf(self.hi))

    def __contains__(self, x) -> bool:
        above = x > self.lo or (self.lo_closed and x == self.lo)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def __str__(self):
        def end(v):
            return "inf" if v == math.inf else "-inf" if v == -math.inf else format_scalar(scalar(v))

        return f"{'[' if self.lo_closed else '('}{end(self.lo)}, {end(self.hi)}{']' if self.hi_closed else ')'}"


@dataclass(frozen=True)
class DomainDescriptor:
    """Finite union of intervals."""

    intervals: tuple[Interval, ...]

    def __post_init__(self):
        if not self.intervals:
            raise UnsupportedSet("empty domain descriptor")
        if not all(isinstance(i, Interval) for i in self.intervals):
            raise UnsupportedSet("domain descriptors are unions of intervals")

    @classmethod
    def of(cls, *intervals) -> DomainDescriptor:
        return cls(tuple(i if isinstance(i, Interval) else Interval(*i) for i in intervals))

    def __contains__(self, x) -> bool:
        return any(x in i for i in self.intervals)

    def __str__(self):
        return " U ".join(str(i) for i in self.intervals)


REALS = DomainDescriptor((Interval(-math.inf, math.inf, False, False),))

_INTERVAL = re.compile(r"\s*([\[(])([^,\[\]()]+|[^,]+?),([^,]+?)([\])])\s*")


def parse_domain(text: str) -> DomainDescriptor:
    """Read ``[0,1]``, ``(-1,1) U (2,3)``, ``(-inf, 0]`` or ``R``."""
    body = text.strip()
    if body in ("R", "reals", "ℝ"):
        return REALS
    out = []
    for piece in re.split(r"\s*(?:U|∪)\s*", body):
        m = _INTERVAL.fullmatch(piece)
        if not m:
            raise UnsupportedSet(f"cannot read interval {piece!r}")
        lo, hi = (_endpoint(s) for s in (m.group(2), m.group(3)))
        out.append(Interval(lo, hi, m.group(1) == "[", m.group(4) == "]"))
    return DomainDescriptor(tuple(out))


def _endpoint(s: str) -> float:
    s = s.strip()
    if s in ("inf", "+inf", "∞"):
        return math.inf
    if s in ("-inf", "-∞"):
        return -math.inf
    try:
        return eval_real(parse_expr(s))
    except (ParseError, DomainError) as exc:
        raise UnsupportedSet(f"bad interval endpoint {s!r}: {exc}") from exc
