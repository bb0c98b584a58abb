"""Evaluation of expression trees at virtual arguments.

On the series tier every elementary call is replaced by its Taylor series
about the standard center of its argument, so ``sin(del)`` becomes
``del - del^3/6 + ...`` up to the ambient truncation order.  Arguments that
have no usable center (``sin(inf)``, ``ln(del)``, ``sqrt(del)``) drop to the
sequence tier, where the function is applied index by index.
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from math import factorial, isqrt

from . import realfun as R
from .config import current
from .errors import CenterOnBoundary, DomainError
from .series import Laurent, Scalar, taylor_compose
from .vnum import (
    DEL,
    INF,
    Series,
    Seq,
    VirtualNumber,
    add,
    alternate_sign,
    alternate_sign_neg,
    div,
    from_rule,
    make_real,
    mul,
    neg,
    power,
    sample,
    sub,
    to_seq,
)

log = logging.getLogger("virtualcalc")


class _Fallback(Exception):
    pass


def extend_apply(f: R.Expr, alpha: VirtualNumber | None = None) -> VirtualNumber:
    """Value of the virtual extension of ``f`` at ``alpha``."""
    return _eval(f, alpha)


def evaluate(expr: R.Expr) -> VirtualNumber:
    """Value of a closed expression such as ``sqrt(inf^2 + 1) - inf``."""
    return _eval(expr, None)


def _eval(node, x):
    if isinstance(node, R.Const):
        return make_real(node.value)
    if isinstance(node, R.Var):
        if x is None:
            raise DomainError("expression has a free variable x", node)
        return x
    if isinstance(node, R.Named):
        return {"pi": lambda: make_real(math.pi), "e": lambda: make_real(math.e),
                "inf": lambda: INF, "del": lambda: DEL}[node.name]()
    if isinstance(node, R.Neg):
        return neg(_eval(node.arg, x))
    if isinstance(node, R.BinOp):
        a, b = _eval(node.left, x), _eval(node.right, x)
        return {"+": add, "-": sub, "*": mul, "/": div}[node.op](a, b)
    if isinstance(node, R.Pow):
        return power(_eval(node.base, x), node.exp)
    if isinstance(node, R.Parity):
        arg = _eval(node.arg, x)
        return alternate_sign(arg) if node.sign == "+-" else alternate_sign_neg(arg)
    if isinstance(node, R.Call):
        return apply_function(node.fn, _eval(node.arg, x), node)
    if isinstance(node, R.Compose):
        return _eval(node.outer, _eval(node.inner, x))
    if isinstance(node, R.Patch):
        return _patch(node, x)
    if isinstance(node, R.BigO):
        return _big_o(node, x)
    raise TypeError(node)


def _big_o(node, x):
    arg = _eval(node.arg, x)
    if isinstance(arg, Series) and arg.parity_free:
        lp = arg.even
        if lp.trunc is None and len(lp.terms) == 1:
            (k, c), = lp.terms.items()
            if c == 1:
                o = Laurent.big_o(k)
                return Series(o, o)
    raise DomainError("O() takes a power of del or inf", node)


def _patch(node: R.Patch, x):
    if x is None:
        raise DomainError("expression has a free variable x", node)
    if isinstance(x, Seq):
        g = x.gen

        def rule(n):
            v = g(n)
            return float(node.value) if v == node.at else R.eval_real(node.body, v)

        return from_rule(rule, f"{R.to_text(node)} at {g.description}")
    d = sub(x, make_real(node.at))
    states = [lp.is_zero() for lp in d.branches]
    if all(states):
        return make_real(node.value)
    if not any(states) and all(lp.terms for lp in d.branches):
        return _eval(node.body, x)
    raise CenterOnBoundary("argument is not decidably away from the patched point", node)


# -- elementary functions ---------------------------------------------------
def apply_function(fn: str, u: VirtualNumber, node=None) -> VirtualNumber:
    if isinstance(u, Series):
        order = current().trunc
        try:
            return u.map(lambda lp: _lift(fn, lp, order, node))
        except _Fallback as why:
            log.info("%s: falling back to the sequence tier (%s)", fn, why)
    return _pointwise(fn, to_seq(u), node)


def _pointwise(fn: str, u: Seq, node) -> Seq:
    g = u.gen
    call = node if isinstance(node, R.Call) else R.Call(fn, R.X)

    def rule(n):
        try:
            return R._call_real(call, g(n))
        except DomainError as exc:
            raise DomainError(f"{exc} at index {n}", call, n) from exc

    return from_rule(rule, f"{fn}({g.description})")


def _lift(fn: str, lp: Laurent, order: int, node) -> Laurent:
    if fn == "abs":
        lead = lp.lead()
        if lead is None:
            if lp.is_zero():
                return lp
            raise CenterOnBoundary("abs of a value with unknown sign", node)
        return lp if lead[1] > 0 else -lp

    lead = lp.lead()
    if lead is None:
        if lp.is_zero() and fn in ("sin", "cos", "exp"):
            return Laurent.const(_coefficients(fn, Fraction(0))(0))
        if lp.trunc is not None and lp.trunc >= 0 and fn in ("sin", "cos", "exp"):
            return taylor_compose(_coefficients(fn, Fraction(0)), lp, order)
        if lp.is_zero():
            raise DomainError(f"{fn} at zero", node)
        raise CenterOnBoundary(f"{fn} of a value known only as {lp!r}", node)
    v, a = lead
    if fn in ("ln", "sqrt") and a < 0:
        raise DomainError(f"{fn} of an eventually negative value", node)
    if fn == "sqrt" and v != 0:
        if v % 2:
            raise _Fallback("odd valuation under sqrt")
        return _lift("sqrt", lp.shift(-v), order - v // 2, node).shift(v // 2)
    if v < 0:
        raise _Fallback(f"infinite argument to {fn}")
    if fn == "ln" and v > 0:
        raise _Fallback("ln of an infinitesimal")
    c = lp.coeff(0)
    eps = lp - Laurent.const(c)
    try:
        coeff = _coefficients(fn, c)
        return taylor_compose(coeff, eps, order)
    except OverflowError as exc:
        raise DomainError(f"{fn} overflows at center {c}", node) from exc


def _coefficients(fn: str, c: Scalar):
    """Taylor coefficients of ``fn`` about ``c`` as a function of the index."""
    zero = c == 0
    if fn == "exp":
        ec = Fraction(1) if zero else math.exp(c)
        return lambda k: ec * Fraction(1, factorial(k))
    if fn in ("sin", "cos"):
        s, co = (Fraction(0), Fraction(1)) if zero else (math.sin(c), math.cos(c))
        cycle = [s, co, -s, -co] if fn == "sin" else [co, -s, -co, s]
        return lambda k: cycle[k % 4] * Fraction(1, factorial(k))
    if fn == "ln":
        head = Fraction(0) if c == 1 else math.log(c)
        return lambda k: head if k == 0 else Fraction((-1) ** (k + 1), k) / c**k
    if fn == "sqrt":
        root = _exact_sqrt(c)
        if root is None:
            root = math.sqrt(c)
        binom = [Fraction(1)]

        def coeff(k):
            while len(binom) <= k:
                j = len(binom)
                binom.append(binom[-1] * (Fraction(1, 2) - j + 1) / j)
            return root * binom[k] / c**k

        return coeff
    raise DomainError(f"no Taylor rule for {fn}")


def _exact_sqrt(c: Scalar) -> Fraction | None:
    if not isinstance(c, Fraction) or c < 0:
        return None
    p, q = isqrt(c.numerator), isqrt(c.denominator)
    if p * p == c.numerator and q * q == c.denominator:
        return Fraction(p, q)
    return None

