"""Virtual numbers on two tiers.

* :class:`Series` carries one Laurent expansion per index parity.  Equal
  branches are ordinary ``del``-expansions; the parity split is what lets
  ``(+-)1`` (``-1, +1, -1, ...``) live on the exact tier.
* :class:`Seq` wraps a pure rule ``n -> float`` and is the general model.

Relations follow the "holds for all but finitely many indices" reading.  On
the series tier that is decidable from leading terms; on the sequence tier it
is sampled along :func:`schedule` and may come back unknown.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from . import verdict as V
from .config import SCALAR_TOL, current
from .errors import NotInvertible, PointwiseZero
from .series import Laurent, Scalar, is_exact, scalar
from .verdict import Verdict


@dataclass(frozen=True)
class SequenceGen:
    rule: Callable[[int], float]
    description: str = "<sequence>"

    def __call__(self, n: int) -> float:
        return float(self.rule(n))


class VirtualNumber:
    """Common operator surface; see :class:`Series` and :class:`Seq`."""

    __slots__ = ()

    def __add__(self, other):
        return add(self, _coerce(other))

    def __radd__(self, other):
        return add(_coerce(other), self)

    def __sub__(self, other):
        return sub(self, _coerce(other))

    def __rsub__(self, other):
        return sub(_coerce(other), self)

    def __mul__(self, other):
        return mul(self, _coerce(other))

    def __rmul__(self, other):
        return mul(_coerce(other), self)

    def __truediv__(self, other):
        return div(self, _coerce(other))

    def __rtruediv__(self, other):
        return div(_coerce(other), self)

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("virtual powers take integer exponents")
        return power(self, k)


@dataclass(frozen=True, eq=False)
class Series(VirtualNumber):
    even: Laurent
    odd: Laurent

    @property
    def parity_free(self) -> bool:
        return self.even is self.odd or self.even == self.odd

    @property
    def branches(self) -> tuple[Laurent, ...]:
        return (self.even,) if self.even is self.odd else (self.even, self.odd)

    @property
    def approximate(self) -> bool:
        return self.even.approximate or self.odd.approximate

    def map(self, fn: Callable[[Laurent], Laurent]) -> Series:
        e = fn(self.even)
        return Series(e, e if self.even is self.odd else fn(self.odd))

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.even == other.even and self.odd == other.odd

    def __hash__(self):
        return hash((self.even, self.odd))

    def __repr__(self):
        from .normal_form import format_virtual

        return f"Series({format_virtual(self)})"


@dataclass(frozen=True, eq=False)
class Seq(VirtualNumber):
    gen: SequenceGen

    def __repr__(self):
        return f"Seq({self.gen.description})"


def _uniform(lp: Laurent) -> Series:
    return Series(lp, lp)


def _coerce(x) -> VirtualNumber:
    if isinstance(x, VirtualNumber):
        return x
    return make_real(x)


# -- constructors --------------------------------------------------------
def make_real(x) -> Series:
    """Embed a real scalar (int/Fraction exact, float approximate)."""
    return _uniform(Laurent.const(scalar(x)))


def const_infty() -> Series:
    return _uniform(Laurent.monomial(1, -1))


def const_del() -> Series:
    return _uniform(Laurent.monomial(1, 1))


ZERO = make_real(0)
ONE = make_real(1)
INF = const_infty()
DEL = const_del()


def from_rule(rule: Callable[[int], float], description: str = "<sequence>") -> Seq:
    return Seq(SequenceGen(rule, description))


def to_seq(a: VirtualNumber) -> Seq:
    """Total coercion Series -> Seq (the reverse is never attempted)."""
    if isinstance(a, Seq):
        return a
    from .normal_form import format_virtual

    return from_rule(lambda n, a=a: sample(a, n), format_virtual(a))


# -- sampling ------------------------------------------------------------
def sample(a: VirtualNumber, n: int) -> float:
    """Value of the representative sequence at index ``n >= 1``."""
    if n < 1:
        raise ValueError("sequence indices start at 1")
    if isinstance(a, Series):
        return (a.even if n % 2 == 0 else a.odd).evaluate(n)
    return a.gen(n)


def schedule(depth: int | None = None) -> tuple[int, ...]:
    """Sampling indices ``2**k`` for ``k <= depth`` plus the 8 largest odd neighbours."""
    return _schedule(current().depth if depth is None else depth)


@lru_cache(maxsize=64)
def _schedule(depth: int) -> tuple[int, ...]:
    powers = [2**k for k in range(depth + 1)]
    odd = [p + 1 for p in powers[-8:]]
    return tuple(sorted(set(powers + odd)))


# -- arithmetic ----------------------------------------------------------
def _seq_binary(a: VirtualNumber, b: VirtualNumber, op, symbol: str) -> Seq:
    sa, sb = to_seq(a), to_seq(b)
    ga, gb = sa.gen, sb.gen
    return from_rule(
        lambda n: op(ga(n), gb(n)), f"({ga.description} {symbol} {gb.description})"
    )


def _series_binary(a: Series, b: Series, op) -> Series:
    e = op(a.even, b.even)
    if a.even is a.odd and b.even is b.odd:
        return Series(e, e)
    return Series(e, op(a.odd, b.odd))


def add(a: VirtualNumber, b: VirtualNumber) -> VirtualNumber:
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Series) and isinstance(b, Series):
        return _series_binary(a, b, Laurent.__add__)
    return _seq_binary(a, b, lambda x, y: x + y, "+")


def neg(a: VirtualNumber) -> VirtualNumber:
    a = _coerce(a)
    if isinstance(a, Series):
        return a.map(Laurent.__neg__)
    g = a.gen
    return from_rule(lambda n: -g(n), f"-{g.description}")


def sub(a: VirtualNumber, b: VirtualNumber) -> VirtualNumber:
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Series) and isinstance(b, Series):
        return _series_binary(a, b, Laurent.__sub__)
    return _seq_binary(a, b, lambda x, y: x - y, "-")


def mul(a: VirtualNumber, b: VirtualNumber) -> VirtualNumber:
    a, b = _coerce(a), _coerce(b)
    if isinstance(a, Series) and isinstance(b, Series):
        return _series_binary(a, b, Laurent.__mul__)
    return _seq_binary(a, b, lambda x, y: x * y, "*")


def inv(a: VirtualNumber) -> VirtualNumber:
    """Multiplicative inverse.

    Series: raises :class:`NotInvertible` when a branch is zero up to its
    truncation.  Seq: applied lazily; sampling an index whose value is exactly
    zero raises :class:`PointwiseZero`.
    """
    a = _coerce(a)
    if isinstance(a, Series):
        order = current().trunc
        return a.map(lambda lp: lp.inverse(order))
    g = a.gen

    def rule(n):
        v = g(n)
        if v == 0:
            raise PointwiseZero(n)
        return 1.0 / v

    return from_rule(rule, f"1/{g.description}")


def div(a: VirtualNumber, b: VirtualNumber) -> VirtualNumber:
    return mul(a, inv(_coerce(b)))


def power(a: VirtualNumber, k: int) -> VirtualNumber:
    if isinstance(a, Series):
        order = current().trunc
        return a.map(lambda lp: lp.pow(k, order))
    g = a.gen

    def rule(n):
        v = g(n)
        if k < 0 and v == 0:
            raise PointwiseZero(n)
        return v**k

    return from_rule(rule, f"{g.description}^{k}")


def alternate_sign(a: VirtualNumber) -> VirtualNumber:
    """``(+-)a``: odd-index values negated, even-index values kept."""
    if isinstance(a, Series):
        return Series(a.even, -a.odd)
    g = a.gen
    return from_rule(lambda n: g(n) if n % 2 == 0 else -g(n), f"(+-){g.description}")


def alternate_sign_neg(a: VirtualNumber) -> VirtualNumber:
    """``(-+)a``, defined as ``-((+-)a)``."""
    return neg(alternate_sign(a))


# -- extended relations --------------------------------------------------
RELATIONS = ("eq", "neq", "lt", "le", "gt", "ge", "between")


def _sign(lp: Laurent) -> int | None:
    """Eventual sign of a branch: +1, -1, 0, or None when only an O() tail is left."""
    lead = lp.lead()
    if lead is not None:
        return 1 if lead[1] > 0 else -1
    return 0 if lp.trunc is None else None


def _branch_truth(rel: str, xs: tuple[Laurent, ...]) -> bool | None:
    if rel == "between":
        a, b, c = xs
        s = _sign((b - a) * (c - b))
        return None if s is None else s >= 0
    a, b = xs
    s = _sign(b - a)
    if s is None:
        return None
    return {
        "eq": s == 0,
        "neq": s != 0,
        "lt": s > 0,
        "le": s >= 0,
        "gt": s < 0,
        "ge": s <= 0,
    }[rel]


def _close(x: float, y: float) -> bool:
    return math.isclose(x, y, rel_tol=SCALAR_TOL, abs_tol=0.0)


def _point_truth(rel: str, vals: tuple[float, ...]) -> bool:
    if rel == "between":
        a, b, c = vals
        le = lambda x, y: x <= y or _close(x, y)  # noqa: E731
        return (le(a, b) and le(b, c)) or (le(c, b) and le(b, a))
    x, y = vals
    if rel == "eq":
        return _close(x, y)
    if rel == "neq":
        return not _close(x, y)
    if rel == "lt":
        return x < y and not _close(x, y)
    if rel == "le":
        return x <= y or _close(x, y)
    if rel == "gt":
        return x > y and not _close(x, y)
    return x >= y or _close(x, y)


def rel_ext(rel: str, *args: VirtualNumber, depth: int | None = None) -> Verdict:
    """Virtual extension of a real relation, under eventual-truth semantics."""
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    arity = 3 if rel == "between" else 2
    if len(args) != arity:
        raise TypeError(f"{rel} takes {arity} arguments, got {len(args)}")
    args = tuple(_coerce(a) for a in args)
    if all(isinstance(a, Series) for a in args):
        truths = [_branch_truth(rel, tuple(a.even for a in args))]
        if not all(a.even is a.odd for a in args):
            truths.append(_branch_truth(rel, tuple(a.odd for a in args)))
        if any(t is False for t in truths):
            return V.FAILS
        if all(truths):
            return V.HOLDS
        return V.UNKNOWN
    return _sampled_relation(rel, args, depth)


def _sampled_relation(rel, args, depth) -> Verdict:
    pts = schedule(depth)
    oks = [_point_truth(rel, tuple(sample(a, n) for a in args)) for n in pts]
    top = pts[-1]
    if all(oks[-4:]):
        return Verdict(V.Truth.HOLDS, top)
    failing = [n for n, ok in zip(pts, oks) if not ok]
    if not oks[-1] or not oks[-2]:
        return Verdict(V.Truth.FAILS, top, failing[-1])
    return Verdict(V.Truth.UNKNOWN, top, failing[-1])


def eq(a, b, **kw) -> Verdict:
    return rel_ext("eq", a, b, **kw)


def neq(a, b, **kw) -> Verdict:
    return rel_ext("neq", a, b, **kw)


def lt(a, b, **kw) -> Verdict:
    return rel_ext("lt", a, b, **kw)


def le(a, b, **kw) -> Verdict:
    return rel_ext("le", a, b, **kw)


def gt_ext(a, b, **kw) -> Verdict:
    return rel_ext("gt", a, b, **kw)


def agrees(a: Series, b: Series) -> bool:
    """Coefficientwise agreement on every exponent known in both values."""
    return a.even.agrees_with(b.even) and a.odd.agrees_with(b.odd)


def is_exact_value(a: VirtualNumber) -> bool:
    return isinstance(a, Series) and a.even.exact and a.odd.exact


def coefficient(a: Series, k: int) -> Scalar:
    """Coefficient of ``del**k`` on a parity-free series."""
    if not a.parity_free:
        raise ValueError("coefficient() needs equal parity branches")
    return a.even.coeff(k)


__all__ = [
    "VirtualNumber",
    "Series",
    "Seq",
    "SequenceGen",
    "make_real",
    "const_infty",
    "const_del",
    "INF",
    "DEL",
    "ZERO",
    "ONE",
    "from_rule",
    "to_seq",
    "sample",
    "schedule",
    "add",
    "sub",
    "neg",
    "mul",
    "inv",
    "div",
    "power",
    "alternate_sign",
    "alternate_sign_neg",
    "rel_ext",
    "eq",
    "neq",
    "lt",
    "le",
    "gt_ext",
    "agrees",
    "is_exact",
    "is_exact_value",
    "coefficient",
]
