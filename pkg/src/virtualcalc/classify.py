"""Finitude, proximity and standard parts.

Series-tier answers are exact and come from valuations.  Sequence-tier
answers look at the tail of the sampling schedule:

* infinitesimal: the last four magnitudes decrease strictly and end below
  ``1e-6`` (or all sit at the rounding floor); fails when all four exceed
  ``1e-3``;
* finite: fails when the last four magnitudes exceed ``1e9`` and grow; holds
  when they stay below ``1e9`` without growing strictly;
* standard part: the last five samples lie within ``1e-6`` of their mean and
  that mean moves by at most ``1e-8`` between the last two windows.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from statistics import fmean

from . import verdict as V
from .config import SCALAR_TOL
from .errors import NoStandardPart, UnsupportedSet
from .realfun import DomainDescriptor, Interval
from .series import Laurent, Scalar
from .verdict import Truth, Verdict
from .vnum import (
    DEL,
    Series,
    VirtualNumber,
    _coerce,
    add,
    make_real,
    rel_ext,
    sample,
    schedule,
    sub,
)

TAIL = 4
DECAY_TARGET = 1e-6
STAYS_LARGE = 1e-3
BOUND = 1e9
CAUCHY_SPREAD = 1e-6
CAUCHY_DRIFT = 1e-8


def tail(a: VirtualNumber, depth: int | None = None) -> tuple[tuple[int, ...], list[float]]:
    pts = schedule(depth)
    return pts, [sample(a, n) for n in pts]


def _series_verdict(flags) -> Verdict:
    flags = list(flags)
    if any(f is False for f in flags):
        return V.FAILS
    if all(f is True for f in flags):
        return V.HOLDS
    return V.UNKNOWN


def _branch_at_least(lp: Laurent, k: int) -> bool | None:
    """Every exponent carried by ``lp`` is >= k (None when the O() tail hides it)."""
    if lp.terms:
        return lp.valuation >= k
    if lp.trunc is None:
        return True
    return True if lp.trunc + 1 >= k else None


# -- absolute finitude ---------------------------------------------------
def is_infinitesimal(a, depth: int | None = None, floor: float = SCALAR_TOL, noise=None) -> Verdict:
    """Series: every branch has valuation >= 1.  Sequences: tail decay heuristic.

    ``noise`` (index -> float) is a rounding envelope for computed sequences:
    samples inside it count as zero and steps inside it do not break the
    decrease.
    """
    a = _coerce(a)
    if isinstance(a, Series):
        return _series_verdict(_branch_at_least(lp, 1) for lp in a.branches)
    pts, vals = tail(a, depth)
    if noise is None:
        return infinitesimal_tail(vals, pts[-1], floor)
    env = [noise(n) for n in pts]
    return infinitesimal_tail(vals, pts[-1], [max(floor, e) for e in env], env)


def infinitesimal_tail(vals, top: int, floor=SCALAR_TOL, noise=None) -> Verdict:
    """Decay heuristic applied to the absolute values at the schedule tail."""
    mags = [abs(v) for v in vals[-TAIL:]]
    if any(math.isnan(m) for m in mags):
        return Verdict(Truth.UNKNOWN, top)
    floors = floor[-TAIL:] if isinstance(floor, (list, tuple)) else [floor] * TAIL
    if all(m <= f for m, f in zip(mags, floors)):
        return Verdict(Truth.HOLDS, top)
    if noise is None:
        decreasing = all(x > y for x, y in zip(mags, mags[1:]))
    else:
        env = noise[-TAIL:]
        steps = zip(mags, mags[1:], env, env[1:])
        decreasing = all(x - y > -(ex + ey) for x, y, ex, ey in steps)
        decreasing = decreasing and mags[0] - mags[-1] > env[0] + env[-1]
    if decreasing and mags[-1] < DECAY_TARGET:
        return Verdict(Truth.HOLDS, top)
    if all(m > STAYS_LARGE for m in mags):
        return Verdict(Truth.FAILS, top)
    return Verdict(Truth.UNKNOWN, top)


def is_finite(a, depth: int | None = None) -> Verdict:
    a = _coerce(a)
    if isinstance(a, Series):
        return _series_verdict(_branch_at_least(lp, 0) for lp in a.branches)
    pts, vals = tail(a, depth)
    return finite_tail(vals, pts[-1])


def finite_tail(vals, top: int) -> Verdict:
    mags = [abs(v) for v in vals[-TAIL:]]
    if any(math.isnan(m) for m in mags):
        return Verdict(Truth.UNKNOWN, top)
    growing = all(y > x for x, y in zip(mags, mags[1:]))
    if all(m > BOUND for m in mags) and growing:
        return Verdict(Truth.FAILS, top)
    if max(mags) <= BOUND and not growing:
        return Verdict(Truth.HOLDS, top)
    return Verdict(Truth.UNKNOWN, top)


def is_infinite(a, depth: int | None = None) -> Verdict:
    return is_finite(a, depth).negate()


class Side(enum.Enum):
    ABOVE = "AboveR"
    BELOW = "BelowR"
    NEITHER = "Neither"


@dataclass(frozen=True)
class RealComparison:
    side: Side
    verdict: Verdict


def cmp_reals(a, depth: int | None = None) -> RealComparison:
    """Whether ``a`` exceeds every real, lies below every real, or neither."""
    a = _coerce(a)
    if isinstance(a, Series):
        signs = []
        for lp in a.branches:
            lead = lp.lead()
            if lead is None:
                signs.append(0 if _branch_at_least(lp, 0) else None)
            elif lead[0] < 0:
                signs.append(1 if lead[1] > 0 else -1)
            else:
                signs.append(0)
        if None in signs:
            return RealComparison(Side.NEITHER, V.UNKNOWN)
        if all(s == 1 for s in signs):
            return RealComparison(Side.ABOVE, V.HOLDS)
        if all(s == -1 for s in signs):
            return RealComparison(Side.BELOW, V.HOLDS)
        return RealComparison(Side.NEITHER, V.HOLDS)
    pts, vals = tail(a, depth)
    top = pts[-1]
    inf = finite_tail(vals, top).negate()
    last = vals[-TAIL:]
    if inf.holds and all(v > 0 for v in last):
        return RealComparison(Side.ABOVE, Verdict(Truth.HOLDS, top))
    if inf.holds and all(v < 0 for v in last):
        return RealComparison(Side.BELOW, Verdict(Truth.HOLDS, top))
    if inf.unknown:
        return RealComparison(Side.NEITHER, Verdict(Truth.UNKNOWN, top))
    return RealComparison(Side.NEITHER, Verdict(Truth.HOLDS, top))


# -- classification --------------------------------------------------------
class Finitude(enum.Enum):
    INFINITESIMAL = "Infinitesimal"
    FINITE = "FiniteNonInfinitesimal"
    ABOVE_R = "InfiniteAboveR"
    BELOW_R = "InfiniteBelowR"
    OSCILLATING = "InfiniteOscillating"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class FinitudeClass:
    tag: Finitude
    depth: int = 0
    verdict: Verdict = V.HOLDS

    @property
    def infinite(self) -> bool:
        return self.tag in (Finitude.ABOVE_R, Finitude.BELOW_R, Finitude.OSCILLATING)

    @property
    def finite(self) -> bool:
        return self.tag in (Finitude.INFINITESIMAL, Finitude.FINITE)


def classify(a, depth: int | None = None) -> FinitudeClass:
    a = _coerce(a)
    small = is_infinitesimal(a, depth)
    if small.holds:
        return FinitudeClass(Finitude.INFINITESIMAL, small.depth, small)
    fin = is_finite(a, depth)
    d = max(small.depth, fin.depth)
    if fin.holds:
        if small.fails:
            return FinitudeClass(Finitude.FINITE, d, fin)
        return FinitudeClass(Finitude.UNKNOWN, d, V.Verdict(Truth.UNKNOWN, d))
    if fin.fails:
        side = cmp_reals(a, depth)
        tag = {Side.ABOVE: Finitude.ABOVE_R, Side.BELOW: Finitude.BELOW_R}.get(
            side.side, Finitude.OSCILLATING
        )
        return FinitudeClass(tag, d, side.verdict)
    return FinitudeClass(Finitude.UNKNOWN, d, Verdict(Truth.UNKNOWN, d))


def classification_report(a, depth: int | None = None) -> dict:
    """Flat record: tag, verdict, depth, witness, plus the three predicates."""
    c = classify(a, depth)
    side = cmp_reals(a, depth)
    return {
        "tag": c.tag.value,
        "verdict": c.verdict.label,
        "depth": c.depth,
        "witness": c.verdict.witness,
        "infinitesimal": is_infinitesimal(a, depth).label,
        "finite": is_finite(a, depth).label,
        "above_r": side.side is Side.ABOVE,
        "below_r": side.side is Side.BELOW,
    }


# -- proximity -------------------------------------------------------------
def near(a, b, depth: int | None = None) -> Verdict:
    """``a`` and ``b`` are infinitely close."""
    return is_infinitesimal(sub(_coerce(a), _coerce(b)), depth)


def neighbour(a, b, depth: int | None = None) -> Verdict:
    """Infinitely close but eventually different."""
    return V.conjoin([near(a, b, depth), rel_ext("neq", a, b, depth=depth)])


def standard_part(a, depth: int | None = None) -> Scalar:
    a = _coerce(a)
    if isinstance(a, Series):
        parts = []
        for lp in a.branches:
            if not _branch_at_least(lp, 0):
                if lp.terms and lp.valuation < 0:
                    raise NoStandardPart("value is infinite")
                raise NoStandardPart("constant term hidden by truncation", unknown=True)
            parts.append(lp.coeff(0))
        first = parts[0]
        if any(not _same_scalar(first, p) for p in parts[1:]):
            raise NoStandardPart("parity branches approach different reals")
        return first
    pts, vals = tail(a, depth)
    if any(math.isnan(v) or math.isinf(v) for v in vals[-6:]):
        raise NoStandardPart("non-finite samples", unknown=True)
    last5, prev5 = vals[-5:], vals[-6:-1]
    m = fmean(last5)
    if all(abs(v - m) <= CAUCHY_SPREAD for v in last5) and abs(m - fmean(prev5)) <= CAUCHY_DRIFT:
        return vals[-1]
    if finite_tail(vals, pts[-1]).fails:
        raise NoStandardPart("value is infinite")
    raise NoStandardPart("tail has not settled at this depth", unknown=True)


def _same_scalar(x, y) -> bool:
    if x == y:
        return True
    return math.isclose(float(x), float(y), rel_tol=SCALAR_TOL, abs_tol=0.0)


def between(b, a, c, depth: int | None = None) -> Verdict:
    """``b`` lies between ``a`` and ``c`` (in either order)."""
    return rel_ext("between", a, b, c, depth=depth)


@dataclass(frozen=True)
class ConfrontResult:
    hypothesis: Verdict
    conclusion: Verdict | None
    verdict: Verdict


def confront(a, b, c, depth: int | None = None) -> ConfrontResult:
    """If ``b`` is between ``a`` and ``c`` and ``a`` is near ``c``, then ``b`` is near ``a``.

    ``verdict`` holds when the hypothesis holds and the conclusion is
    confirmed; it fails if the conclusion is refuted.
    """
    hyp = V.conjoin([between(b, a, c, depth), near(a, c, depth)])
    if not hyp.holds:
        return ConfrontResult(hyp, None, Verdict(Truth.UNKNOWN, hyp.depth))
    concl = near(a, b, depth)
    return ConfrontResult(hyp, concl, concl)


# -- the real line -----------------------------------------------------------
def contains(B: DomainDescriptor, a, depth: int | None = None) -> Verdict:
    """Eventual membership of a virtual number in a union of intervals."""
    if not isinstance(B, DomainDescriptor):
        raise UnsupportedSet(f"unsupported set descriptor {B!r}")
    a = _coerce(a)
    return V.disjoin(_in_interval(i, a, depth) for i in B.intervals)


def _in_interval(i: Interval, a, depth) -> Verdict:
    checks = []
    if not math.isinf(i.lo):
        checks.append(rel_ext("le" if i.lo_closed else "lt", make_real(i.lo), a, depth=depth))
    if not math.isinf(i.hi):
        checks.append(rel_ext("le" if i.hi_closed else "lt", a, make_real(i.hi), depth=depth))
    return V.conjoin(checks)


def is_interior_point(x, B: DomainDescriptor) -> Verdict:
    """``x + del`` and ``x - del`` both stay in ``B``."""
    if not isinstance(B, DomainDescriptor):
        raise UnsupportedSet(f"unsupported set descriptor {B!r}")
    xv = make_real(x)
    return V.conjoin(
        [contains(B, xv), contains(B, add(xv, DEL)), contains(B, sub(xv, DEL))]
    )
