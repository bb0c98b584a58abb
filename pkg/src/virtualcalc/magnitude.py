"""Relative magnitude: ``O(a)``, negligibility and leading-order comparison."""
from __future__ import annotations

import enum
from dataclasses import dataclass

from . import verdict as V
from .classify import is_finite, is_infinitesimal
from .errors import NotInvertible
from .series import Scalar
from .verdict import Verdict
from .vnum import Series, _coerce, div, rel_ext


def _require_invertible(a, depth):
    v = rel_ext("neq", a, 0, depth=depth)
    if not v.holds:
        raise NotInvertible(f"divisor is not decidably nonzero ({v.label})")


def in_order_of(b, a, depth: int | None = None) -> Verdict:
    """``b`` is in ``O(a)``: the quotient ``b/a`` is finite."""
    a, b = _coerce(a), _coerce(b)
    _require_invertible(a, depth)
    return is_finite(div(b, a), depth)


def negligible(g, a, depth: int | None = None, noise=None) -> Verdict:
    """``g << a``: the quotient ``g/a`` is infinitesimal.

    ``noise`` is passed on to :func:`is_infinitesimal` for computed sequences.
    """
    a, g = _coerce(a), _coerce(g)
    _require_invertible(a, depth)
    return is_infinitesimal(div(g, a), depth, noise=noise)


@dataclass(frozen=True)
class OrderProfile:
    valuation_even: int | None
    valuation_odd: int | None
    leading: tuple[Scalar | None, Scalar | None]

    @property
    def valuations(self) -> tuple[int | None, int | None]:
        return self.valuation_even, self.valuation_odd


def leading_order(a) -> OrderProfile:
    a = _coerce(a)
    if not isinstance(a, Series):
        raise TypeError("leading_order needs a series-tier value")
    le, lo = a.even.lead(), a.odd.lead()
    return OrderProfile(
        le and le[0], lo and lo[0], (le and le[1], lo and lo[1])
    )


class Magnitude(enum.Enum):
    SMALLER = "Smaller"
    SAME = "SameOrder"
    LARGER = "Larger"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class MagnitudeComparison:
    outcome: Magnitude
    verdict: Verdict


def compare_magnitude(e, d, depth: int | None = None) -> MagnitudeComparison:
    e, d = _coerce(e), _coerce(d)
    _require_invertible(e, depth)
    _require_invertible(d, depth)
    smaller = negligible(e, d, depth)
    if smaller.holds:
        return MagnitudeComparison(Magnitude.SMALLER, smaller)
    larger = negligible(d, e, depth)
    if larger.holds:
        return MagnitudeComparison(Magnitude.LARGER, larger)
    same = V.conjoin([in_order_of(e, d, depth), in_order_of(d, e, depth)])
    if same.holds:
        return MagnitudeComparison(Magnitude.SAME, same)
    decided = all(v.fails for v in (smaller, larger, same))
    depth_seen = max(smaller.depth, larger.depth, same.depth)
    truth = V.Truth.HOLDS if decided else V.Truth.UNKNOWN
    return MagnitudeComparison(Magnitude.INCOMPARABLE, Verdict(truth, depth_seen))
