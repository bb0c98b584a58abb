"""Riemann integration over infinitely fine tagged partitions.

A Riemann sum taken at ``n = n0 * 2**k`` cells is one index of a virtual
number; the norm ``|b - a| / n`` is infinitesimal along that index.  A
function is reported integrable when the sums of four tag schemes are
mutually near, i.e. when their spread decays along the levels toward a
limit below the decision threshold.  The value is
the Richardson extrapolation of the two deepest midpoint sums.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from functools import lru_cache
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from . import realfun as R
from .classify import DECAY_TARGET, TAIL, infinitesimal_tail
from .config import current
from .errors import DegenerateInterval, DomainError, NotPositive
from .magnitude import negligible
from .verdict import Truth, Verdict
from .vnum import from_rule, sample

N0 = 8
LEVELS = 18  # n runs from 8 to 8 * 2**17 cells
MAX_LEVELS = 20
INWARD = 1e-3  # Left/Right tags sit this fraction of a cell inside it
EPS = np.finfo(float).eps


class TagKind(enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"
    MIDPOINT = "Midpoint"
    RANDOM = "SeededRandom"


@dataclass(frozen=True)
class TagScheme:
    kind: TagKind
    seed: int | None = None

    @classmethod
    def seeded(cls, seed: int) -> TagScheme:
        return cls(TagKind.RANDOM, seed)

    def __str__(self):
        return self.kind.value if self.seed is None else f"{self.kind.value}({self.seed})"

    def tags(self, xs: np.ndarray) -> np.ndarray:
        lo, hi = xs[:-1], xs[1:]
        w = hi - lo
        if self.kind is TagKind.LEFT:
            return lo + w * INWARD
        if self.kind is TagKind.RIGHT:
            return hi - w * INWARD
        if self.kind is TagKind.MIDPOINT:
            return lo + w / 2
        u = np.random.default_rng(self.seed).random(len(w))
        return lo + w * (INWARD + (1 - 2 * INWARD) * u)


LEFT = TagScheme(TagKind.LEFT)
RIGHT = TagScheme(TagKind.RIGHT)
MIDPOINT = TagScheme(TagKind.MIDPOINT)


def default_schemes(seed: int | None = None) -> tuple[TagScheme, ...]:
    return (LEFT, RIGHT, MIDPOINT, TagScheme.seeded(current().seed if seed is None else seed))


@dataclass(frozen=True, eq=False)
class ExtendedPartition:
    a: float
    b: float
    points: np.ndarray
    tags: np.ndarray
    norm: float

    def __post_init__(self):
        xs, zs = self.points, self.tags
        if len(xs) != len(zs) + 1 or len(zs) < 1:
            raise ValueError("a partition needs n + 1 points and n tags")
        if not (np.all(xs[:-1] < zs) and np.all(zs < xs[1:])):
            raise ValueError("tags must lie strictly inside their cells")

    @property
    def cells(self) -> int:
        return len(self.tags)


def make_partition(a, b, n: int, scheme: TagScheme = MIDPOINT) -> ExtendedPartition:
    """Uniform partition of the interval between ``a`` and ``b`` into ``n`` cells."""
    if n < 1:
        raise ValueError("need at least one cell")
    a, b = float(a), float(b)
    if a == b:
        raise DegenerateInterval("a == b: the integral is 0 without a partition")
    lo, hi = min(a, b), max(a, b)
    xs = np.linspace(lo, hi, n + 1)
    return ExtendedPartition(a, b, xs, scheme.tags(xs), (hi - lo) / n)


def riemann_sum(f: R.Expr, p: ExtendedPartition, program=None) -> float:
    total, _, bad = _sum(f, p, program)
    return total


def _sum(f, p, program=None):
    program = program or R.compile_program(f)
    total, mass, bad = kernels.riemann_sum(program, p.points, p.tags)
    if bad >= 0:
        z = float(p.tags[bad])
        raise DomainError(f"{R.to_text(f)} is undefined at tag {z!r}", f, bad)
    return total, mass, bad


@dataclass
class IntegralReport:
    value: float | None
    verdict: Verdict
    per_scheme: dict[str, list[float]] = field(default_factory=dict)
    depth: int = 0
    spread: list[float] = field(default_factory=list)
    cells: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "verdict": self.verdict.label,
            "depth": self.depth,
            "per_scheme": {k: v[-4:] for k, v in self.per_scheme.items()},
            "relative_spread": self.spread[-4:],
        }


def integrate(
    f: R.Expr,
    a,
    b,
    levels: int | None = None,
    n0: int = N0,
    schemes: tuple[TagScheme, ...] | None = None,
) -> IntegralReport:
    """Integral of ``f`` from ``a`` to ``b`` with an integrability verdict.

    Levels beyond ``levels`` (up to ``MAX_LEVELS``) are added while the spread
    is still decaying but has not yet reached the decision threshold.
    """
    a, b = float(a), float(b)
    if a == b:
        return IntegralReport(0.0, Verdict(Truth.HOLDS), depth=0)
    if b < a:
        rep = integrate(f, b, a, levels, n0, schemes)
        return IntegralReport(
            None if rep.value is None else -rep.value,
            rep.verdict,
            {k: [-s for s in v] for k, v in rep.per_scheme.items()},
            rep.depth,
            rep.spread,
            rep.cells,
        )
    schemes = schemes or default_schemes()
    program = R.compile_program(f)
    names = [str(s) for s in schemes]
    sums = {name: [] for name in names}
    spread, limit, floors, cells = [], [], [], []
    cap = levels if levels is not None else LEVELS
    k = 0
    while True:
        n = n0 * 2**k
        row, masses = [], []
        for s, name in zip(schemes, names):
            total, mass, _ = _sum(f, make_partition(a, b, n, s), program)
            sums[name].append(total)
            row.append(total)
            masses.append(mass)
        # spreads are taken relative to the absolute mass (at least 1), so the
        # verdict does not depend on the scale of f
        scale = max(1.0, max(masses))
        cells.append(n)
        spread.append((max(row) - min(row)) / scale)
        floors.append(8 * EPS * n * max(masses) / scale)
        if k:
            # spread of 2*S(2n) - S(n): what the spread tends to once the
            # first-order error of the Left/Right tags is cancelled
            ext = [2 * sums[name][-1] - sums[name][-2] for name in names]
            limit.append((max(ext) - min(ext)) / scale)
        k += 1
        if k < cap:
            continue
        verdict = infinitesimal_tail(spread, n, floors)
        decaying = all(x > y for x, y in zip(spread[-TAIL:], spread[-TAIL + 1 :]))
        if verdict.unknown and decaying and limit[-1] < DECAY_TARGET:
            verdict = Verdict(Truth.HOLDS, n)
        if verdict.fails and decaying:
            verdict = Verdict(Truth.UNKNOWN, n)  # still shrinking: too shallow to refute
        if levels is None and k < MAX_LEVELS:
            # refine while undecided, or while the raw sums still differ
            if decaying and (verdict.unknown or spread[-1] > DECAY_TARGET):
                continue
        break
    mid = sums[str(MIDPOINT)] if str(MIDPOINT) in sums else sums[names[0]]
    value = (4 * mid[-1] - mid[-2]) / 3 if len(mid) > 1 else mid[-1]
    return IntegralReport(
        value if not verdict.fails else None, verdict, sums, cells[-1], spread, cells
    )


# -- fundamental theorem ---------------------------------------------------
FTC_DEPTH = 24
ELEMENT_LEVELS = 5
NOISE = 256 * EPS  # rounding envelope of an increment quotient, relative


@dataclass
class FTCReport:
    verdict: Verdict
    ratio: float
    depth: int


def _increment(f: R.Expr, x: float, levels: int = ELEMENT_LEVELS):
    """``n -> (ds, dx)`` where ``ds`` integrates ``f`` over ``[x, x + dx]``.

    ``dx`` is the representable width nearest to ``1/n``; using it instead of
    ``1/n`` keeps endpoint rounding out of the quotients.
    """

    @lru_cache(maxsize=None)
    def step(n):
        hi = x + 1.0 / n
        return integrate(f, x, hi, levels=levels).value, hi - x

    return step


def ftc_check(f: R.Expr, a, x, depth: int = FTC_DEPTH) -> FTCReport:
    """``ds - f(x) dx`` is negligible against ``dx`` for ``s(t) = integral from a to t``.

    The increment ``s(x + dx) - s(x)`` is computed as the integral over
    ``[x, x + dx]`` (additivity), which avoids subtracting two nearly equal
    integrals.
    """
    a, x = float(a), float(x)
    integrate(f, a, x, levels=6)  # the integral function must exist up to x
    fx = R.eval_real(f, x)
    step = _increment(f, x)
    error = from_rule(lambda n: step(n)[0] - fx * step(n)[1], f"ds - f(x)dx for {R.to_text(f)}")
    dx = from_rule(lambda n: step(n)[1], "dx")

    def noise(n):
        ds, w = step(n)
        return NOISE * (abs(ds / w) + abs(fx))

    verdict = negligible(error, dx, depth, noise=noise)
    top = verdict.depth
    return FTCReport(verdict, abs(sample(error, top) / sample(dx, top)), top)


# -- geometry --------------------------------------------------------------
class Measure(enum.Enum):
    AREA = "Area"
    VOLUME = "VolumeRevolution"
    ARC_LENGTH = "ArcLength"
    SURFACE = "SurfaceRevolution"


_PI = R.Named("pi")
TWO_PI = R.BinOp("*", R.Const(Fraction(2)), _PI)


def integrand(kind: Measure, f: R.Expr) -> R.Expr:
    if kind is Measure.AREA:
        return f
    if kind is Measure.VOLUME:
        return R.BinOp("*", _PI, R.Pow(f, 2))
    stretch = R.Call("sqrt", R.BinOp("+", R.Const(Fraction(1)), R.Pow(R.diff_expr(f), 2)))
    if kind is Measure.ARC_LENGTH:
        return stretch
    return R.BinOp("*", R.BinOp("*", TWO_PI, f), stretch)


def _check_positive(f, a, b, samples: int = 1025):
    for t in np.linspace(min(a, b), max(a, b), samples):
        if R.eval_real(f, float(t)) <= 0:
            raise NotPositive(f"{R.to_text(f)} is not positive at {float(t)!r}", f)


def geom_measure(kind: Measure | str, f: R.Expr, a, b) -> IntegralReport:
    kind = Measure(kind)
    a, b = float(a), float(b)
    if kind is Measure.SURFACE:
        _check_positive(f, a, b)
    return integrate(integrand(kind, f), a, b)


@dataclass
class ElementCheck:
    """Negligibility of ``element - approximation`` against ``element`` at one point."""

    kind: Measure
    approximation: str
    verdict: Verdict
    ratio: float


def element_check(
    kind: Measure | str, f: R.Expr, x, wrong: bool = False, depth: int = FTC_DEPTH
) -> ElementCheck:
    """Test ``d(measure) = integrand(x) dx`` (or the naive formula when ``wrong``).

    The naive formulas drop the slope factor: ``dl = dx`` and
    ``dS = 2 pi f(x) dx``.
    """
    kind = Measure(kind)
    x = float(x)
    body = integrand(kind, f)
    if wrong:
        if kind is Measure.ARC_LENGTH:
            approx, label = R.Const(Fraction(1)), "dx"
        elif kind is Measure.SURFACE:
            approx, label = R.BinOp("*", TWO_PI, f), "2*pi*f(x)*dx"
        else:
            raise ValueError("only arc length and surface have a naive formula")
    else:
        approx, label = body, f"({R.to_text(body)})*dx"
    c = R.eval_real(approx, x)
    step = _increment(body, x)
    d = from_rule(lambda n: step(n)[0], f"d{kind.value}")
    error = from_rule(lambda n: step(n)[0] - c * step(n)[1], f"d{kind.value} - {label}")

    def noise(n):
        ds, w = step(n)
        return NOISE * (1 + abs(c * w / ds))

    verdict = negligible(error, d, depth, noise=noise)
    top = verdict.depth
    return ElementCheck(kind, label, verdict, abs(sample(error, top) / sample(d, top)))
