"""Derivatives as standard parts of infinitesimal quotients, and continuity.

Every tester quantifies over a finite probe family instead of all neighbours
of ``x``; a Holds therefore means "holds for the probes, confirmed by the
symbolic derivative" and is capped at Unknown when no symbolic derivative
exists.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from . import realfun as R
from . import verdict as V
from .classify import (
    CAUCHY_SPREAD,
    is_infinitesimal,
    is_interior_point,
    near,
    neighbour,
    standard_part,
)
from .config import current
from .errors import (
    CenterOnBoundary,
    DomainError,
    NoStandardPart,
    NonSmoothNode,
    NotDerivable,
    NotInterior,
    NotInvertible,
)
from .lift import extend_apply
from .realfun import DomainDescriptor
from .series import Laurent, scalar
from .verdict import Truth, Verdict
from .vnum import (
    DEL,
    Series,
    Seq,
    VirtualNumber,
    add,
    alternate_sign,
    div,
    make_real,
    mul,
    power,
    rel_ext,
    sample,
    schedule,
    sub,
    to_seq,
)

PROBE_DEPTH = 30
EPS = float(np.finfo(float).eps)
NOISE = 64 * EPS


@dataclass(frozen=True)
class InfinitesimalFamily:
    probes: tuple[tuple[str, VirtualNumber], ...]

    def __post_init__(self):
        for name, p in self.probes:
            if not neighbour(p, 0, PROBE_DEPTH).holds:
                raise ValueError(f"probe {name} is not an invertible infinitesimal")

    @classmethod
    def default(cls) -> InfinitesimalFamily:
        return _DEFAULT_FAMILY

    def __iter__(self):
        return iter(self.probes)


_DEFAULT_FAMILY = InfinitesimalFamily(
    (
        ("del", DEL),
        ("del^2", power(DEL, 2)),
        ("-del", sub(make_real(0), DEL)),
        ("(+-)del", alternate_sign(DEL)),
        ("3*del/2", mul(make_real(Fraction(3, 2)), DEL)),
    )
)


def _point(x):
    return make_real(scalar(x))


def _tol(*values) -> float:
    if any(isinstance(v, float) for v in values):
        return current().tol
    return 0.0


def _close(a, b, tol) -> bool:
    if a == b:
        return True
    return abs(float(a) - float(b)) <= tol * max(1.0, abs(float(b)))


def _std(a: VirtualNumber):
    return standard_part(a, PROBE_DEPTH)


def require_interior(f: R.Expr, x, domain: DomainDescriptor | None = None) -> None:
    """Raise :class:`NotInterior` unless ``x`` is interior to the domain of ``f``.

    With a descriptor the check is exact; otherwise ``f`` must be defined at
    ``x`` and at ``x + del`` and ``x - del``.
    """
    if domain is not None:
        v = is_interior_point(x, domain)
        if not v.holds:
            raise NotInterior(f"{x} is not an interior point of {domain} ({v.label})")
        return
    try:
        R.eval_real(f, x)
        for side in (DEL, sub(make_real(0), DEL)):
            _touch(extend_apply(f, add(_point(x), side)))
    except (DomainError, NotInvertible) as exc:
        raise NotInterior(f"{x} is not interior to the domain of {R.to_text(f)}: {exc}") from exc


def _touch(a: VirtualNumber) -> None:
    """Force evaluation of sequence-tier values at the schedule tail."""
    if isinstance(a, Seq):
        for n in schedule()[-4:]:
            sample(a, n)


# -- derivatives -----------------------------------------------------------
@dataclass
class DerivativeReport:
    value: float | Fraction | None
    per_probe: dict[str, object]
    verdict: Verdict
    oracle_value: float | None

    def to_dict(self) -> dict:
        return {
            "value": None if self.value is None else float(self.value),
            "per_probe": {k: None if v is None else float(v) for k, v in self.per_probe.items()},
            "verdict": self.verdict.label,
            "oracle": self.oracle_value,
        }


def difference_quotient(f: R.Expr, x, dx: VirtualNumber) -> VirtualNumber:
    """``(f(x + dx) - f(x)) / dx``."""
    fx = extend_apply(f, _point(x))
    return div(sub(extend_apply(f, add(_point(x), dx)), fx), dx)


def derivative_at(
    f: R.Expr,
    x,
    family: InfinitesimalFamily | None = None,
    domain: DomainDescriptor | None = None,
) -> DerivativeReport:
    """Common standard part of the difference quotients over the probe family."""
    require_interior(f, x, domain)
    family = family or InfinitesimalFamily.default()
    per_probe: dict[str, object] = {}
    sampled = False
    for name, dx in family:
        q = difference_quotient(f, x, dx)
        sampled = sampled or isinstance(q, Seq)
        try:
            per_probe[name] = _std(q)
        except NoStandardPart as exc:
            per_probe[name] = None
            raise NotDerivable(f"quotient for probe {name} has no standard part: {exc}", per_probe)
    values = list(per_probe.values())
    first = values[0]
    tol = CAUCHY_SPREAD if sampled else _tol(*values)
    if not all(_close(v, first, tol) for v in values):
        raise NotDerivable("probe quotients approach different reals", per_probe)
    oracle = _oracle(f, x)
    if oracle is None:
        verdict = V.UNKNOWN
    else:
        ok = _close(first, oracle, max(tol, current().tol))
        verdict = V.HOLDS if ok else V.FAILS
    return DerivativeReport(first, per_probe, verdict, oracle)


def _oracle(f, x) -> float | None:
    try:
        return R.eval_real(R.diff_expr(f), x)
    except (NonSmoothNode, DomainError):
        return None


# -- differentiability -------------------------------------------------------
_PAIRS = (
    ("x+del, x+del+del^2", DEL, add(DEL, power(DEL, 2))),
    ("x-del, x-del-del^2", sub(make_real(0), DEL), sub(sub(make_real(0), DEL), power(DEL, 2))),
    ("x+del, x+2del", DEL, mul(make_real(2), DEL)),
    ("x(+-)del, x(+-)del+del^2", alternate_sign(DEL), add(alternate_sign(DEL), power(DEL, 2))),
)


@dataclass
class DifferentiabilityReport:
    verdict: Verdict
    derivative: float | None
    pairs: dict[str, str] = field(default_factory=dict)
    derivative_continuity: str | None = None

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.label,
            "derivative": None if self.derivative is None else float(self.derivative),
            "pairs": self.pairs,
            "derivative_continuity": self.derivative_continuity,
        }


def check_differentiable_at(f: R.Expr, x, domain: DomainDescriptor | None = None) -> Verdict:
    return differentiability_report(f, x, domain).verdict


def differentiability_report(
    f: R.Expr, x, domain: DomainDescriptor | None = None
) -> DifferentiabilityReport:
    """(a) two-point quotients near ``x`` approach ``f'(x)``; (b) ``f'`` is continuous at ``x``."""
    try:
        m = derivative_at(f, x, domain=domain).value
    except NotDerivable:
        return DifferentiabilityReport(V.FAILS, None)
    mv = make_real(m)
    pairs = {}
    checks = []
    for name, da, db in _PAIRS:
        a, b = add(_point(x), da), add(_point(x), db)
        q = div(sub(extend_apply(f, a), extend_apply(f, b)), sub(a, b))
        v = near(q, mv, PROBE_DEPTH) if isinstance(q, Series) else _near_sampled(q, m)
        pairs[name] = v.label
        checks.append(v)
    two_point = V.conjoin(checks)
    try:
        cont = check_continuity_at(R.diff_expr(f), x)
        label = cont.label
    except NonSmoothNode:
        cont, label = V.UNKNOWN, None
    verdict = V.conjoin([two_point, cont])
    return DifferentiabilityReport(verdict, m, pairs, label)


def _near_sampled(q: VirtualNumber, m) -> Verdict:
    m = float(m)
    return is_infinitesimal(
        sub(q, make_real(m)),
        PROBE_DEPTH,
        noise=lambda n: NOISE * (abs(sample(q, n)) + abs(m)) * n,
    )


def lemma_check(f: R.Expr, x, alpha: VirtualNumber | None = None) -> Verdict:
    """A neighbour ``beta`` of ``alpha`` with ``(f(beta) - f(alpha))/(beta - alpha)`` near ``f'(alpha)``.

    The witness is ``beta = alpha + del^(T/2)`` with ``T`` the truncation order.
    """
    alpha = alpha if alpha is not None else add(_point(x), DEL)
    beta = add(alpha, power(DEL, max(1, current().trunc // 2)))
    q = div(sub(extend_apply(f, beta), extend_apply(f, alpha)), sub(beta, alpha))
    slope = extend_apply(R.diff_expr(f), alpha)
    return V.conjoin([neighbour(alpha, beta, PROBE_DEPTH), near(q, slope, PROBE_DEPTH)])


# -- Taylor ------------------------------------------------------------------
@dataclass
class TaylorReport:
    coefficients: list[float]
    remainder: Verdict
    remainder_valuation: int | None
    remainder_text: str

    def to_dict(self) -> dict:
        return {
            "coefficients": [float(c) for c in self.coefficients],
            "remainder": self.remainder.label,
            "remainder_valuation": self.remainder_valuation,
            "remainder_series": self.remainder_text,
        }


def taylor_expand(f: R.Expr, x, n: int, domain: DomainDescriptor | None = None) -> TaylorReport:
    """Coefficients ``f^(k)(x)/k!`` and the check that the remainder is ``O(del^(n+1))``."""
    from .normal_form import format_virtual

    if n < 0:
        raise ValueError("order must be non-negative")
    require_interior(f, x, domain)
    coeffs, g = [], f
    for k in range(n + 1):
        coeffs.append(R.eval_real(g, x) / math.factorial(k))
        g = R.diff_expr(g)
    lifted = extend_apply(f, add(_point(x), DEL))
    if not isinstance(lifted, Series):
        raise NonSmoothNode("the expansion at x + del left the series tier")
    poly = Laurent.from_terms(enumerate(coeffs))
    rem = sub(lifted, Series(poly, poly))
    flags, vals = [], []
    for lp in rem.branches:
        if lp.terms:
            vals.append(lp.valuation)
            flags.append(lp.valuation >= n + 1)
        elif lp.trunc is None:
            flags.append(True)
        else:
            flags.append(True if lp.trunc >= n else None)
    val = min(vals) if vals else None
    verdict = V.conjoin(V.of(f_) for f_ in flags)
    return TaylorReport(coeffs, verdict, val, format_virtual(rem))


# -- continuity --------------------------------------------------------------
def check_continuity_at(
    f: R.Expr, x, family: InfinitesimalFamily | None = None
) -> Verdict:
    """``f(x + eps)`` is near ``f(x)`` for every probe, plus a sampled ``(+-)del`` probe."""
    fx_real = R.eval_real(f, x)
    fx = extend_apply(f, _point(x))
    family = family or InfinitesimalFamily.default()
    out = []
    for _, eps in family:
        try:
            val = extend_apply(f, add(_point(x), eps))
        except CenterOnBoundary:
            out.append(V.UNKNOWN)
            continue
        if isinstance(val, Series):
            out.append(near(val, fx, PROBE_DEPTH))
        else:
            out.append(_near_value(val, fx_real))
    osc = to_seq(add(_point(x), alternate_sign(DEL)))
    out.append(_near_value(extend_apply(f, osc), fx_real))
    return V.conjoin(out)


def _near_value(val: VirtualNumber, target: float) -> Verdict:
    return is_infinitesimal(
        sub(val, make_real(target)),
        PROBE_DEPTH,
        noise=lambda n: NOISE * (abs(sample(val, n)) + abs(target)),
    )


# -- uniform continuity --------------------------------------------------------
UC_DEPTH = 20
UC_GRID = 64
UC_GAP = 1e-3
UC_WINDOW = 16.0


@dataclass
class UniformReport:
    verdict: Verdict
    witness: dict | None
    families: int

    def to_dict(self) -> dict:
        return {"verdict": self.verdict.label, "witness": self.witness, "families": self.families}


def _families(A: DomainDescriptor):
    """Yield ``(label, n -> a_n, direction)`` sweeping each component."""
    for comp in A.intervals:
        lo = comp.lo if not math.isinf(comp.lo) else -UC_WINDOW
        hi = comp.hi if not math.isinf(comp.hi) else UC_WINDOW
        if math.isinf(comp.hi):
            yield "a_n = n", (lambda n: n.astype(float)), 1.0
        else:
            yield f"a_n = {comp.hi!r} - 2/n", (lambda n, h=comp.hi: h - 2.0 / n), 1.0
        if math.isinf(comp.lo):
            yield "a_n = -n", (lambda n: -n.astype(float)), 1.0
        else:
            yield f"a_n = {comp.lo!r} + 1/n", (lambda n, l=comp.lo: l + 1.0 / n), 1.0
        grid = np.linspace(lo, hi, UC_GRID)
        for j, a in enumerate(grid):
            a = float(a)
            inside_lo = a > comp.lo or (comp.lo_closed and a == comp.lo)
            inside_hi = a < comp.hi or (comp.hi_closed and a == comp.hi)
            if not (inside_lo and inside_hi):
                continue
            direction = 1.0 if j < UC_GRID - 1 or math.isinf(comp.hi) else -1.0
            yield f"a_n = {a!r}", (lambda n, a=a: np.full(len(n), a)), direction


def check_uniform_continuity(
    f: R.Expr, A: DomainDescriptor, depth: int = UC_DEPTH
) -> UniformReport:
    """Probe neighbour pairs ``(a_n, a_n + 1/n)`` swept across ``A``.

    Fails, with the offending family as witness, when ``|f(a_n) - f(b_n)|``
    exceeds ``1e-3`` at each of the last five schedule indices without
    halving across them.
    """
    program = R.compile_program(f)
    pts = np.asarray(schedule(depth), dtype=np.int64)
    top = int(pts[-1])
    count = 0
    worst = None
    for label, rule, direction in _families(A):
        count += 1
        a = rule(pts)
        b = a + direction / pts
        fa = kernels.eval_points(program, a)
        fb = kernels.eval_points(program, b)
        gap = np.abs(fa - fb)
        if np.isnan(gap[-5:]).any():
            bad = int(pts[np.flatnonzero(np.isnan(gap))[-1]])
            raise DomainError(f"{R.to_text(f)} undefined along {label} at index {bad}", f, bad)
        # a gap of order f'(a)/n still shrinks between the first and last of
        # the five; only a gap that has stopped shrinking is a witness
        if np.all(gap[-5:] > UC_GAP) and gap[-1] >= gap[-5] / 2:
            witness = {"family": label, "pair": "(a_n, a_n + 1/n)", "gap": float(gap[-1]),
                       "index": top}
            return UniformReport(Verdict(Truth.FAILS, top, top), witness, count)
        if worst is None or gap[-1] > worst[1]:
            worst = (label, float(gap[-1]))
    return UniformReport(Verdict(Truth.HOLDS, top), None, count)


# -- sin(eps)/eps -----------------------------------------------------------------
@dataclass
class SineQuotientReport:
    verdict: Verdict
    near_one: Verdict
    above_cos: Verdict
    below_one: Verdict

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.label,
            "near_one": self.near_one.label,
            "cos_lt_quotient": self.above_cos.label,
            "quotient_lt_one": self.below_one.label,
        }


def sine_quotient_check(eps: VirtualNumber) -> Verdict:
    return sine_quotient_report(eps).verdict


def sine_quotient_report(eps: VirtualNumber) -> SineQuotientReport:
    """``sin(eps)/eps`` is near 1, squeezed between ``cos(eps)`` and 1."""
    if not neighbour(eps, 0, PROBE_DEPTH).holds:
        raise NotInvertible("eps must be an invertible infinitesimal")
    q = div(extend_apply(R.Call("sin", R.X), eps), eps)
    c = extend_apply(R.Call("cos", R.X), eps)
    close = near(q, 1, PROBE_DEPTH)
    low = rel_ext("lt", c, q, depth=PROBE_DEPTH)
    high = rel_ext("lt", q, 1, depth=PROBE_DEPTH)
    return SineQuotientReport(V.conjoin([close, low, high]), close, low, high)
