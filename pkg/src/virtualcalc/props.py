"""Named suites of executable propositions over random series-tier values.

Each proposition draws seeded instances, checks that its hypotheses hold and
then asserts the conclusion.  A proposition marked ``expect_fail`` is a
known counterexample: it passes only when the conclusion is refuted on every
instance.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import calculus
from . import realfun as R
from . import verdict as V
from .classify import (
    Finitude,
    classify,
    cmp_reals,
    confront,
    is_finite,
    is_infinite,
    is_infinitesimal,
    near,
    standard_part,
    Side,
)
from .errors import UnknownSuite
from .integrate import Measure, element_check, ftc_check
from .lift import extend_apply
from .magnitude import in_order_of, negligible
from .normal_form import format_virtual
from .vnum import (
    DEL,
    INF,
    add,
    alternate_sign,
    div,
    inv,
    make_real,
    mul,
    power,
    sub,
)

INSTANCES = 200


# -- generators ----------------------------------------------------------------
def _q(rng: random.Random, nonzero: bool = False, span: int = 9) -> Fraction:
    while True:
        c = Fraction(rng.randint(-span, span), rng.randint(1, 6))
        if c or not nonzero:
            return c


def real(rng):
    return make_real(_q(rng))


def nonzero_real(rng):
    return make_real(_q(rng, nonzero=True))


def infinitesimal(rng, allow_zero: bool = True):
    """A polynomial in del with no constant term, sometimes parity-split."""
    terms = [mul(make_real(_q(rng)), power(DEL, k)) for k in range(1, rng.randint(1, 3) + 1)]
    out = terms[0]
    for t in terms[1:]:
        out = add(out, t)
    if rng.random() < 0.25:
        out = add(out, alternate_sign(mul(make_real(_q(rng, True)), power(DEL, rng.randint(1, 3)))))
    if not allow_zero and not _nonzero(out):
        return mul(make_real(_q(rng, True)), DEL)
    return out


def _nonzero(a) -> bool:
    return all(lp.terms for lp in a.branches)


def finite(rng):
    """A real plus an infinitesimal, or an oscillating bounded value like ``(+-)2``."""
    if rng.random() < 0.2:
        return add(real(rng), alternate_sign(nonzero_real(rng)))
    return add(real(rng), infinitesimal(rng))


def above_r(rng):
    lead = mul(make_real(abs(_q(rng, True))), power(INF, rng.randint(1, 3)))
    return add(lead, finite(rng))


def below_r(rng):
    lead = mul(make_real(-abs(_q(rng, True))), power(INF, rng.randint(1, 3)))
    return add(lead, finite(rng))


def infinite(rng):
    pick = rng.random()
    if pick < 0.4:
        return above_r(rng)
    if pick < 0.8:
        return below_r(rng)
    return add(alternate_sign(mul(make_real(_q(rng, True)), power(INF, rng.randint(1, 2)))), finite(rng))


def near_pair(rng, base=finite):
    a = base(rng)
    return a, add(a, infinitesimal(rng))


# -- propositions ----------------------------------------------------------------
@dataclass
class PropResult:
    suite: str
    name: str
    instances: int
    passed: int
    expect_fail: bool = False
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.passed == self.instances

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "proposition": self.name,
            "instances": self.instances,
            "passed": self.passed,
            "expect_fail": self.expect_fail,
            "ok": self.ok,
            "counterexample": self.counterexample,
        }


@dataclass
class Proposition:
    name: str
    check: Callable[[random.Random], tuple[V.Verdict, tuple]]
    expect_fail: bool = False
    instances: int | None = None

    def run(self, suite: str, rng: random.Random, instances: int) -> PropResult:
        n = self.instances or instances
        passed, witness = 0, None
        for _ in range(n):
            verdict, args = self.check(rng)
            good = verdict.fails if self.expect_fail else verdict.holds
            if good:
                passed += 1
            elif witness is None:
                witness = f"{verdict.label} at " + ", ".join(_render(a) for a in args)
        return PropResult(suite, self.name, n, passed, self.expect_fail, witness)


def _render(a) -> str:
    if isinstance(a, (R.Const, R.BinOp, R.Call, R.Pow, R.Var, R.Neg)):
        return R.to_text(a)
    if isinstance(a, (int, float, Fraction)):
        return R.format_scalar(Fraction(a) if isinstance(a, int) else a)
    try:
        return format_virtual(a)
    except Exception:
        return repr(a)


def _given(hypotheses, conclusion: Callable[[], V.Verdict]) -> V.Verdict:
    """The conclusion, or Unknown when a generated instance misses a hypothesis."""
    hyp = V.conjoin(hypotheses)
    return conclusion() if hyp.holds else V.UNKNOWN


def _prop(name, expect_fail=False, instances=None):
    def wrap(fn):
        return Proposition(name, fn, expect_fail, instances)

    return wrap


# finitude -----------------------------------------------------------------
@_prop("sum of infinitesimals is infinitesimal")
def _p_sum_inf(rng):
    e, d = infinitesimal(rng), infinitesimal(rng)
    return _given([is_infinitesimal(e), is_infinitesimal(d)], lambda: is_infinitesimal(add(e, d))), (e, d)


@_prop("infinitesimal times finite is infinitesimal")
def _p_inf_fin(rng):
    e, lam = infinitesimal(rng), finite(rng)
    return _given([is_infinitesimal(e), is_finite(lam)], lambda: is_infinitesimal(mul(e, lam))), (e, lam)


@_prop("sum and product of finites are finite")
def _p_fin(rng):
    a, b = finite(rng), finite(rng)
    return _given([is_finite(a), is_finite(b)],
                  lambda: V.conjoin([is_finite(add(a, b)), is_finite(mul(a, b))])), (a, b)


@_prop("infinite plus finite is infinite")
def _p_inf_plus(rng):
    w, lam = infinite(rng), finite(rng)
    return _given([is_infinite(w), is_finite(lam)], lambda: is_infinite(add(w, lam))), (w, lam)


@_prop("infinite times nonzero real is infinite")
def _p_inf_times(rng):
    w, x = infinite(rng), nonzero_real(rng)
    return _given([is_infinite(w)], lambda: is_infinite(mul(w, x))), (w, x)


@_prop("inverse of a value beyond R is infinitesimal")
def _p_inv(rng):
    w = above_r(rng) if rng.random() < 0.5 else below_r(rng)
    return is_infinitesimal(inv(w)), (w,)


def _side(a, side):
    c = cmp_reals(a)
    return V.of(c.side is side) if c.verdict.holds else V.UNKNOWN


@_prop("sum and product of values above R")
def _p_above(rng):
    w, p = above_r(rng), above_r(rng)
    return V.conjoin([_side(add(w, p), Side.ABOVE), _side(mul(w, p), Side.ABOVE)]), (w, p)


@_prop("values below R: sum below, product above")
def _p_below(rng):
    w, p = below_r(rng), below_r(rng)
    return V.conjoin([_side(add(w, p), Side.BELOW), _side(mul(w, p), Side.ABOVE)]), (w, p)


@_prop("above R times below R is below R")
def _p_mixed(rng):
    w, p = above_r(rng), below_r(rng)
    return _side(mul(w, p), Side.BELOW), (w, p)


@_prop("the only infinitesimal real is zero; reals are finite")
def _p_reals(rng):
    x = real(rng)
    small = is_infinitesimal(x)
    zero = standard_part(x) == 0
    return V.conjoin([V.of(small.holds == zero), is_finite(x)]), (x,)


# proximity ----------------------------------------------------------------
@_prop("proximity is reflexive and symmetric")
def _p_refl(rng):
    a, b = near_pair(rng, finite if rng.random() < 0.5 else infinite)
    return V.conjoin([near(a, a), V.of(near(a, b).truth is near(b, a).truth)]), (a, b)


@_prop("proximity is transitive")
def _p_trans(rng):
    a, b = near_pair(rng, finite if rng.random() < 0.5 else infinite)
    c = add(b, infinitesimal(rng))
    return _given([near(a, b), near(b, c)], lambda: near(a, c)), (a, b, c)


_FAMILY = {
    Finitude.INFINITESIMAL: "infinitesimal",
    Finitude.FINITE: "finite",
    Finitude.ABOVE_R: "infinite",
    Finitude.BELOW_R: "infinite",
    Finitude.OSCILLATING: "infinite",
}


@_prop("proximity preserves finitude attributes")
def _p_finitude(rng):
    base = rng.choice([infinitesimal, finite, infinite])
    a, b = near_pair(rng, base)

    def same():
        ca, cb = classify(a), classify(b)
        checks = [V.of(ca.infinite == cb.infinite), V.of(ca.finite == cb.finite),
                  V.of((ca.tag is Finitude.INFINITESIMAL) == (cb.tag is Finitude.INFINITESIMAL))]
        return V.conjoin(checks)

    return _given([near(a, b)], same), (a, b)


@_prop("distinct reals are not near")
def _p_distinct(rng):
    x, y = real(rng), real(rng)
    if standard_part(x) == standard_part(y):
        y = add(y, make_real(1))
    return near(x, y).negate(), (x, y)


@_prop("standard part is unique")
def _p_unique(rng):
    a = add(real(rng), infinitesimal(rng))
    r = standard_part(a)
    other = make_real(r + _q(rng, nonzero=True))
    return V.conjoin([near(a, make_real(r)), near(a, other).negate()]), (a, other)


@_prop("addition preserves proximity")
def _p_add(rng):
    a1, a2 = near_pair(rng, finite if rng.random() < 0.5 else infinite)
    b1, b2 = near_pair(rng, finite if rng.random() < 0.5 else infinite)
    return _given([near(a1, a2), near(b1, b2)], lambda: near(add(a1, b1), add(a2, b2))), (a1, a2, b1, b2)


@_prop("multiplication preserves proximity for finite factors")
def _p_mul(rng):
    l1, l2 = near_pair(rng)
    m1, m2 = near_pair(rng)
    hyp = [near(l1, l2), near(m1, m2), is_finite(l1), is_finite(m2)]
    return _given(hyp, lambda: near(mul(l1, m1), mul(l2, m2))), (l1, l2, m1, m2)


@_prop("an infinite factor breaks product proximity", expect_fail=True)
def _p_counter(rng):
    c, d = _q(rng, nonzero=True), _q(rng, nonzero=True)
    l1, l2 = make_real(1), add(make_real(1), mul(make_real(c), DEL))
    mu = mul(make_real(d), INF)
    return near(mul(l1, mu), mul(l2, mu)), (l1, l2, mu)


@_prop("inversion near a nonzero real")
def _p_inverse(rng):
    x = _q(rng, nonzero=True)
    a = add(make_real(x), infinitesimal(rng))
    return near(inv(a), make_real(1 / x)), (a, x)


# confront -------------------------------------------------------------------
@_prop("confront: between near values is near")
def _p_confront(rng):
    a = finite(rng) if rng.random() < 0.7 else infinite(rng)
    c = add(a, infinitesimal(rng, allow_zero=False))
    t = Fraction(rng.randint(0, 8), 8)
    b = add(a, mul(make_real(t), sub(c, a)))
    res = confront(a, b, c)
    return res.verdict, (a, b, c)


# magnitude ------------------------------------------------------------------
@_prop("infinitesimals are negligible against nonzero reals")
def _p_negl(rng):
    e, x = infinitesimal(rng), nonzero_real(rng)
    return negligible(e, x), (e, x)


@_prop("a finite multiple stays in the order of its base")
def _p_order(rng):
    a = rng.choice([infinite, lambda r: infinitesimal(r, allow_zero=False)])(rng)
    lam = finite(rng)
    return in_order_of(mul(lam, a), a), (a, lam)


@_prop("negligibility is transitive")
def _p_negl_trans(rng):
    k = rng.randint(-2, 1)
    a = mul(make_real(_q(rng, True)), power(DEL, k + 2))
    b = mul(make_real(_q(rng, True)), power(DEL, k + 1))
    c = mul(make_real(_q(rng, True)), power(DEL, k))
    return _given([negligible(a, b), negligible(b, c)], lambda: negligible(a, c)), (a, b, c)


# continuity and derivation ----------------------------------------------------
_POOL = tuple(
    R.parse_expr(s)
    for s in ("sin(x)", "cos(x)", "exp(x)", "x^2", "x^3 - 2*x", "1/(1 + x^2)", "sqrt(x^2 + 1)",
              "3*x + 1")
)


def _fx(rng):
    f, g = rng.choice(_POOL), rng.choice(_POOL)
    x = Fraction(rng.randint(-20, 20), 8)
    probe = rng.choice(calculus.InfinitesimalFamily.default().probes)[1]
    return f, g, x, probe


def _near_at(h: R.Expr, x, probe):
    return near(extend_apply(h, add(make_real(x), probe)), extend_apply(h, make_real(x)))


@_prop("sum of continuous functions is continuous")
def _p_cont_sum(rng):
    f, g, x, e = _fx(rng)
    return _near_at(R.BinOp("+", f, g), x, e), (f, g, x, e)


@_prop("product of continuous functions is continuous")
def _p_cont_mul(rng):
    f, g, x, e = _fx(rng)
    return _near_at(R.BinOp("*", f, g), x, e), (f, g, x, e)


@_prop("quotient of continuous functions is continuous")
def _p_cont_div(rng):
    f, g, x, e = _fx(rng)
    if abs(R.eval_real(g, x)) < 1e-9:
        g = R.BinOp("+", g, R.Const(Fraction(1)))
    return _near_at(R.BinOp("/", f, g), x, e), (f, g, x, e)


@_prop("composition of continuous functions is continuous")
def _p_cont_comp(rng):
    f, g, x, e = _fx(rng)
    return _near_at(R.compose(f, g), x, e), (f, g, x, e)


_LIGHT = calculus.InfinitesimalFamily((("del", DEL), ("-del", sub(make_real(0), DEL))))


def _deriv(h, x):
    return calculus.derivative_at(h, x, family=_LIGHT).value


def _agree(a, b) -> V.Verdict:
    return V.of(abs(float(a) - float(b)) <= 1e-9 * max(1.0, abs(float(b))))


@_prop("sum rule")
def _p_rule_sum(rng):
    f, g, x, _ = _fx(rng)
    return _agree(_deriv(R.BinOp("+", f, g), x), _deriv(f, x) + _deriv(g, x)), (f, g, x)


@_prop("product rule")
def _p_rule_mul(rng):
    f, g, x, _ = _fx(rng)
    want = _deriv(f, x) * R.eval_real(g, x) + R.eval_real(f, x) * _deriv(g, x)
    return _agree(_deriv(R.BinOp("*", f, g), x), want), (f, g, x)


@_prop("reciprocal rule")
def _p_rule_inv(rng):
    _, g, x, _ = _fx(rng)
    while abs(R.eval_real(g, x)) < 1e-6:
        x += Fraction(1, 8)
    gx = R.eval_real(g, x)
    want = -_deriv(g, x) / gx**2
    return _agree(_deriv(R.BinOp("/", R.Const(Fraction(1)), g), x), want), (g, x)


# numerical suites ----------------------------------------------------------------
_FTC_CASES = ("exp(x)", "cos(x)", "x^2", "sin(x) + x", "1/(1 + x^2)")


@_prop("increment of the integral function is f(x) dx", instances=len(_FTC_CASES))
def _p_ftc(rng):
    f = R.parse_expr(rng.choice(_FTC_CASES))
    x = Fraction(rng.randint(1, 8), 8)
    return ftc_check(f, 0, x).verdict, (f, x)


_GEOM_CASES = ("x^2 + 1", "sqrt(4 - x^2)", "exp(x)", "2*x + 1")


def _geom(rng, wrong):
    f = R.parse_expr(rng.choice(_GEOM_CASES))
    kind = rng.choice([Measure.ARC_LENGTH, Measure.SURFACE])
    x = Fraction(rng.randint(1, 7), 8)
    return element_check(kind, f, x, wrong=wrong).verdict, (f, x)


@_prop("arc length and surface elements", instances=4)
def _p_geom(rng):
    return _geom(rng, False)


@_prop("naive arc length and surface formulas are wrong", expect_fail=True, instances=4)
def _p_geom_wrong(rng):
    return _geom(rng, True)


SUITES: dict[str, tuple[Proposition, ...]] = {
    "finitude": (_p_sum_inf, _p_inf_fin, _p_fin, _p_inf_plus, _p_inf_times, _p_inv, _p_above,
                 _p_below, _p_mixed, _p_reals),
    "proximity": (_p_refl, _p_trans, _p_finitude, _p_distinct, _p_unique, _p_add, _p_mul,
                  _p_counter, _p_inverse),
    "confront": (_p_confront,),
    "magnitude": (_p_negl, _p_order, _p_negl_trans),
    "continuity": (_p_cont_sum, _p_cont_mul, _p_cont_div, _p_cont_comp),
    "derivation-rules": (_p_rule_sum, _p_rule_mul, _p_rule_inv),
    "ftc": (_p_ftc,),
    "geometry": (_p_geom, _p_geom_wrong),
}


@dataclass
class PropsReport:
    results: list[PropResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "results": [r.to_dict() for r in self.results]}

    def lines(self) -> list[str]:
        out = []
        for r in self.results:
            mark = "pass" if r.ok else "FAIL"
            how = " (fails as expected)" if r.expect_fail else ""
            line = f"{mark}  {r.suite}: {r.name}{how}  [{r.passed}/{r.instances}]"
            if r.counterexample:
                line += f"\n      counterexample: {r.counterexample}"
            out.append(line)
        return out


def run_props(suite: str = "all", instances: int = INSTANCES, seed: int = 0) -> PropsReport:
    if suite != "all" and suite not in SUITES:
        raise UnknownSuite(f"unknown suite {suite!r}; choose from {', '.join(SUITES)} or all")
    names = list(SUITES) if suite == "all" else [suite]
    report = PropsReport()
    for name in names:
        for k, prop in enumerate(SUITES[name]):
            rng = random.Random(f"{seed}:{name}:{k}")
            report.results.append(prop.run(name, rng, instances))
    return report
