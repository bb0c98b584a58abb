import random

import pytest

from virtualcalc import DEL, INF, Truth, UnknownSuite, Verdict, parse_expr, run_props
from virtualcalc.props import SUITES, PropResult, Proposition, PropsReport


def test_suite_names():
    assert set(SUITES) == {"finitude", "proximity", "confront", "magnitude", "continuity",
                           "derivation-rules", "ftc", "geometry"}


def test_unknown_suite():
    with pytest.raises(UnknownSuite):
        run_props("nonesuch")


@pytest.mark.parametrize("suite", ["magnitude", "ftc", "geometry"])
def test_remaining_suites_pass(suite):
    rep = run_props(suite)
    assert rep.ok, "\n".join(rep.lines())


def test_geometry_negatives_fail_as_expected():
    rep = run_props("geometry")
    wrong = [r for r in rep.results if r.expect_fail]
    assert wrong and all(r.ok for r in wrong)
    assert all("fails as expected" in line for line in rep.lines() if "naive" in line)


def test_seeded_runs_repeat():
    a = run_props("proximity", instances=15, seed=4)
    b = run_props("proximity", instances=15, seed=4)
    assert a.to_dict() == b.to_dict()


def test_counterexample_rendering():
    def check(rng):
        k = rng.randint(1, 3)
        return Verdict(Truth.FAILS if k == 2 else Truth.HOLDS), (INF + DEL, k, parse_expr("x^2"))

    prop = Proposition("k is never 2", check)
    res = prop.run("demo", random.Random(1), 30)
    assert not res.ok and res.passed < 30
    assert res.counterexample == "Fails at inf + del, 2, x^2"
    line = PropsReport([res]).lines()[0]
    assert line.startswith("FAIL  demo: k is never 2  [")
    assert line.endswith("counterexample: Fails at inf + del, 2, x^2")


def test_expected_failure_that_holds_is_reported():
    prop = Proposition("should fail", lambda rng: (Verdict(Truth.HOLDS), (1,)), expect_fail=True)
    res = prop.run("demo", random.Random(0), 3)
    assert not res.ok and res.counterexample == "Holds at 1"


def test_result_dict():
    d = PropResult("s", "p", 4, 4).to_dict()
    assert d == {"suite": "s", "proposition": "p", "instances": 4, "passed": 4,
                 "expect_fail": False, "ok": True, "counterexample": None}
