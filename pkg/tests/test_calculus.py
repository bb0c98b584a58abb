from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

import oracles as O
from virtualcalc import (
    DEL,
    InfinitesimalFamily,
    NotDerivable,
    NotInterior,
    NotInvertible,
    UnsupportedExpression,
    alternate_sign,
    check_continuity_at,
    check_differentiable_at,
    check_uniform_continuity,
    derivative_at,
    differentiability_report,
    make_real,
    parse_domain,
    parse_expr,
    sine_quotient_check,
    taylor_expand,
)
from virtualcalc.calculus import lemma_check
from virtualcalc.realfun import patch

WIGGLE = patch(parse_expr("x^2*sin(1/x)"), 0, 0)


class TestDerivative:
    def test_sin_at_zero(self):
        rep = derivative_at(parse_expr("sin(x)"), 0)
        assert rep.value == 1 and rep.verdict.holds
        assert set(rep.per_probe.values()) == {1}
        assert len(rep.per_probe) == 5

    def test_reciprocal(self):
        rep = derivative_at(parse_expr("1/x"), 2)
        assert rep.value == Fraction(-1, 4)

    @pytest.mark.parametrize("text", ["exp(x)*cos(x)", "sqrt(x^2 + 1)", "ln(x + 3)", "x^5 - x"])
    def test_against_sympy(self, text):
        want = sp.lambdify(O.x, sp.diff(sp.sympify(text.replace("^", "**").replace("ln", "log"),
                                                   locals={"x": O.x}), O.x))
        for x in (-0.7, 0.2, 1.5):
            rep = derivative_at(parse_expr(text), x)
            assert float(rep.value) == pytest.approx(float(want(x)), rel=1e-12, abs=1e-14)
            assert rep.verdict.holds

    def test_abs(self):
        with pytest.raises(NotDerivable) as info:
            derivative_at(parse_expr("abs(x)"), 0)
        assert info.value.per_probe["del"] == 1
        assert info.value.per_probe["-del"] == -1

    def test_not_interior(self):
        with pytest.raises(NotInterior):
            derivative_at(parse_expr("sqrt(x)"), 0)
        with pytest.raises(NotInterior):
            derivative_at(parse_expr("x"), 1, domain=parse_domain("[0,1]"))

    def test_patched_function_caps_at_unknown(self):
        rep = derivative_at(WIGGLE, 0)
        assert abs(rep.value) < 1e-6
        assert rep.verdict.unknown and rep.oracle_value is None

    def test_custom_family(self):
        fam = InfinitesimalFamily((("del", DEL),))
        assert derivative_at(parse_expr("x^2"), 3, family=fam).value == 6
        with pytest.raises(ValueError):
            InfinitesimalFamily((("zero", make_real(0)),))


class TestDifferentiability:
    def test_smooth(self):
        assert check_differentiable_at(parse_expr("sin(x)"), 0.3).holds
        assert check_differentiable_at(parse_expr("5"), 2).holds

    def test_wiggle_fails(self):
        rep = differentiability_report(WIGGLE, 0)
        assert rep.verdict.fails
        assert "Fails" in rep.pairs.values()

    def test_abs_fails(self):
        assert check_differentiable_at(parse_expr("abs(x)"), 0).fails

    def test_lemma(self):
        assert lemma_check(parse_expr("sin(x)"), 0.3).holds
        assert lemma_check(parse_expr("x^3"), 2).holds


class TestTaylor:
    def test_exp(self):
        rep = taylor_expand(parse_expr("exp(x)"), 0, 2)
        assert rep.coefficients == [1, 1, 0.5]
        assert rep.remainder.holds and rep.remainder_valuation == 3

    def test_sin(self):
        rep = taylor_expand(parse_expr("sin(x)"), 0, 1)
        assert rep.coefficients == [0, 1]
        assert rep.remainder_valuation == 3

    def test_constant(self):
        rep = taylor_expand(parse_expr("7"), 1.5, 3)
        assert rep.coefficients == [7, 0, 0, 0]
        assert rep.remainder.holds and rep.remainder_valuation is None

    @pytest.mark.parametrize("x0", [0.5, -1.25])
    def test_coefficients_against_sympy(self, x0):
        f = "cos(x)*exp(x)"
        want = O.taylor_coefficients(sp.cos(O.x) * sp.exp(O.x), x0, 4)
        rep = taylor_expand(parse_expr(f), x0, 4)
        np.testing.assert_allclose(rep.coefficients, [float(c) for c in want], rtol=1e-12)
        assert rep.remainder.holds and rep.remainder_valuation >= 5


class TestContinuity:
    @pytest.mark.parametrize("text, x", [("sin(x)", 0.3), ("1/x", 0.5), ("cos(x)", 1), ("4", 0)])
    def test_holds(self, text, x):
        assert check_continuity_at(parse_expr(text), x).holds

    def test_wiggle_is_continuous(self):
        assert check_continuity_at(WIGGLE, 0).holds

    def test_jump_fails(self):
        assert check_continuity_at(patch(parse_expr("sin(1/x)"), 0, 0), 0).fails
        assert check_continuity_at(patch(parse_expr("x"), 1, 5), 1).fails

    def test_step_is_out_of_grammar(self):
        with pytest.raises(UnsupportedExpression):
            parse_expr("step(x)")


class TestUniform:
    def test_cos(self):
        rep = check_uniform_continuity(parse_expr("cos(x)"), parse_domain("R"))
        assert rep.verdict.label == "HoldsToDepth" and rep.witness is None

    def test_square(self):
        rep = check_uniform_continuity(parse_expr("x^2"), parse_domain("R"))
        assert rep.verdict.fails
        assert rep.witness["family"] == "a_n = n"
        # (n + 1/n)^2 - n^2 = 2 + 1/n^2
        assert rep.witness["gap"] == pytest.approx(2, abs=1e-3)
        assert check_uniform_continuity(parse_expr("x^2"), parse_domain("[0,10]")).verdict.holds

    def test_reciprocal_near_zero(self):
        rep = check_uniform_continuity(parse_expr("1/x"), parse_domain("(0,1]"))
        assert rep.verdict.fails and "1/n" in rep.witness["family"]
        assert check_uniform_continuity(parse_expr("sqrt(x)"), parse_domain("[0,1]")).verdict.holds

    def test_uniform_implies_pointwise(self):
        f, A = parse_expr("sin(x)*x"), parse_domain("[-2,2]")
        assert check_uniform_continuity(f, A).verdict.holds
        for x in np.linspace(-2, 2, 9):
            assert check_continuity_at(f, float(x)).holds


class TestSineQuotient:
    @pytest.mark.parametrize("eps", [DEL, alternate_sign(DEL), DEL**3, -2 * DEL])
    def test_holds(self, eps):
        assert sine_quotient_check(eps).holds

    def test_needs_invertible_infinitesimal(self):
        with pytest.raises(NotInvertible):
            sine_quotient_check(make_real(0))
        with pytest.raises(NotInvertible):
            sine_quotient_check(make_real(1))
