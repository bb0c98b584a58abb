import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings as hsettings, strategies as st

from virtualcalc import (
    DomainError,
    ExprSyntaxError,
    NonSmoothNode,
    UnknownIdentifier,
    UnsupportedExpression,
    UnsupportedSet,
    kernels,
)
from virtualcalc import realfun as R
from virtualcalc.realfun import (
    Const,
    X,
    compile_program,
    compose,
    diff_expr,
    eval_real,
    parse_domain,
    parse_expr,
    patch,
    to_text,
)

sx = sp.Symbol("x")


def to_sympy(f):
    return sp.sympify(to_text(f).replace("^", "**").replace("ln", "log"), locals={"x": sx})


class TestParser:
    @pytest.mark.parametrize(
        "text, value",
        [
            ("1 + 2*3", 7),
            ("2^3", 8),
            ("-2^2", -4),
            ("(1 - 3)/4", -0.5),
            ("2**-1", 0.5),
            ("sqrt(16) + abs(-3)", 7),
            ("exp(0) + ln(1) + log(1)", 1),
            ("pi", math.pi),
            ("e", math.e),
        ],
    )
    def test_values(self, text, value):
        assert eval_real(parse_expr(text), 0.0) == pytest.approx(value)

    def test_decimals(self):
        assert parse_expr("0.25") == Const(Fraction(1, 4))
        assert parse_expr("0.1", decimals_exact=False) == Const(0.1)

    def test_unicode_aliases(self):
        assert to_text(parse_expr("∞ + ∂")) == to_text(parse_expr("inf + del"))
        assert to_text(parse_expr("±∂")) == to_text(parse_expr("(+-)del"))

    @pytest.mark.parametrize("text", ["1 +", "sin(", "(1", "2 ^ x", "2^3^2", ")", "1 2"])
    def test_syntax_errors(self, text):
        with pytest.raises(ExprSyntaxError):
            parse_expr(text)

    def test_unknown_name(self):
        with pytest.raises(UnknownIdentifier):
            parse_expr("tan(x)")

    @pytest.mark.parametrize("name", ["step", "floor", "sign", "max"])
    def test_piecewise_rejected(self, name):
        with pytest.raises(UnsupportedExpression):
            parse_expr(f"{name}(x)")

    def test_error_position(self):
        with pytest.raises(ExprSyntaxError) as info:
            parse_expr("1 + * 2")
        assert info.value.position == 4


exprs = st.recursive(
    st.sampled_from(["x", "1", "2", "1/3", "del", "inf"]),
    lambda sub: st.one_of(
        st.tuples(sub, st.sampled_from("+-*/"), sub).map(lambda t: f"({t[0]} {t[1]} {t[2]})"),
        st.tuples(st.sampled_from(["sin", "cos", "exp"]), sub).map(lambda t: f"{t[0]}({t[1]})"),
        sub.map(lambda s: f"-{s}"),
        st.tuples(sub, st.integers(-3, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
    ),
    max_leaves=6,
)


@given(exprs)
@hsettings(max_examples=150)
def test_print_parse_round_trip(text):
    f = parse_expr(text)
    assert parse_expr(to_text(f)) == f


class TestDerivative:
    CASES = ["x^3 - 2*x", "sin(x)*cos(x)", "exp(sin(x))", "1/(1 + x^2)", "ln(x^2 + 1)",
             "sqrt(x^2 + 3)", "x^-2", "cos(3*x)/x"]

    @pytest.mark.parametrize("text", CASES)
    def test_against_sympy(self, text):
        f = parse_expr(text)
        want = sp.lambdify(sx, sp.diff(to_sympy(f), sx))
        got = diff_expr(f)
        for x in (0.3, 1.1, 2.5):
            assert eval_real(got, x) == pytest.approx(float(want(x)), rel=1e-12)

    def test_constants_fold(self):
        assert to_text(diff_expr(parse_expr("3*x + 1"))) == "3"
        assert to_text(diff_expr(parse_expr("1/x"))) == "-1/x^2"

    def test_non_smooth(self):
        with pytest.raises(NonSmoothNode):
            diff_expr(parse_expr("abs(x)"))
        with pytest.raises(NonSmoothNode):
            diff_expr(patch(parse_expr("sin(1/x)"), 0, 0))


class TestEval:
    def test_domain_errors(self):
        for text, x in [("ln(x)", 0.0), ("sqrt(x)", -1.0), ("1/x", 0.0)]:
            with pytest.raises(DomainError):
                eval_real(parse_expr(text), x)

    def test_virtual_constants_rejected(self):
        with pytest.raises(DomainError):
            eval_real(parse_expr("x + del"), 1.0)

    def test_patch(self):
        f = patch(parse_expr("sin(x)/x"), 0, 1)
        assert eval_real(f, 0.0) == 1
        assert eval_real(f, 0.5) == pytest.approx(math.sin(0.5) / 0.5)

    def test_compose(self):
        h = compose(parse_expr("x^2"), parse_expr("sin(x)"))
        assert eval_real(h, 0.7) == pytest.approx(math.sin(0.7) ** 2)
        assert R.has_var(h) and not R.is_virtual(h)


class TestKernels:
    CASES = ["x^2", "sin(x) + cos(2*x)", "exp(-x^2)", "sqrt(x^2 + 1)*ln(x + 2)", "abs(x - 0.5)",
             "1/(1 + x^4)"]

    @pytest.mark.parametrize("text", CASES)
    @pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
    def test_matches_tree_walker(self, text, backend):
        f = parse_expr(text)
        xs = np.linspace(-0.9, 0.9, 37)
        got = kernels.eval_points(compile_program(f), xs, backend=backend)
        want = [eval_real(f, float(x)) for x in xs]
        np.testing.assert_allclose(got, want, rtol=1e-13, atol=1e-15)

    @pytest.mark.parametrize("backend", sorted(kernels.BACKENDS))
    def test_domain_violation_is_nan(self, backend):
        got = kernels.eval_points(compile_program(parse_expr("ln(x)")), np.array([1.0, -1.0]),
                                  backend=backend)
        assert got[0] == 0 and math.isnan(got[1])

    def test_patch_program(self):
        f = patch(parse_expr("sin(x)/x"), 0, 1)
        got = kernels.eval_points(compile_program(f), np.array([0.0, 0.5]))
        assert got[0] == 1 and got[1] == pytest.approx(math.sin(0.5) / 0.5)

    def test_virtual_constants_do_not_compile(self):
        with pytest.raises(DomainError):
            compile_program(parse_expr("x + del"))


class TestDomains:
    def test_parse(self):
        d = parse_domain("(-1,1) U (2,3]")
        assert 0 in d and 1 not in d and 3 in d and 2.5 in d
        assert 1e300 in parse_domain("R")
        half = parse_domain("(-inf, 0]")
        assert 0 in half and 1e-9 not in half

    @pytest.mark.parametrize("text", ["[1,0]", "{1,2}", "[0,1", "(0,x)"])
    def test_rejected(self, text):
        with pytest.raises(UnsupportedSet):
            parse_domain(text)
