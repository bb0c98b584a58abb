import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings as hsettings, strategies as st

import oracles as O
from virtualcalc import (
    DegenerateInterval,
    DomainError,
    Measure,
    NotPositive,
    TagScheme,
    element_check,
    ftc_check,
    geom_measure,
    integrate,
    parse_expr,
)
from virtualcalc import kernels
from virtualcalc.integrate import LEFT, MIDPOINT, RIGHT, INWARD, make_partition, riemann_sum
from virtualcalc.realfun import compile_program


class TestPartition:
    def test_midpoint(self):
        p = make_partition(0, 1, 4, MIDPOINT)
        np.testing.assert_array_equal(p.points, [0, 0.25, 0.5, 0.75, 1])
        np.testing.assert_array_equal(p.tags, [0.125, 0.375, 0.625, 0.875])
        assert p.norm == 0.25 and p.cells == 4

    def test_reversed_endpoints_give_same_cells(self):
        p, q = make_partition(1, 0, 4, MIDPOINT), make_partition(0, 1, 4, MIDPOINT)
        np.testing.assert_array_equal(p.points, q.points)
        np.testing.assert_array_equal(p.tags, q.tags)

    def test_single_random_cell(self):
        p = make_partition(0, 1, 1, TagScheme.seeded(7))
        assert p.cells == 1 and 0 < p.tags[0] < 1
        again = make_partition(0, 1, 1, TagScheme.seeded(7))
        assert again.tags[0] == p.tags[0]

    def test_degenerate(self):
        with pytest.raises(DegenerateInterval):
            make_partition(2, 2, 4)
        with pytest.raises(ValueError):
            make_partition(0, 1, 0)

    @given(st.integers(1, 300), st.sampled_from([LEFT, RIGHT, MIDPOINT, TagScheme.seeded(3)]))
    @hsettings(max_examples=50)
    def test_tags_strictly_inside(self, n, scheme):
        p = make_partition(-1.5, 2.0, n, scheme)
        assert np.all(p.points[:-1] < p.tags) and np.all(p.tags < p.points[1:])
        assert p.points[0] == -1.5 and p.points[-1] == 2.0


def _left_inward_oracle(n):
    # direct evaluation of sum z_i^2 * w with z_i = x_{i-1} + w/1000
    w = Fraction(1, n)
    return sum((i * w + w * Fraction(1, 1000)) ** 2 * w for i in range(n))


class TestRiemannSum:
    def test_symmetric_midpoint(self):
        assert riemann_sum(parse_expr("x"), make_partition(0, 1, 4, MIDPOINT)) == 0.5

    def test_constant(self):
        for scheme in (LEFT, RIGHT, TagScheme.seeded(1)):
            s = riemann_sum(parse_expr("3"), make_partition(-1, 2, 7, scheme))
            assert s == pytest.approx(9, rel=1e-15)

    def test_left_inward(self):
        assert INWARD == 1e-3
        s = riemann_sum(parse_expr("x^2"), make_partition(0, 1, 4, LEFT))
        want = _left_inward_oracle(4)
        assert s == pytest.approx(float(want), rel=1e-15)
        assert abs(s - 0.21875) < 0.25 / 1000

    def test_domain_error_names_tag(self):
        with pytest.raises(DomainError):
            riemann_sum(parse_expr("sqrt(x)"), make_partition(-1, 1, 4, MIDPOINT))

    @pytest.mark.parametrize("text", ["x^2", "sin(x)*exp(x)", "1/(x + 2)", "sqrt(x + 3)"])
    def test_backends_agree(self, text):
        if "compiled" not in kernels.BACKENDS:
            pytest.skip("compiled kernel not built")
        prog = compile_program(parse_expr(text))
        p = make_partition(-1, 1, 1000, TagScheme.seeded(5))
        py = kernels.riemann_sum(prog, p.points, p.tags, backend="python")
        c = kernels.riemann_sum(prog, p.points, p.tags, backend="compiled")
        assert py[0] == pytest.approx(c[0], rel=1e-13)
        assert py[2] == c[2] == -1
        np.testing.assert_allclose(
            kernels.eval_points(prog, p.tags, backend="python"),
            kernels.eval_points(prog, p.tags, backend="compiled"),
            rtol=1e-14,
        )

    def test_backends_report_the_same_bad_tag(self):
        if "compiled" not in kernels.BACKENDS:
            pytest.skip("compiled kernel not built")
        prog = compile_program(parse_expr("ln(x)"))
        p = make_partition(-1, 1, 8, MIDPOINT)
        assert kernels.riemann_sum(prog, p.points, p.tags, backend="python")[2] == 0
        assert kernels.riemann_sum(prog, p.points, p.tags, backend="compiled")[2] == 0


class TestIntegrate:
    def test_examples(self):
        rep = integrate(parse_expr("x"), 0, 1)
        assert rep.verdict.holds and rep.value == pytest.approx(0.5, abs=1e-12)
        back = integrate(parse_expr("x"), 1, 0)
        assert back.value == -rep.value
        assert integrate(parse_expr("x^2"), 0, 1).value == pytest.approx(1 / 3, abs=1e-6)

    def test_empty_interval(self):
        rep = integrate(parse_expr("ln(x)"), -3, -3)
        assert rep.value == 0 and rep.verdict.holds

    @pytest.mark.parametrize(
        "text, sym, a, b",
        [
            ("exp(x)", sp.exp(O.x), 0, 1),
            ("sin(x)^2", sp.sin(O.x) ** 2, -1, 2),
            ("1/(1 + x^2)", 1 / (1 + O.x**2), -3, 3),
            ("sqrt(x)", sp.sqrt(O.x), 0, 4),
            ("x^3 - 2*x", O.x**3 - 2 * O.x, -2, 1.5),
        ],
    )
    def test_against_antiderivative(self, text, sym, a, b):
        rep = integrate(parse_expr(text), a, b)
        assert rep.verdict.holds
        assert rep.value == pytest.approx(float(O.definite(sym, a, b)), abs=1e-6)

    def test_scheme_independence(self):
        rep = integrate(parse_expr("cos(x)*x"), 0, 2)
        tails = [v[-1] for v in rep.per_scheme.values()]
        assert max(tails) - min(tails) < 1e-6

    def test_linearity_and_additivity(self):
        f, g = parse_expr("exp(x)"), parse_expr("sin(x)")
        lhs = integrate(parse_expr("2*exp(x) - 3*sin(x)"), 0, 1).value
        rhs = 2 * integrate(f, 0, 1).value - 3 * integrate(g, 0, 1).value
        assert lhs == pytest.approx(rhs, abs=1e-6)
        whole = integrate(f, -1, 2).value
        parts = integrate(f, -1, 0.5).value + integrate(f, 0.5, 2).value
        assert whole == pytest.approx(parts, abs=1e-6)

    def test_domain_error(self):
        with pytest.raises(DomainError):
            integrate(parse_expr("ln(x)"), -1, 1)

    def test_unbounded_integrand_is_not_integrable(self):
        rep = integrate(parse_expr("1/x"), 0, 1, levels=10)
        assert not rep.verdict.holds

    def test_report_dict(self):
        d = integrate(parse_expr("x"), 0, 1).to_dict()
        assert d["verdict"] == "HoldsToDepth" and len(d["per_scheme"]) == 4


class TestFTC:
    def test_exp(self):
        rep = ftc_check(parse_expr("exp(x)"), 0, 0.5)
        assert rep.verdict.holds and rep.ratio < 1e-3

    def test_constant(self):
        rep = ftc_check(parse_expr("4"), 0, 1)
        assert rep.verdict.holds and rep.ratio < 1e-12

    def test_cos(self):
        assert ftc_check(parse_expr("cos(x)"), 0, 1).verdict.holds


class TestGeometry:
    def test_arc_of_line(self):
        rep = geom_measure(Measure.ARC_LENGTH, parse_expr("x"), 0, 1)
        assert rep.value == pytest.approx(math.sqrt(2), abs=1e-9)

    def test_area_of_constant(self):
        assert geom_measure("Area", parse_expr("5"), -1, 3).value == pytest.approx(20, abs=1e-9)

    def test_volume_of_cylinder_and_cone(self):
        assert geom_measure(Measure.VOLUME, parse_expr("2"), 0, 3).value == pytest.approx(
            12 * math.pi, rel=1e-9
        )
        cone = geom_measure(Measure.VOLUME, parse_expr("x"), 0, 1).value
        assert cone == pytest.approx(math.pi / 3, abs=1e-6)

    def test_arc_against_sympy(self):
        rep = geom_measure(Measure.ARC_LENGTH, parse_expr("x^2"), 0, 1)
        assert rep.value == pytest.approx(float(O.arc_length(O.x**2, 0, 1)), abs=1e-6)

    def test_surface_needs_positive(self):
        with pytest.raises(NotPositive):
            geom_measure(Measure.SURFACE, parse_expr("x"), -1, 1)

    def test_naive_formulas_fail(self):
        line = parse_expr("x")
        assert geom_measure("Area", parse_expr("1"), 0, 1).value == pytest.approx(1)
        assert element_check(Measure.ARC_LENGTH, line, 0.5, wrong=True).verdict.fails
        assert element_check(Measure.SURFACE, parse_expr("x + 1"), 0.5, wrong=True).verdict.fails
        assert element_check(Measure.SURFACE, parse_expr("x + 1"), 0.5).verdict.holds

    def test_flat_graph_makes_naive_arc_correct(self):
        assert element_check(Measure.ARC_LENGTH, parse_expr("3"), 0.5, wrong=True).verdict.holds

    def test_no_naive_area(self):
        with pytest.raises(ValueError):
            element_check(Measure.AREA, parse_expr("x"), 0.5, wrong=True)
