import logging
import math
from fractions import Fraction

import pytest
import sympy as sp

import oracles as O
from virtualcalc import (
    DEL,
    INF,
    CenterOnBoundary,
    DomainError,
    NotInvertible,
    alternate_sign,
    compare_magnitude,
    extend_apply,
    format_virtual,
    in_order_of,
    is_finite,
    leading_order,
    make_real,
    near,
    negligible,
    parse_expr,
    read_virtual,
)
from virtualcalc.config import settings
from virtualcalc.magnitude import Magnitude
from virtualcalc.vnum import Series, Seq


class TestMagnitude:
    def test_in_order_of(self):
        sin_del = read_virtual("sin(del)")
        assert in_order_of(sin_del, DEL).holds
        assert in_order_of(DEL, DEL**2).fails
        assert in_order_of(3 + INF, 3 + INF).holds

    def test_negligible(self):
        assert negligible(DEL**2, DEL).holds
        assert negligible(7, INF).holds
        assert negligible(DEL, DEL).fails

    def test_divisor_must_be_invertible(self):
        with pytest.raises(NotInvertible):
            negligible(DEL, 0)

    def test_leading_order(self):
        p = leading_order(DEL**2 - 3 * DEL**5)
        assert p.valuations == (2, 2) and p.leading == (1, 1)
        assert leading_order(read_virtual("inf^2 + 2 + del^2")).valuation_even == -2
        q = leading_order(alternate_sign(DEL))
        assert q.valuations == (1, 1) and q.leading == (1, -1)

    def test_compare(self):
        assert compare_magnitude(DEL**2, DEL).outcome is Magnitude.SMALLER
        assert compare_magnitude(read_virtual("sin(del)"), DEL).outcome is Magnitude.SAME
        assert compare_magnitude(alternate_sign(DEL), DEL).outcome is Magnitude.SAME
        assert compare_magnitude(INF, DEL).outcome is Magnitude.LARGER


def _coeffs(a: Series, upto: int):
    return {k: c for k, c in a.even.terms.items() if k <= upto}


class TestLift:
    @pytest.mark.parametrize(
        "fn, arg, sym",
        [
            ("sin", "del", sp.sin(O.d)),
            ("cos", "del", sp.cos(O.d)),
            ("exp", "del", sp.exp(O.d)),
            ("ln", "1 + del", sp.log(1 + O.d)),
            ("sqrt", "4 + del", sp.sqrt(4 + O.d)),
            ("sqrt", "inf^2 + 1", sp.sqrt(O.INF**2 + 1)),
            ("exp", "del - del^2", sp.exp(O.d - O.d**2)),
        ],
    )
    def test_exact_series_against_sympy(self, fn, arg, sym):
        with settings(trunc=7):
            a = read_virtual(f"{fn}({arg})")
        want = O.laurent(sym, order=8)
        got = _coeffs(a, 7)
        assert got == {k: Fraction(int(c.p), int(c.q)) for k, c in want.items()}
        assert all(type(c) is Fraction for c in got.values())

    def test_truncation_tail(self):
        with settings(trunc=4):
            a = read_virtual("sin(del)")
        assert a.even.trunc == 4
        assert format_virtual(a) == "del - del^3/6 + O(del^5)"

    def test_approximate_center(self):
        a = extend_apply(parse_expr("sin(x)"), make_real(0.3) + DEL)
        assert a.even.coeff(0) == math.sin(0.3)
        assert a.even.coeff(1) == math.cos(0.3)
        assert a.even.coeff(2) == pytest.approx(-math.sin(0.3) / 2, rel=1e-15)

    def test_sqrt_near_inf(self):
        a = read_virtual("sqrt(inf^2 + 1)")
        assert near(a, INF).holds
        assert a.even.coeff(1) == Fraction(1, 2)

    def test_fallback_to_sequences(self, caplog):
        with caplog.at_level(logging.INFO, logger="virtualcalc"):
            a = read_virtual("sin(inf)")
        assert isinstance(a, Seq)
        assert is_finite(a).holds
        assert "falling back" in caplog.text
        assert isinstance(read_virtual("ln(del)"), Seq)
        assert isinstance(read_virtual("sqrt(del)"), Seq)

    def test_domain_errors(self):
        with pytest.raises(DomainError):
            read_virtual("ln(-1 + del)")
        with pytest.raises(DomainError):
            read_virtual("sqrt(-del)")
        with pytest.raises(DomainError):
            read_virtual("ln(0)")

    def test_abs(self):
        assert read_virtual("abs(-del)") == DEL
        assert read_virtual("abs(del - 2)") == 2 - DEL
        with pytest.raises(CenterOnBoundary):
            read_virtual("abs(O(del^2))")

    def test_parity_branches_lift_separately(self):
        a = read_virtual("sin((+-)del)")
        assert a.even.coeff(1) == 1 and a.odd.coeff(1) == -1

    def test_composition(self):
        h = parse_expr("exp(sin(x))")
        with settings(trunc=5):
            a = extend_apply(h, DEL)
        want = O.laurent(sp.exp(sp.sin(O.d)), order=6)
        assert _coeffs(a, 5) == {k: Fraction(int(c.p), int(c.q)) for k, c in want.items()}
