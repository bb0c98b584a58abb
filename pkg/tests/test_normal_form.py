from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from virtualcalc import DEL, INF, alternate_sign, format_virtual, make_real, read_virtual
from virtualcalc.config import settings
from virtualcalc.series import Laurent
from virtualcalc.vnum import Series


@pytest.mark.parametrize(
    "text",
    ["inf^2 + 2 + del^2", "10 + del", "-1", "(+-)1", "2 + (+-)1", "del^2 + (+-)del", "0",
     "3*del/2", "-inf + 1/3"],
)
def test_round_trip(text):
    assert format_virtual(read_virtual(text)) == text


def test_worked_examples():
    assert format_virtual((INF + DEL) ** 2) == "inf^2 + 2 + del^2"
    assert format_virtual(((5 + DEL) ** 2 - 25) / DEL) == "10 + del"


def test_truncated_sine():
    with settings(trunc=4):
        assert format_virtual(read_virtual("sin(del)")) == "del - del^3/6 + O(del^5)"


def test_minus_plus_sign():
    assert format_virtual(alternate_sign(make_real(-1))) == "(-+)1"


def test_approximate_coefficients_print_as_floats():
    assert format_virtual(make_real(0.5) + DEL) == "0.5 + del"


def test_sequences_print_their_rule():
    s = read_virtual("sin(inf)")
    assert format_virtual(s).startswith("<seq ")


coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=7)
polys = st.dictionaries(st.integers(-3, 3), coeffs, max_size=4)


@given(polys, polys)
def test_round_trip_property(even, odd):
    e, o = Laurent.from_terms(even.items()), Laurent.from_terms(odd.items())
    a = Series(e, o)
    b = read_virtual(format_virtual(a))
    assert b.even == a.even and b.odd == a.odd


def test_exact_fraction_text():
    assert format_virtual(make_real(Fraction(1, 3))) == "1/3"
    assert format_virtual(make_real(Fraction(1, 4))) == "1/4"
    assert format_virtual(make_real(0.25)) == "0.25"
