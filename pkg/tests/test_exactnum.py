import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from earac.exactnum import (ExactValue, ONE, SQRT2, SQRT3, SQRT6, ZERO,
                            ParseError, compare, delta, parse, to_decimal)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=64)
values = st.builds(ExactValue, rationals, rationals, rationals, rationals)


def ev(c1=0, c2=0, c3=0, c6=0):
    return ExactValue(Fraction(c1), Fraction(c2), Fraction(c3), Fraction(c6))


def test_generator_product():
    assert SQRT2 * SQRT3 == SQRT6


def test_cancellation():
    a = ev(Fraction(1, 2), Fraction(1, 2))
    b = ev(Fraction(1, 2), Fraction(-1, 2))
    assert a + b == ONE


def test_mul_expansion():
    # (1/2 + 1/4 sqrt2)(1/2 + 1/6 sqrt3), expanded by hand
    x = ev(Fraction(1, 2), Fraction(1, 4))
    y = ev(Fraction(1, 2), 0, Fraction(1, 6))
    assert x * y == ev(Fraction(1, 4), Fraction(1, 8), Fraction(1, 12), Fraction(1, 24))


def test_radical_products():
    assert SQRT2 * SQRT6 == ev(0, 0, 2)
    assert SQRT3 * SQRT6 == ev(0, 3)
    assert SQRT2 * SQRT2 == ev(2)
    assert SQRT3 * SQRT3 == ev(3)
    assert SQRT6 * SQRT6 == ev(6)


def test_delta_values():
    assert delta(0, 0) == ONE
    assert delta(1, 1) == ev(0, 0, 0, Fraction(1, 6))
    assert delta(2, 1) == ev(0, 0, Fraction(1, 6))
    assert abs(delta(2, 1).to_decimal() - 0.288675) < 1e-6


def test_delta_rejects_negative():
    with pytest.raises(ValueError):
        delta(-1, 0)


@given(st.integers(0, 6), st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_delta_multiplicative(k, j, kp, jp):
    assert delta(k, j) * delta(kp, jp) == delta(k + kp, j + jp)


def test_to_decimal():
    x = ev(Fraction(1, 2), 0, 0, Fraction(1, 12))
    assert abs(to_decimal(x) - 0.7041241452) < 1e-9


def test_compare_examples():
    assert compare(delta(3, 0), delta(0, 2)) > 0
    x = ev(Fraction(1, 3), Fraction(-2, 7))
    assert compare(x, x) == 0


def test_compare_close_values():
    # 99/70 is a convergent of sqrt2; the gap is ~7e-5
    assert compare(ev(Fraction(99, 70)), SQRT2) > 0
    assert compare(ev(Fraction(140, 99)), SQRT2) < 0


@given(values, values, values)
@settings(max_examples=200)
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + ZERO == x
    assert x * ONE == x
    assert x + (-x) == ZERO


@given(values, values)
@settings(max_examples=200)
def test_decimal_consistency(x, y):
    assert math.isclose(to_decimal(x + y), to_decimal(x) + to_decimal(y),
                        rel_tol=0, abs_tol=1e-9)
    assert math.isclose(to_decimal(x * y), to_decimal(x) * to_decimal(y),
                        rel_tol=1e-9, abs_tol=1e-6)


@given(values, values)
def test_compare_iff_equal_coefficients(x, y):
    same = (x.c1, x.c2, x.c3, x.c6) == (y.c1, y.c2, y.c3, y.c6)
    assert (compare(x, y) == 0) == same


@given(values)
@settings(max_examples=200)
def test_render_parse_roundtrip(x):
    assert parse(x.render()) == x


def test_render_examples():
    assert ev(Fraction(1, 2)).render() == "1/2"
    assert ZERO.render() == "0"
    assert ev(Fraction(1, 2), 0, 0, Fraction(-1, 12)).render() == "1/2 - 1/12*sqrt6"
    assert parse("sqrt2").render() == "1*sqrt2"


def test_parse_rejects_garbage():
    for bad in ("", "foo", "1/2 + sqrt5", "1//2", "1/2 ** sqrt2"):
        with pytest.raises(ParseError):
            parse(bad)
