from fractions import Fraction
from math import isqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from srs import poly
from srs.errors import NoSignChange, NotIsolating, ParseError, Reducible
from srs.exactnum import (
    QQ,
    as_element,
    compare,
    embed_float,
    field_make,
    floor,
    format_element,
    frac,
    parse_element,
    parse_field,
)

GOLDEN = field_make([-1, -1, 1], (1, 2))
MINUS_SQRT2 = field_make([-2, 0, 1], (-2, 0))
SQRT2 = field_make([-2, 0, 1], (1, 2))


def test_golden_field_and_floor():
    phi = GOLDEN.gen()
    assert phi * phi == phi + 1
    assert floor(3 / phi) == 1
    assert 3 / phi == 3 * phi - 3
    assert frac(3 * phi - 3) == 3 * phi - 4


def test_degree_one_gives_rationals():
    assert field_make([-1, 1], (0, 2)) is QQ


def test_negative_root_of_two():
    s = MINUS_SQRT2.gen()
    assert s * s == 2
    assert s < 0 and floor(s) == -2


def test_field_errors():
    with pytest.raises(NotIsolating):
        field_make([-2, 0, 1], (-2, 2))
    with pytest.raises(NotIsolating):
        field_make([-1, -1, 1], (2, 3))
    with pytest.raises(Reducible):
        field_make([0, -1, 0, 1], (Fraction(1, 2), 2))
    with pytest.raises(NoSignChange):
        field_make([-1, 1], (1, 2))


def test_reducible_quartic():
    # (x^2 - 2)(x^2 - 3) has one root in (1, 3/2)
    with pytest.raises(Reducible):
        field_make(poly.mul([-2, 0, 1], [-3, 0, 1]), (1, Fraction(3, 2)))


def test_frac_and_compare():
    phi = GOLDEN.gen()
    assert compare(phi, Fraction(8, 5)) == 1
    assert compare(phi, phi) == 0
    assert compare(Fraction(1, 2), phi) == -1
    assert 0 <= frac(-7 * phi) < 1


def test_embed_float_width():
    phi = GOLDEN.gen()
    lo, hi = embed_float(phi, 60)
    assert hi - lo <= Fraction(1, 2 ** 60)
    assert (2 * lo - 1) ** 2 <= 5 <= (2 * hi - 1) ** 2
    assert embed_float(Fraction(1, 3), 10) == (Fraction(1, 3), Fraction(1, 3))


def test_inverse_and_division():
    phi = GOLDEN.gen()
    assert phi.inverse() == phi - 1
    assert (phi + 2) / (phi + 2) == 1


def test_parse_and_format_round_trip():
    f = parse_field("poly=[-1,-1,1];root=(1,2)")
    assert f == GOLDEN
    x = parse_element("[-4,3]", f)
    assert x == 3 * GOLDEN.gen() - 4
    assert format_element(x) == "[-4,3]"
    assert parse_element(format_element(x), f) == x
    assert parse_field("Q") is QQ and parse_field("") is QQ
    assert parse_element("-2/3") == Fraction(-2, 3)
    with pytest.raises(ParseError):
        parse_field("poly=1,2")
    with pytest.raises(ParseError):
        parse_element("abc")


def _floor_oracle(a, b):
    """floor(a + b sqrt2) with integer square roots only."""
    m = a.denominator * b.denominator
    p, q = int(a * m), int(b * m)
    if q == 0:
        return p // m
    k = isqrt(2 * q * q)
    k = k if q > 0 else -k - 1
    return (p + k) // m


@settings(max_examples=300, deadline=None)
@given(st.fractions(max_denominator=1000, min_value=-10 ** 6, max_value=10 ** 6),
       st.fractions(max_denominator=1000, min_value=-10 ** 6, max_value=10 ** 6))
def test_floor_matches_integer_square_root_oracle(a, b):
    x = SQRT2.element([a, b])
    assert floor(x) == _floor_oracle(a, b)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(max_denominator=50, min_value=-50, max_value=50), min_size=2, max_size=2),
       st.lists(st.fractions(max_denominator=50, min_value=-50, max_value=50), min_size=2, max_size=2))
def test_field_arithmetic_is_consistent(u, v):
    x, y = GOLDEN.element(u), GOLDEN.element(v)
    assert (x + y) - y == x
    assert x * y == y * x
    if y != 0:
        assert (x / y) * y == x
    lo, hi = embed_float(x - y, 40)
    assert (compare(x, y) > 0) == (lo > 0 or (lo <= 0 < hi and x - y > 0))


def test_as_element_accepts_plain_numbers():
    assert as_element("3/4") == Fraction(3, 4)
    assert as_element(2).is_rational()
