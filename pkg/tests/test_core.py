from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import tau_plain
from srs.core import (
    ESCAPED,
    PERIODIC,
    UNKNOWN,
    ParamVector,
    check_radix_identity,
    companion_matrix,
    orbit,
    orbit_sequence,
    srs_representation,
    tau,
    tau_inverse,
    verify_periodic,
)
from srs.errors import ZeroLeadingCoefficient
from srs.exactnum import field_make
from srs.linalg import det

GOLDEN = field_make([-1, -1, 1], (1, 2))
SQRT2 = field_make([-2, 0, 1], (1, 2))
PHI = GOLDEN.gen()


def test_tau_examples():
    assert tau(ParamVector([PHI - 1]), (3,)) == (-1,)
    assert tau(ParamVector([Fraction(-2, 3)]), (1,)) == (1,)
    r = ParamVector([Fraction(1, 2), 1])
    assert tau(r, (0, 0)) == (0, 0)


def test_tau_inverse_examples():
    r = ParamVector([Fraction(9, 10), Fraction(-11, 20)])
    assert tau_inverse(r, (-1, -1)) == [(1, -1)]
    assert (0, 0) in tau_inverse(ParamVector([Fraction(1, 2), 1]), (0, 0))
    assert tau_inverse(ParamVector([Fraction(-2, 3)]), (0,)) == [(-1,), (0,)]
    with pytest.raises(ZeroLeadingCoefficient):
        tau_inverse(ParamVector([0, Fraction(1, 2)]), (0, 0))


def test_orbit_statuses():
    r = ParamVector([1, PHI])
    res = orbit(r, (5, 5), 10 ** 5)
    assert (res.status, res.period) == (PERIODIC, 65)
    assert verify_periodic(r, (5, 5), res)
    res0 = orbit(ParamVector([0, 0, 0]), (4, -7, 9), 10)
    assert res0.status == PERIODIC and res0.cycle == [(0, 0, 0)] and res0.period == 1
    assert res0.preperiod <= 3
    # r0 = 1 with r1 = 3 sits outside the closed region: orbits blow up
    grow = orbit(ParamVector([1, 3]), (1, 2), 1000, escape_norm=100)
    assert grow.status == ESCAPED
    capped = orbit(ParamVector([1, 3]), (1, 2), 5)
    assert capped.status == UNKNOWN and capped.steps_taken == 5
    with pytest.raises(ValueError):
        orbit(r, (1, 1), 0)


def test_orbit_minimality():
    r = ParamVector([Fraction(-2, 3)])
    res = orbit(r, (1,), 10)
    assert (res.preperiod, res.period) == (0, 1)
    bad = type(res)(PERIODIC, 0, 2, res.cycle, 2)
    assert not verify_periodic(r, (1,), bad)


def test_srs_representation_golden():
    rep = srs_representation(ParamVector([PHI - 1]), (3,), 6)
    assert rep.digits[:3] == [3 * PHI - 4, 2 - PHI, PHI - 1]
    assert all(v == 0 for v in rep.digits[3:])
    assert rep.finite_at == 3
    knuth = srs_representation(ParamVector([Fraction(1, 2), 1]), (1, 0), 40)
    assert knuth.finite_at is not None
    assert all(0 <= v < 1 for v in knuth.digits)


def test_radix_identity():
    assert check_radix_identity(ParamVector([PHI - 1]), (3,), 3)
    assert check_radix_identity(ParamVector([Fraction(1, 2), 1]), (0, 0), 4)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.fractions(max_denominator=20, min_value=-2, max_value=2), min_size=4, max_size=4),
       st.tuples(st.integers(-50, 50), st.integers(-50, 50)), st.integers(1, 8))
def test_radix_identity_over_sqrt2(c, z, n):
    r = ParamVector([SQRT2.element(c[:2]), SQRT2.element(c[2:])])
    assert check_radix_identity(r, z, n)


def test_companion_matrix():
    m = companion_matrix(ParamVector([Fraction(1, 2), 1]))
    assert m == [[0, 1], [Fraction(-1, 2), -1]]
    assert companion_matrix(ParamVector([Fraction(3, 7)])) == [[Fraction(-3, 7)]]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.fractions(max_denominator=10, min_value=-3, max_value=3), min_size=1, max_size=4),
       st.fractions(max_denominator=10, min_value=-3, max_value=3))
def test_companion_characteristic_polynomial(coords, t):
    r = ParamVector(coords)
    m = companion_matrix(r)
    d = r.d
    shifted = [[(t if i == j else 0) - m[i][j] for j in range(d)] for i in range(d)]
    chi = r.char_poly()
    assert det(shifted) == sum(c * t ** k for k, c in enumerate(chi))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.fractions(max_denominator=30, min_value=-2, max_value=2), min_size=1, max_size=3).flatmap(
    lambda c: st.tuples(st.just(c), st.lists(st.integers(-1000, 1000), min_size=len(c), max_size=len(c)))))
def test_tau_matches_plain_definition(case):
    coords, z = case
    assert tau(ParamVector(coords), tuple(z)) == tau_plain(coords, z)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.fractions(max_denominator=30, min_value=-2, max_value=2), min_size=2, max_size=2),
       st.tuples(st.integers(-100, 100), st.integers(-100, 100)))
def test_symmetric_variant_agrees_below_one_half(coords, z):
    r = ParamVector(coords)
    s = r.symmetric()
    frac_part = r.dot(z) - (r.dot(z)).__floor__()
    if frac_part < Fraction(1, 2):
        assert tau(s, z) == tau(r, z)
    else:
        assert tau(s, z)[-1] == tau(r, z)[-1] - 1


def test_orbit_sequence_prefix():
    r = ParamVector([Fraction(1, 2), 1])
    seq = orbit_sequence(r, (3, -2), 8)
    z = (3, -2)
    expected = [3, -2]
    for _ in range(6):
        z = tau(r, z)
        expected.append(z[-1])
    assert seq == expected
    assert orbit_sequence(r, (3, -2), 1) == [3]
