from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from yangdouble.scalars import (
    NEG,
    POS,
    U_OVER_V,
    V_OVER_U,
    DirectionMismatch,
    HPoly,
    NotInvertible,
    RatFunc,
    TruncatedSeries,
    TruncationMismatch,
    delta_series,
    h_series,
    region_difference,
    region_expand,
    scalar_series,
    series_arith,
    series_invert,
    shift_substitute,
)

M, N = 4, 6

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@st.composite
def series(draw, direction=NEG, unit=False):
    coeffs = {}
    for e in range(0, N + 1):
        exp = -e if direction == NEG else e
        hc = draw(st.lists(rationals, min_size=0, max_size=M + 1))
        if hc:
            coeffs[exp] = HPoly(hc, M)
    if unit:
        coeffs[0] = HPoly([draw(rationals.filter(bool))], M) + coeffs.get(0, HPoly((), M)).shift(1)
    return scalar_series(coeffs, direction, N, M)


def one(direction=NEG):
    return scalar_series({0: 1}, direction, N, M)


def test_hpoly_truncates_at_M():
    h = HPoly.monomial(1, 1, 2)
    assert h * h * h == HPoly((), 2)
    assert (1 + h).inverse() == HPoly([1, -1, 1], 2)


def test_difference_of_squares():
    a = h_series({-1: 1}, NEG, N, M)
    assert series_arith(one() + a, one() - a, "mul") == one() - h_series({-2: 1}, NEG, N, M)


def test_annihilator():
    a = h_series({-1: 3, -2: Fraction(1, 2)}, NEG, N, M)
    zero = TruncatedSeries.zero(a.ring, NEG, N)
    assert series_arith(a, zero, "mul") == zero
    assert not series_arith(a, zero, "mul")


def test_geometric_inverse():
    a = one() + h_series({-1: 1}, NEG, N, M)
    expected = h_series({-k: (-1) ** k for k in range(M + 1)}, NEG, N, M)
    assert series_invert(a) == expected


def test_invert_identity():
    assert series_invert(one()) == one()


def test_direction_mismatch():
    with pytest.raises(DirectionMismatch):
        series_arith(one(NEG), one(POS), "add")


def test_truncation_mismatch():
    other = scalar_series({0: 1}, NEG, N + 1, M)
    with pytest.raises(TruncationMismatch):
        series_arith(one(), other, "mul")


def test_non_unit_not_invertible():
    with pytest.raises(NotInvertible):
        series_invert(h_series({0: 0, -1: 1}, NEG, N, M))


def test_shift_of_u_inverse():
    u_inv = scalar_series({-1: 1}, NEG, N, M)
    expected = scalar_series({-1 - k: HPoly.monomial((-1) ** k, k, M) for k in range(M + 1)}, NEG, N, M)
    assert shift_substitute(u_inv, 1) == expected


def test_shift_of_constant():
    c = scalar_series({0: HPoly([2, 3], M)}, NEG, N, M)
    assert shift_substitute(c, Fraction(7, 3)) == c


@pytest.mark.parametrize("gamma", [1, -1, Fraction(1, 2), Fraction(-5, 4), 3])
def test_shift_round_trip(gamma):
    a = scalar_series({0: 1, -1: HPoly([0, 1], M), -2: HPoly([2, 0, 1], M), -3: 5}, NEG, N, M)
    assert shift_substitute(shift_substitute(a, gamma), -gamma) == a


def test_u_over_v_expansion_of_kernel():
    window = (-5, -1, 0, 4)
    e = region_expand(1, 0, U_OVER_V, window, M)
    expected = {(-k - 1, k): HPoly.const(1, M) for k in range(0, 5)}
    assert {k: e.coeff(*k) for k in expected} == expected
    assert all(e.coeff(p, q) == HPoly((), M) for p in range(-5, 0) for q in range(0, 5) if (p, q) not in expected)


def test_two_regions_sum_to_delta():
    window = (-5, 4, -5, 4)
    a = region_expand(1, 0, U_OVER_V, window, M)
    b = region_expand(1, 0, V_OVER_U, window, M)
    assert region_difference(a, b) == delta_series(window, M)


@pytest.mark.parametrize("gamma", [0, 1, Fraction(-1, 2), 2])
def test_second_power_by_derivative(gamma):
    # d/dv (u - v + gamma h)^-1 = (u - v + gamma h)^-2
    one_ = region_expand(1, gamma, U_OVER_V, (-9, -1, 0, 5), M)
    two = region_expand(2, gamma, U_OVER_V, (-9, -1, 0, 4), M)
    for p in range(-9, 0):
        for q in range(0, 5):
            assert two.coeff(p, q) == one_.coeff(p, q + 1) * (q + 1)


def test_kernel_product_matches_convolution():
    window = (-8, -1, 0, 5)
    a = region_expand(1, 1, U_OVER_V, window, M)
    b = region_expand(1, -1, U_OVER_V, window, M)
    prod = a * b
    for p in range(-8, -1):
        for q in range(0, 5):
            total = HPoly((), M)
            for p1 in range(p + 1, 0):
                for q1 in range(0, q + 1):
                    total = total + a.coeff(p1, q1) * b.coeff(p - p1, q - q1)
            assert prod.coeff(p, q) == total


def test_ratfunc_matches_series():
    r = RatFunc.of("(u+h)/(u-h)")
    s = r.to_series(N, M)
    direct = series_arith(one() + h_series({-1: 1}, NEG, N, M),
                          series_invert(one() - h_series({-1: 1}, NEG, N, M)), "mul")
    assert s == direct


def test_ratfunc_is_reduced():
    assert RatFunc.of("(u**2-h**2)/(u-h)") == RatFunc.of("u+h")


@settings(max_examples=40, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a


@settings(max_examples=40, deadline=None)
@given(series(unit=True))
def test_inverse_two_sided(a):
    inv = series_invert(a)
    assert a * inv == one()
    assert inv * a == one()


@settings(max_examples=30, deadline=None)
@given(series(), rationals, rationals)
def test_shift_composes(a, g1, g2):
    assert shift_substitute(shift_substitute(a, g1), g2) == shift_substitute(a, g1 + g2)


@settings(max_examples=30, deadline=None)
@given(series(POS), series(POS))
def test_positive_direction_commutes(a, b):
    assert a * b == b * a
