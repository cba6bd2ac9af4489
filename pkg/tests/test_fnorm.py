from fractions import Fraction

import pytest

from yangdouble.fnorm import (
    NormalizationSeries,
    check_telescoping,
    functional_residual,
    solve_f,
    telescoped_product,
)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_first_coefficient(n):
    # t^2 equation of fhat(t/(1-nt)) = (1-t^2) fhat(t): n c_1 = -1
    assert solve_f(n, 3).coefficients[1] == Fraction(-1, n)


def test_n2_second_coefficient_by_hand():
    # t^3 equation: n^2 c_1 + 2 n c_2 + c_3 = c_3 - c_1, so c_2 = 5/8 at n = 2
    assert solve_f(2, 3).coefficients[2] == Fraction(5, 8)


def test_n1_is_geometric():
    assert solve_f(1, 10).coefficients == tuple(Fraction((-1) ** k) for k in range(11))


def test_frozen_n2():
    assert solve_f(2, 6).coefficients == tuple(map(Fraction, ["1", "-1/2", "5/8", "-11/16", "83/128", "-143/256",
                                                             "625/1024"]))


def test_frozen_n3():
    assert solve_f(3, 4).coefficients == tuple(map(Fraction, ["1", "-1/3", "5/9", "-59/81", "143/243"]))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_functional_residual_vanishes(n):
    assert not any(functional_residual(solve_f(n, 12)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_telescoping(n):
    assert check_telescoping(n, 12).passed
    expected = [Fraction((-1) ** k) for k in range(13)]
    assert telescoped_product(solve_f(n, 12)) == expected


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_perturbation_breaks_equation(k):
    f = solve_f(2, 6)
    c = list(f.coefficients)
    c[k] += Fraction(1, 7)
    bad = NormalizationSeries(2, tuple(c), 6)
    res = functional_residual(bad)
    assert next(i for i, x in enumerate(res) if x) == k + 1
    assert not check_telescoping(2, 6, bad).passed


def test_h_zero_is_one():
    s = solve_f(2, 4).series(4, 4)
    assert all(x.coeff(0) == 0 for e, x in s.coeffs.items() if e != 0)


def test_invalid_input():
    with pytest.raises(ValueError):
        solve_f(0, 3)
