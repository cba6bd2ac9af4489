from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_algebra
from yangdouble.center import build_ell
from yangdouble.hc import (
    DiagonalRing,
    WakimotoParams,
    check_hc_image,
    check_hc_image_unshifted,
    check_multiplicativity,
    check_qdet_plus_image,
    check_trivial_wakimoto,
    check_wakimoto_consistency,
    chi,
    chi_of_ell,
    image_ring,
    load_wakimoto_params,
    parse_wakimoto_params,
    wakimoto_eigenvalues,
)
from yangdouble.scalars import HPoly


@pytest.fixture(scope="module")
def ells():
    alg = make_algebra()
    return {k: build_ell(alg, k) for k in (1, 2)}


def test_chi_of_diagonal_word():
    alg = make_algebra().with_cutoff(None)
    ring = DiagonalRing(2, 4, None)
    x = alg.gen(1, 1, -1) * alg.gen(2, 2, 0)
    assert chi(x) == ring.var(1, -1) * ring.var(2, 0)


def test_chi_kills_off_diagonal():
    alg = make_algebra().with_cutoff(None)
    assert not chi(alg.gen(1, 2, -1) * alg.gen(2, 1, 0))
    assert not chi(alg.gen(2, 1, -1) * alg.gen(1, 1, 0))


def test_diagonal_ring_cutoff():
    ring = DiagonalRing(2, 3, 2)
    assert not ring.var(1, 2)
    assert ring.var(1, 1) * ring.var(2, -3)


def test_diagonal_inverse():
    ring = DiagonalRing(2, 3, None)
    x = ring.one() + ring.var(1, 0).hscale(HPoly.monomial(1, 1, 3))
    assert x * ring.inverse(x) == ring.one()


@pytest.mark.parametrize("k", [1, 2])
def test_hc_image_n2(ells, k):
    assert all(r.passed for r in check_hc_image(make_algebra(), k, ell=ells[k]))


def test_hc_image_n3_k1():
    assert all(r.passed for r in check_hc_image(make_algebra(n=3, M=3, p=3), 1))


def test_unshifted_formula_fails(ells):
    r = check_hc_image_unshifted(make_algebra(), 1, ells[1])
    assert not r.passed
    assert r.witness == {"exponent": -2}


def test_image_is_level_independent(ells):
    ring = image_ring(make_algebra())
    other = build_ell(make_algebra(c=0), 1)
    assert chi_of_ell(other, ring) == chi_of_ell(ells[1], ring)


def test_multiplicativity(ells):
    assert check_multiplicativity(make_algebra(), 1, 2, range(-2, 3), ells).passed


@pytest.mark.parametrize("n", [2, 3])
def test_qdet_plus_image(n):
    assert check_qdet_plus_image(make_algebra(n=n, M=3), order=3).passed


@pytest.mark.parametrize("n,k,expected", [(2, 1, 2), (2, 2, 1), (3, 1, 3), (3, 2, 3), (4, 2, 6)])
def test_trivial_parameters_give_binomial(n, k, expected):
    assert check_trivial_wakimoto(n, k, 3).passed
    assert wakimoto_eigenvalues(WakimotoParams.trivial(n), k, 3, range(-2, 3)) == {0: HPoly.const(expected, 3)}


@pytest.mark.parametrize("seed", range(5))
@pytest.mark.parametrize("k", [1, 2])
def test_random_parameters(ells, seed, k):
    alg = make_algebra()
    params = WakimotoParams.random(2, 4, seed)
    image = chi_of_ell(ells[k], image_ring(alg))
    assert all(r.passed for r in check_wakimoto_consistency(params, k, 4, chi_image=image))


def test_n3_parameters():
    params = WakimotoParams.random(3, 2, 7)
    for k in (1, 2, 3):
        assert all(r.passed for r in check_wakimoto_consistency(params, k, 2, range(-1, 2)))


def test_chi_image_cutoff_guard(ells):
    params = WakimotoParams.random(2, 5, 0)
    image = chi_of_ell(ells[1], image_ring(make_algebra()))
    with pytest.raises(ValueError):
        check_wakimoto_consistency(params, 1, 4, chi_image=image)


def test_parameter_text_round_trip(tmp_path):
    params = WakimotoParams.random(3, 3, 11)
    path = tmp_path / "w.ini"
    path.write_text(params.to_text())
    assert load_wakimoto_params(path) == params


def test_parameter_file_format():
    text = "[wakimoto]\nn = 2\nkappa_plus = 1, -1/2\nkappa_minus_1 = 3\nkappa_minus_2 =\n"
    p = parse_wakimoto_params(text)
    assert p.plus == (Fraction(1), Fraction(-1, 2))
    assert p.minus == ((Fraction(3),), ())
    assert p.value(1, -1) == 3 and p.value(2, -1) == 0 and p.value(2, 1) == Fraction(-1, 2)


@pytest.mark.parametrize("text", [
    "[other]\nn = 2\n",
    "[wakimoto]\nn = 2\nkappa_plus = 1\nkappa_minus_3 = 1\n",
    "[wakimoto]\nn = 2\nkappa_plus = x\n",
])
def test_parameter_file_errors(text):
    with pytest.raises(ValueError):
        parse_wakimoto_params(text)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=1, max_size=2),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=0, max_size=2),
       st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=0, max_size=2))
def test_eigenvalues_match_image_property(a, b1, b2):
    params = WakimotoParams(2, tuple(a), (tuple(b1), tuple(b2)))
    for k in (1, 2):
        assert all(r.passed for r in check_wakimoto_consistency(params, k, 3, range(-1, 2)))
