from fractions import Fraction
import itertools

import pytest

from yangdouble.scalars import RatFunc
from yangdouble.tensor import (
    PlacementError,
    ScalarKindMismatch,
    build_operator,
    check_crossing,
    check_jucys,
    check_ybe_unitarity,
    compose,
    identity,
    jucys_product,
    partial_trace,
    partial_transpose,
    permutation_operator,
    permutation_sign,
)


def test_permutation_matrix_n2():
    P = build_operator("P", 2)
    assert set(P.entries) == {((1, 1), (1, 1)), ((1, 2), (2, 1)), ((2, 1), (1, 2)), ((2, 2), (2, 2))}


def test_rbar_entries_n2():
    R = build_operator("rbar", 2)
    diag = RatFunc.of("(u+h)/u")
    assert R.entries[((1, 1), (1, 1))] == diag
    assert R.entries[((2, 2), (2, 2))] == diag
    assert R.entries[((1, 2), (1, 2))] == RatFunc.of(1)
    assert R.entries[((1, 2), (2, 1))] == RatFunc.of("h/u")


def test_antisymmetrizer_n2():
    A = build_operator("A", 2, 2)
    P = build_operator("P", 2)
    assert A == (identity(2, 2) - P).scale(Fraction(1, 2))
    assert compose(A, A) == A


@pytest.mark.parametrize("n", [2, 3])
def test_full_trace_of_antisymmetrizer(n):
    assert partial_trace(build_operator("A", n, n), range(1, n + 1)) == RatFunc.of(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_q_squared(n):
    Q = build_operator("Q", n)
    assert compose(Q, Q) == Q.scale(n)


@pytest.mark.parametrize("n,k", [(2, 2), (2, 3), (3, 2)])
def test_basic_invariants(n, k):
    P = build_operator("P", n, k, 1, k)
    assert compose(P, P) == identity(n, k)
    assert partial_trace(identity(n, k), range(1, k + 1)) == RatFunc.of(n ** k)


def test_partial_transpose_involution():
    R = build_operator("rbar", 3, 3, 1, 3)
    assert partial_transpose(partial_transpose(R, [2]), [2]) == R
    assert partial_transpose(build_operator("P", 2), [1]) == build_operator("Q", 2)


@pytest.mark.parametrize("k", [2, 3])
def test_antisymmetrizer_sign_rule(k):
    A = build_operator("A", 3, k)
    for perm in itertools.permutations(range(k)):
        assert compose(permutation_operator(perm, 3), A) == A.scale(permutation_sign(perm))


def test_placement_errors():
    with pytest.raises(PlacementError):
        build_operator("P", 2, 1)
    with pytest.raises(PlacementError):
        partial_trace(identity(2, 2), [3])


def test_scalar_kind_mismatch():
    rat = build_operator("rbar", 2)
    ser = build_operator("rbar_series", 2, N=3, M=3)
    with pytest.raises(ScalarKindMismatch):
        compose(rat, ser)


def test_jucys_k2_is_identity_minus_p():
    # rbar(-h) = I - P = 2 A_2, by direct matrix computation
    R = build_operator("rbar", 2, u="-h")
    assert R == identity(2, 2) - build_operator("P", 2)
    assert R == build_operator("A", 2, 2).scale(2)
    assert jucys_product(2, 2) == R


def test_jucys_k1_is_identity():
    assert jucys_product(1, 3) == identity(3, 1)


@pytest.mark.parametrize("k,n", [(2, 2), (2, 3), (3, 3)])
def test_jucys(k, n):
    assert check_jucys(k, n).passed


def test_h_zero_rbar_is_identity():
    R = build_operator("rbar", 3).map(lambda x: x.subs(h=0))
    assert R == identity(3, 2)


@pytest.mark.parametrize("n", [2, 3])
def test_ybe_unitarity(n):
    results = check_ybe_unitarity(n, points=8, seed=1)
    assert [r.passed for r in results] == [True, True]


@pytest.mark.parametrize("n", [2, 3])
def test_crossing(n):
    assert check_crossing(n, 6, 6).passed


def test_crossing_fails_without_normalization():
    r = check_crossing(2, 6, 6, normalized=False)
    assert not r.passed
    assert r.witness["h_degree"] == 2
