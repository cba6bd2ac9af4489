from fractions import Fraction

import pytest

from conftest import make_algebra
from yangdouble import center
from yangdouble.center import (
    ShiftedEntries,
    build_ell,
    check_ell_centrality,
    check_ell_n_identity,
    check_ell_routes,
    check_inverse_minors,
    check_vacuum_invariants,
    inverse_by_minors,
    qdet,
    qdet_centrality,
    quantum_minor,
    vacuum_act,
)
from yangdouble.config import UNNORMALIZED
from yangdouble.gauss import MINUS_SECTOR, PLUS_SECTOR, aligned_mul, build_L, invert_matrix_series
from yangdouble.modes import gen


def exact(**kw):
    return make_algebra(**kw).with_cutoff(None)


def test_qdet_n2_by_hand():
    alg = exact()
    L = build_L(PLUS_SECTOR, alg, 3)
    ent = ShiftedEntries(L)
    expected = ent(1, 1, 0) * ent(2, 2, 1) - ent(2, 1, 0) * ent(1, 2, 1)
    assert qdet(L) == expected


def test_row_and_column_forms_agree():
    L = build_L(PLUS_SECTOR, exact(n=3, M=2), 3)
    assert qdet(L, "row") == qdet(L, "column")


@pytest.mark.parametrize("c", [-2, 0])
@pytest.mark.parametrize("sector", [PLUS_SECTOR, MINUS_SECTOR])
def test_qdet_central(c, sector):
    assert qdet_centrality(make_algebra(c=c), sector).passed


@pytest.mark.parametrize("sector,probe,commutator", [
    (PLUS_SECTOR, "l21(-2)", "2*h^2*l21(-2)"),
])
def test_qdet_not_central_without_normalization(sector, probe, commutator):
    r = qdet_centrality(make_algebra(normalization=UNNORMALIZED), sector)
    assert not r.passed
    assert (r.witness["exponent"], r.witness["probe"], r.witness["commutator"]) == (-2, probe, commutator)


@pytest.mark.parametrize("n", [2, 3])
def test_inverse_by_minors(n):
    assert check_inverse_minors(make_algebra(n=n, M=3), order=3).passed


def _literal_minor_inverse(L):
    # minor on rows without i and columns without j, as printed
    n = L.shape[0]
    ent = ShiftedEntries(L)
    d_inv = qdet(L, base=-(n - 1)).invert()
    out = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            r = [a for a in range(1, n + 1) if a != i]
            c = [b for b in range(1, n + 1) if b != j]
            x = aligned_mul(d_inv, quantum_minor(ent, r, c, base=-(n - 1)))
            out[i, j] = x if (j - i) % 2 == 0 else -x
    return out


@pytest.mark.parametrize("n", [2, 3])
def test_literal_minor_pattern_fails(n):
    L = build_L(PLUS_SECTOR, exact(n=n, M=2), 3)
    inv = invert_matrix_series(L)
    literal = _literal_minor_inverse(L)
    assert any(literal[i, j] != inv[i, j] for i in range(1, n + 1) for j in range(1, n + 1))
    adj = inverse_by_minors(L)
    assert all(adj[i, j] == inv[i, j] for i in range(1, n + 1) for j in range(1, n + 1))


@pytest.mark.parametrize("k", [1, 2])
def test_ell_routes(k):
    assert check_ell_routes(make_algebra(), k).passed


def test_ell_routes_n3():
    alg = make_algebra(n=3, M=2, p=3)
    assert all(check_ell_routes(alg, k, range(-1, 2)).passed for k in (1, 2, 3))


def test_ell_n_identity():
    assert check_ell_n_identity(make_algebra()).passed


def test_ell_1_constant_term_is_n():
    ell = build_ell(make_algebra(), 1)
    assert ell.coefficients[0].scalar_part().coeff(0) == 2


def test_ell_centrality_small_cutoff():
    results = check_ell_centrality(make_algebra(p=5), 1)
    assert [r.passed for r in results] == [True, True, True]
    assert results[0].check_id.endswith("-q1")


def test_vacuum_invariants():
    assert all(r.passed for r in check_vacuum_invariants(make_algebra()))


def test_vacuum_invariance_fails_off_critical():
    r = check_vacuum_invariants(make_algebra(c=0), kmax=1)[0]
    assert not r.passed
    assert r.witness["exponent"] == 0
    assert r.witness["probe"] == "l11(1)"
    assert r.witness["result"] == "h^3*l11(-1) + -1*h^3*l22(-1)"


def test_vacuum_qdet_invariant_at_any_level():
    results = check_vacuum_invariants(make_algebra(c=0), kmax=2)
    assert any(r.passed and "k2" in r.check_id for r in results)


def test_vacuum_act_kills_plus_modes():
    alg = make_algebra()
    v = exact().gen(1, 2, -1)
    assert not vacuum_act(alg.gen(1, 1, 2), exact().one())
    assert vacuum_act(alg.gen(1, 1, 0), v) == exact().gen(1, 2, -1)


def test_vacuum_rejects_plus_vectors():
    alg = make_algebra()
    with pytest.raises(ValueError):
        vacuum_act(alg.gen(1, 1, -1), exact().gen(1, 1, 0))
