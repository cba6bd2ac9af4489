"""The twelve acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line with its wall
time; run ``python3 tests/test_acceptance.py`` to get only those lines.
"""
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from conftest import make_algebra  # noqa: E402
from yangdouble import center, hc, rtt, tensor  # noqa: E402
from yangdouble.algebra import check_graded_leading_terms  # noqa: E402
from yangdouble.config import UNNORMALIZED  # noqa: E402
from yangdouble.currents import run_gauss_suite  # noqa: E402
from yangdouble.fnorm import check_telescoping  # noqa: E402
from yangdouble.gauss import MINUS_SECTOR, PLUS_SECTOR  # noqa: E402


def criterion_1():
    """YBE and unitarity at n = 2, 3."""
    results = tensor.check_ybe_unitarity(2) + tensor.check_ybe_unitarity(3)
    return all(r.passed for r in results), f"{len(results)} identities"


def criterion_2():
    """Jucys fusion for k = 2, 3 at n = 3."""
    results = [tensor.check_jucys(k, 3) for k in (2, 3)]
    return all(r.passed for r in results), "k = 2, 3"


def criterion_3():
    """Functional equation and telescoping to order 12 for n = 1, 2, 3."""
    results = [check_telescoping(n, 12) for n in (1, 2, 3)]
    return all(r.passed for r in results), "K = 12"


def criterion_4():
    """Crossing modulo (h^7, u^-7) at n = 2, 3 and the rbar-only control."""
    ok = all(tensor.check_crossing(n, 6, 6).passed for n in (2, 3))
    control = tensor.check_crossing(2, 6, 6, normalized=False)
    return ok and not control.passed, f"control witness {control.witness}"


def criterion_5():
    """Base commutators and graded leading terms, n = 2, W = 4, M = 4."""
    alg = make_algebra(W=4, M=4)
    base = rtt.check_base_commutators(alg)
    lead = check_graded_leading_terms(alg)
    lead_u = check_graded_leading_terms(make_algebra(W=4, M=4, normalization=UNNORMALIZED))
    return base.passed and lead.passed and lead_u.passed, f"{lead.details['pairs_checked']} pairs"


def criterion_6():
    """Gauss decomposition, quasideterminants, qdet factorization and the
    default relation families at n = 2, 3 with (M, N) = (4, 4), window 3."""
    failed = []
    total = 0
    for n in (2, 3):
        alg = make_algebra(n=n, normalization=UNNORMALIZED, M=4, N=4)
        results = run_gauss_suite(alg, window=3)
        total += len(results)
        failed += [r.check_id for r in results if not r.passed]
    return not failed, f"{total} checks, failed: {failed}"


def criterion_7():
    """qdet coefficients central at c = -2 and c = 0."""
    results = [center.qdet_centrality(make_algebra(c=c), s, order=4, probe_range=2)
               for c in (-2, 0) for s in (PLUS_SECTOR, MINUS_SECTOR)]
    return all(r.passed for r in results), f"{sum(r.details['commutators'] for r in results)} commutators"


def criterion_8():
    """l_1, l_2 central at c = -2 (p = 6, 7, stable); c = 0 control fails for l_1."""
    crit = make_algebra().with_cutoff(6)
    results = []
    for k in (1, 2):
        results += center.check_ell_centrality(crit, k)
    control = center.check_ell_centrality(make_algebra(c=0).with_cutoff(6), 1)[0]
    ok = all(r.passed for r in results) and not control.passed
    return ok, f"{len(results)} checks; control residual {control.witness['residual'][:40]}..."


def criterion_9():
    """Operator-trace l_k against the two trace formulas, and l_n through qdet."""
    alg = make_algebra()
    results = [center.check_ell_routes(alg, k) for k in (1, 2)] + [center.check_ell_n_identity(alg)]
    return all(r.passed for r in results), "k = 1, 2 and l_n"


def criterion_10():
    """HC image at n = 2 (k = 1, 2; M = N = p = 4) and n = 3 (k = 1; M = N = p = 3); multiplicativity."""
    alg = make_algebra()
    ells = {k: center.build_ell(alg, k) for k in (1, 2)}
    results = []
    for k in (1, 2):
        results += hc.check_hc_image(alg, k, ell=ells[k])
    results += hc.check_hc_image(make_algebra(n=3, M=3, N=3, p=3), 1)
    results.append(hc.check_multiplicativity(alg, 1, 2, range(-2, 3), ells))
    return all(r.passed for r in results), f"{len(results)} checks"


def criterion_11():
    """Wakimoto eigenvalues for 5 seeds, k = 1, 2, and the trivial parameters."""
    alg = make_algebra()
    ring = hc.image_ring(alg)
    results = []
    for k in (1, 2):
        results.append(hc.check_trivial_wakimoto(2, k, 4))
        image = hc.chi_of_ell(center.build_ell(alg, k), ring)
        for seed in range(5):
            params = hc.WakimotoParams.random(2, 4, seed)
            results += hc.check_wakimoto_consistency(params, k, 4, chi_image=image)
    return all(r.passed for r in results), f"{len(results)} checks"


def criterion_12():
    """Vacuum invariance of lbar_1, lbar_2 and their commutativity at n = 2."""
    results = center.check_vacuum_invariants(make_algebra())
    return all(r.passed for r in results), f"{len(results)} checks"


CRITERIA = [
    (1, criterion_1, 60),
    (2, criterion_2, 60),
    (3, criterion_3, 1),
    (4, criterion_4, 300),
    (5, criterion_5, 600),
    (6, criterion_6, 1800),
    (7, criterion_7, 900),
    (8, criterion_8, 3600),
    (9, criterion_9, 1200),
    (10, criterion_10, 3600),
    (11, criterion_11, 300),
    (12, criterion_12, 600),
]


def evaluate(number, fn, budget):
    t0 = time.perf_counter()
    ok, info = fn()
    elapsed = time.perf_counter() - t0
    in_time = elapsed < budget
    status = "PASS" if ok and in_time else "FAIL"
    line = f"criterion {number:2d}: {status}  {elapsed:8.2f}s (budget {budget}s)  {fn.__doc__.strip().splitlines()[0]}"
    if not ok:
        line += f"  [{info}]"
    return ok, in_time, line


@pytest.mark.parametrize("number,fn,budget", CRITERIA, ids=[f"criterion-{c[0]}" for c in CRITERIA])
def test_criterion(number, fn, budget, capsys):
    ok, in_time, line = evaluate(number, fn, budget)
    with capsys.disabled():
        print("\n" + line)
    assert ok
    assert in_time


if __name__ == "__main__":
    failures = 0
    for number, fn, budget in CRITERIA:
        ok, in_time, line = evaluate(number, fn, budget)
        failures += not (ok and in_time)
        print(line, flush=True)
    sys.exit(1 if failures else 0)
