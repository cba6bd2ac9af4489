"""Coefficients of the RTT identities in matrix form.

This is the second route to the reordering rules: instead of the closed
commutator formulas used to build the relation table, the identities
``R(u-v) L_1(u) L_2(v) = L_2(v) L_1(u) R(u-v)`` (same sector) and
``R(u-v-hc/2) L_1^+(u) L_2^-(v) = L_2^-(v) L_1^+(u) R(u-v+hc/2)`` are
expanded entry by entry with the generic kernel expansions from
:mod:`yangdouble.scalars`, and the normal form of each coefficient is
required to vanish.
"""
from __future__ import annotations

import itertools

from .algebra import Algebra, AlgebraElement, to_mpq
from .config import NORMALIZED
from .fnorm import solve_f
from .modes import gen
from .relations import ONE, _acc
from .reports import CheckResult, timed
from .scalars import U_OVER_V, HPoly, region_expand


def t_coeff(sector: str, p: int, q: int, e: int) -> list:
    """Coefficient of ``u^e`` in ``t^+_pq(u)`` (sector '+') or ``t^-_pq(u)``
    (sector '-'), as ``[(word, h_degree, q)]``."""
    out = []
    if e == 0 and p == q:
        out.append(((), 0, ONE))
    if sector == "+":
        if e <= -1:
            out.append(((gen(p, q, -e - 1),), 1, -ONE))
    else:
        if e >= 0:
            out.append(((gen(p, q, -e - 1),), 1, ONE))
    return out


def _product(raw: dict, A: list, B: list, scale, dk: int, M: int):
    for wa, da, qa in A:
        for wb, db, qb in B:
            d = da + db + dk
            if d <= M:
                _acc(raw, (wa + wb, d), scale * qa * qb)


def same_sector_residual(alg: Algebra, sector: str, i: int, j: int, k: int, l: int, x: int, y: int) -> AlgebraElement:
    """Coefficient of ``u^x v^y`` in
    ``(u-v)(t_ij(u) t_kl(v) - t_kl(v) t_ij(u)) + h (t_kj(u) t_il(v) - t_kj(v) t_il(u))``."""
    M = alg.M
    t = lambda p, q, e: t_coeff(sector, p, q, e)  # noqa: E731
    raw: dict = {}
    _product(raw, t(i, j, x - 1), t(k, l, y), ONE, 0, M)
    _product(raw, t(i, j, x), t(k, l, y - 1), -ONE, 0, M)
    _product(raw, t(k, l, y), t(i, j, x - 1), -ONE, 0, M)
    _product(raw, t(k, l, y - 1), t(i, j, x), ONE, 0, M)
    _product(raw, t(k, j, x), t(i, l, y), ONE, 1, M)
    _product(raw, t(k, j, y), t(i, l, x), -ONE, 1, M)
    return alg.normal_form(raw)


def _kernel_terms(m_shift: int, gamma, coeffs: list, window: tuple, M: int) -> dict:
    """``sum_m coeffs[m] h^(m + m_shift) (u - v + gamma h)^-(m + m_shift)``
    in the region ``|u| > |v|``."""
    total: dict = {}
    for m, cm in enumerate(coeffs):
        if not cm:
            continue
        e = m + m_shift
        if e == 0:
            total[(0, 0)] = total.get((0, 0), HPoly.const(0, M)) + HPoly.const(cm, M)
            continue
        if e > M:
            break
        ser = region_expand(e, gamma, U_OVER_V, window, M)
        hm = HPoly.monomial(cm, e, M)
        for key, val in ser.coeffs.items():
            total[key] = total.get(key, HPoly.const(0, M)) + val * hm
    return total


def mixed_residual(alg: Algebra, i: int, j: int, k: int, l: int, x: int, y: int) -> AlgebraElement:
    """Coefficient of ``u^x v^y`` (``|u| > |v|``) in
    ``f(a) [t^+_ij(u) t^-_kl(v) + (h/a) t^+_kj(u) t^-_il(v)]
      - f(b) [t^-_kl(v) t^+_ij(u) + (h/b) t^-_kj(v) t^+_il(u)]``
    with ``a = u-v-hc/2``, ``b = u-v+hc/2`` (``f = 1`` without normalization)."""
    cfg = alg.config
    M = alg.M
    if cfg.normalization == NORMALIZED:
        fc = list(solve_f(cfg.n, M + 1).coefficients)
    else:
        fc = [1]
    half = cfg.c / 2
    window = (min(x, -1) - 1, 0, 0, max(y, 0) + 1)
    kernels = [
        (_kernel_terms(0, -half, fc, window, M), ONE, ("+", i, j), ("-", k, l)),
        (_kernel_terms(1, -half, fc, window, M), ONE, ("+", k, j), ("-", i, l)),
        (_kernel_terms(0, half, fc, window, M), -ONE, ("-", k, l), ("+", i, j)),
        (_kernel_terms(1, half, fc, window, M), -ONE, ("-", k, j), ("+", i, l)),
    ]
    raw: dict = {}
    for kern, sign, first, second in kernels:
        for (p, q), val in kern.items():
            # the u-variable belongs to the '+' factor, v to the '-' factor
            rest_u, rest_v = x - p, y - q
            e1 = rest_u if first[0] == "+" else rest_v
            e2 = rest_u if second[0] == "+" else rest_v
            A = t_coeff(first[0], first[1], first[2], e1)
            B = t_coeff(second[0], second[1], second[2], e2)
            for dk, ck in enumerate(val.c):
                if ck:
                    _product(raw, A, B, sign * to_mpq(ck), dk, M)
    return alg.normal_form(raw)


def check_base_commutators(alg: Algebra) -> CheckResult:
    """``[l_ij^(0), l_km^(s)] = delta_kj l_im^(s) - delta_im l_kj^(s)`` exactly,
    for every ``s`` in the window."""
    exact = alg.with_cutoff(None)
    cfg = exact.config
    n = cfg.n
    witness = None
    checked = 0
    with timed() as box:
        for i, j, k, m in itertools.product(range(1, n + 1), repeat=4):
            x = exact.gen(i, j, 0)
            for s in range(-cfg.W, cfg.W + 1):
                y = exact.gen(k, m, s)
                want = exact.zero()
                if k == j:
                    want = want + exact.gen(i, m, s)
                if i == m:
                    want = want - exact.gen(k, j, s)
                checked += 1
                got = x * y - y * x
                if got != want:
                    witness = {"pair": [f"l{i}{j}(0)", f"l{k}{m}({s})"], "got": repr(got)[:300], "want": repr(want)}
                    break
            if witness:
                break
    return CheckResult("relations", f"base-commutators-n{n}-W{cfg.W}-{cfg.normalization}",
                       "gl_n action of the zero modes", witness is None, witness, box["t"], {"pairs": checked})


def check_rtt_route(alg: Algebra, radius: int = 3) -> CheckResult:
    """Every ``u^x v^y`` coefficient of the same-sector and mixed RTT
    identities, with ``|x|, |y| <= radius``, vanishes after normal ordering
    with the relation table."""
    exact = alg.with_cutoff(None)
    n = exact.config.n
    minus_exps = range(0, radius)
    plus_exps = range(-radius, 0)
    witness = None
    checked = 0
    with timed() as box:
        for i, j, k, l in itertools.product(range(1, n + 1), repeat=4):
            cases = [("+", x, y) for x in plus_exps for y in plus_exps]
            cases += [("-", x, y) for x in minus_exps for y in minus_exps]
            cases += [("mixed", x, y) for x in plus_exps for y in minus_exps]
            for kind, x, y in cases:
                if kind == "mixed":
                    r = mixed_residual(exact, i, j, k, l, x, y)
                else:
                    r = same_sector_residual(exact, kind, i, j, k, l, x, y)
                checked += 1
                if r:
                    witness = {"identity": kind, "indices": [i, j, k, l], "u": x, "v": y, "residual": repr(r)[:300]}
                    break
            if witness:
                break
    return CheckResult("relations", f"rtt-route-n{n}-{exact.config.normalization}",
                       "relation table against the RTT coefficients", witness is None, witness, box["t"],
                       {"coefficients": checked})
