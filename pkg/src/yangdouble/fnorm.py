"""The normalization series ``f(u)``.

``f`` is determined by ``f(u - n h) = (u^2 - h^2)/u^2 * f(u)`` together with
``f = 1 + O(1/u)``.  Both sides are invariant under rescaling ``u, h``
together, so ``f(u) = fhat(h/u)`` for a power series ``fhat`` with rational
coefficients, and the equation becomes

    fhat(t / (1 - n t)) = (1 - t^2) fhat(t).

Comparing coefficients of ``t^(m+1)`` gives a triangular recursion for the
coefficient ``c_m`` of ``t^m``.  The infinite product formula for ``f`` is
not used.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

from .reports import CheckResult, timed
from .scalars import NEG, HPoly, HRing, TruncatedSeries


# Power series in t, as lists of Fractions truncated to a fixed length.

def ps_mul(a: list, b: list, K: int) -> list:
    out = [Fraction(0)] * (K + 1)
    for i, x in enumerate(a[: K + 1]):
        if x:
            for j, y in enumerate(b[: K + 1 - i]):
                out[i + j] += x * y
    return out


def ps_moebius(a: list, g, K: int) -> list:
    """``a(t / (1 + g t))`` to order ``t^K``."""
    g = Fraction(g)
    out = [Fraction(0)] * (K + 1)
    for k, x in enumerate(a[: K + 1]):
        if not x:
            continue
        # (t/(1+gt))^k = sum_j C(k+j-1, j) (-g)^j t^(k+j)
        for j in range(K - k + 1):
            coef = comb(k + j - 1, j) if k else (1 if j == 0 else 0)
            out[k + j] += x * coef * (-g) ** j
    return out


def ps_inv(a: list, K: int) -> list:
    b = [1 / Fraction(a[0])]
    for k in range(1, K + 1):
        s = sum((a[i] * b[k - i] for i in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        b.append(-b[0] * s)
    return b


@dataclass(frozen=True)
class NormalizationSeries:
    """``f(u) = 1 + sum_k c_k (h/u)^k`` for a given ``n``."""

    n: int
    coefficients: tuple  # c_0 = 1, c_1, ..., c_K
    order: int

    def hat(self, K: int | None = None) -> list:
        K = self.order if K is None else K
        if K > self.order:
            raise ValueError(f"only {self.order} coefficients available")
        return list(self.coefficients[: K + 1])

    def series(self, N: int, M: int) -> TruncatedSeries:
        """``f(u)`` as a scalar series in ``u^-1`` modulo ``h^(M+1)``."""
        K = min(N, M)
        if K > self.order:
            raise ValueError(f"need {K} coefficients, have {self.order}")
        coeffs = {-k: HPoly.monomial(self.coefficients[k], k, M) for k in range(K + 1)}
        return TruncatedSeries(HRing(M), NEG, coeffs, N)

    def to_json(self) -> dict:
        return {"n": self.n, "order": self.order, "coefficients": [str(c) for c in self.coefficients]}


def solve_f(n: int, K: int) -> NormalizationSeries:
    if n < 1 or K < 1:
        raise ValueError("need n >= 1 and K >= 1")
    c = [Fraction(1)]
    for m in range(1, K + 1):
        s = -c[m - 1]
        for k in range(1, m):
            s -= c[k] * comb(m, k - 1) * n ** (m + 1 - k)
        c.append(s / (m * n))
    return NormalizationSeries(n, tuple(c), K)


def functional_residual(f: NormalizationSeries, K: int | None = None) -> list:
    """Coefficients of ``fhat(t/(1-nt)) - (1-t^2) fhat(t)`` through ``t^(K+1)``.

    The ``t^(K+1)`` coefficient is the equation that fixes ``c_K``; the unknown
    ``c_(K+1)`` enters both sides with coefficient one and cancels, so it is
    set to zero here.
    """
    K = f.order if K is None else K
    a = f.hat(K) + [Fraction(0)]
    lhs = ps_moebius(a, -f.n, K + 1)
    rhs = ps_mul([Fraction(1), Fraction(0), Fraction(-1)], a, K + 1)
    return [x - y for x, y in zip(lhs, rhs)]


def telescoped_product(f: NormalizationSeries, K: int | None = None) -> list:
    """``prod_{j<n} f(u - j h)`` as a series in ``t = h/u``."""
    K = f.order if K is None else K
    a = f.hat(K)
    out = [Fraction(1)] + [Fraction(0)] * K
    for j in range(f.n):
        out = ps_mul(out, ps_moebius(a, -j, K), K)
    return out


def check_telescoping(n: int, K: int, f: NormalizationSeries | None = None) -> CheckResult:
    """Verify ``prod_{j=0}^{n-1} f(u - j h) = (1 + h/u)^-1`` through ``t^K``, the
    defining equation, and the fixed-point equation ``F(u-h) = (1-h^2/u^2) F(u)``
    of the product."""
    with timed() as tm:
        f = f if f is not None else solve_f(n, K)
        witness = None
        res = functional_residual(f, K)
        bad = [k for k, x in enumerate(res) if x]
        if bad:
            witness = {"equation": "functional", "t_degree": bad[0], "residual": res[bad[0]]}
        prod = telescoped_product(f, K)
        target = [Fraction((-1) ** k) for k in range(K + 1)]
        if witness is None:
            for k, (x, y) in enumerate(zip(prod, target)):
                if x != y:
                    witness = {"equation": "telescoping", "t_degree": k, "got": x, "want": y}
                    break
        if witness is None:
            lhs = ps_moebius(prod, -1, K)
            rhs = ps_mul([Fraction(1), Fraction(0), Fraction(-1)], prod, K)
            for k, (x, y) in enumerate(zip(lhs, rhs)):
                if x != y:
                    witness = {"equation": "product fixed point", "t_degree": k, "residual": x - y}
                    break
    return CheckResult(
        "fnorm",
        f"telescoping-n{n}-K{K}",
        "normalization functional equation and telescoping product",
        witness is None,
        witness,
        tm["t"],
        {"coefficients": [str(x) for x in f.coefficients[:6]]},
    )
