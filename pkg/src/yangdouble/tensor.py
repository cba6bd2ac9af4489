"""Sparse operators on ``(C^n)^{\\otimes k}`` and the R-matrix identity checks.

Multi-indices are tuples ``(i_1, ..., i_k)`` with ``1 <= i_a <= n``; when a
flat label is needed it is the mixed-radix number with factor 1 most
significant (:func:`index_code`).

Entries are either all :class:`~yangdouble.scalars.RatFunc` (``kind="rat"``)
or all scalar :class:`~yangdouble.scalars.TruncatedSeries` in ``u^-1``
(``kind="series"``).  The series backend exists because the normalization
``f(u)`` is only known as a series.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import factorial
from typing import Callable

from .fnorm import NormalizationSeries, solve_f
from .reports import CheckResult, timed
from .scalars import NEG, HRing, RatFunc, TruncatedSeries, as_fraction, series_invert

RAT = "rat"
SERIES = "series"


class ScalarKindMismatch(TypeError):
    pass


class PlacementError(ValueError):
    pass


def index_code(idx: tuple, n: int) -> int:
    code = 0
    for i in idx:
        code = code * n + (i - 1)
    return code


def permutation_sign(p) -> int:
    p = list(p)
    sign = 1
    seen = [False] * len(p)
    for i in range(len(p)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


class SeriesScalars:
    """Scalar field descriptor for the series backend."""

    def __init__(self, N: int, M: int):
        self.N, self.M = N, M
        self.ring = HRing(M)

    def const(self, x) -> TruncatedSeries:
        from .scalars import HPoly

        return TruncatedSeries(self.ring, NEG, {0: HPoly.const(as_fraction(x), self.M)}, self.N)

    def __eq__(self, other):
        return isinstance(other, SeriesScalars) and (other.N, other.M) == (self.N, self.M)


class TensorOperator:
    __slots__ = ("n", "k", "kind", "field", "entries")

    def __init__(self, n: int, k: int, kind: str, entries: dict, field=None):
        self.n, self.k, self.kind = n, k, kind
        if kind == SERIES and field is None:
            raise ValueError("series operators need their (N, M) field")
        self.field = field
        self.entries = {key: x for key, x in entries.items() if x}

    # scalar helpers

    def _const(self, x):
        if self.kind == RAT:
            return RatFunc.of(Fraction(x))
        return self.field.const(x)

    def _like(self, entries: dict, k: int | None = None) -> "TensorOperator":
        return TensorOperator(self.n, self.k if k is None else k, self.kind, entries, self.field)

    def _check(self, other: "TensorOperator"):
        if not isinstance(other, TensorOperator):
            raise TypeError("expected a TensorOperator")
        if other.kind != self.kind or other.field != self.field:
            raise ScalarKindMismatch("mixing rational-function and series operators; expand first")
        if (other.n, other.k) != (self.n, self.k):
            raise PlacementError("operators act on different tensor powers")

    # arithmetic

    def __add__(self, other):
        self._check(other)
        out = dict(self.entries)
        for key, x in other.entries.items():
            out[key] = out[key] + x if key in out else x
        return self._like(out)

    def __neg__(self):
        return self._like({key: -x for key, x in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "TensorOperator":
        if self.kind == RAT:
            s = RatFunc.of(s)
            return self._like({key: x * s for key, x in self.entries.items()})
        if isinstance(s, TruncatedSeries):
            return self._like({key: x * s for key, x in self.entries.items()})
        return self._like({key: x.scale(s) for key, x in self.entries.items()})

    def __matmul__(self, other):
        return compose(self, other)

    def __eq__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return (self.n, self.k, self.kind) == (other.n, other.k, other.kind) and self.entries == other.entries

    def is_zero(self) -> bool:
        return not self.entries

    def map(self, fn: Callable) -> "TensorOperator":
        return self._like({key: fn(x) for key, x in self.entries.items()})

    def expand(self, N: int, M: int) -> "TensorOperator":
        """Series expansion of a rational-function operator (entries in ``u, h``)."""
        if self.kind != RAT:
            raise ScalarKindMismatch("already a series operator")
        return TensorOperator(
            self.n, self.k, SERIES, {key: x.to_series(N, M) for key, x in self.entries.items()}, SeriesScalars(N, M)
        )

    def evaluate(self, **point) -> dict:
        if self.kind != RAT:
            raise ScalarKindMismatch("only rational-function operators can be evaluated")
        out = {}
        for key, x in self.entries.items():
            val = x.evaluate(**point)
            if val:
                out[key] = val
        return out

    def __repr__(self):
        return f"TensorOperator(n={self.n}, k={self.k}, {self.kind}, {len(self.entries)} entries)"


def all_indices(n: int, k: int):
    return itertools.product(range(1, n + 1), repeat=k)


def identity(n: int, k: int, kind: str = RAT, field=None) -> TensorOperator:
    one = RatFunc.of(1) if kind == RAT else field.const(1)
    return TensorOperator(n, k, kind, {(i, i): one for i in all_indices(n, k)}, field)


def permutation_operator(perm: tuple, n: int, kind: str = RAT, field=None) -> TensorOperator:
    """``P_sigma`` sending ``e_{i_1} x ... x e_{i_k}`` to the tensor whose factor
    ``sigma(a)`` is ``e_{i_a}`` (``perm`` is 0-based)."""
    k = len(perm)
    one = RatFunc.of(1) if kind == RAT else field.const(1)
    out = {}
    for col in all_indices(n, k):
        row = [0] * k
        for a in range(k):
            row[perm[a]] = col[a]
        out[(tuple(row), col)] = one
    return TensorOperator(n, k, kind, out, field)


def _two_site(n: int, k: int, a: int, b: int, local: dict, kind: str, field) -> TensorOperator:
    """Embed an operator on factors ``(a, b)`` (1-based) given by
    ``local[(i, j), (p, q)]``."""
    if not (1 <= a <= k and 1 <= b <= k and a != b):
        raise PlacementError(f"placement ({a}, {b}) invalid for {k} factors")
    out = {}
    for ((i, j), (p, q)), x in local.items():
        for rest in all_indices(n, k - 2):
            row, col = [], []
            it = iter(rest)
            for pos in range(1, k + 1):
                if pos == a:
                    row.append(i)
                    col.append(p)
                elif pos == b:
                    row.append(j)
                    col.append(q)
                else:
                    r = next(it)
                    row.append(r)
                    col.append(r)
            out[(tuple(row), tuple(col))] = x
    return TensorOperator(n, k, kind, out, field)


def build_operator(
    kind: str,
    n: int,
    k: int = 2,
    a: int = 1,
    b: int = 2,
    u="u",
    f: NormalizationSeries | None = None,
    N: int | None = None,
    M: int | None = None,
    shift=0,
) -> TensorOperator:
    """Build one of ``P, rbar, r_norm, A, Q, identity`` on ``k`` factors.

    ``rbar`` is ``I + (h/u) P_ab`` with ``u`` any rational expression in
    ``u, v, h``.  ``r_norm`` is ``f(u) rbar(u)`` in the series backend, with
    argument ``u + shift*h``; it needs ``N`` and ``M``.  ``A`` is the
    antisymmetrizer on all ``k`` factors.
    """
    if kind == "identity":
        return identity(n, k)
    if kind == "A":
        total: TensorOperator | None = None
        for perm in itertools.permutations(range(k)):
            term = permutation_operator(perm, n).scale(Fraction(permutation_sign(perm), factorial(k)))
            total = term if total is None else total + term
        return total
    if k < 2:
        raise PlacementError("two-site operator on fewer than two factors")
    one = RatFunc.of(1)
    if kind == "P":
        local = {((i, j), (j, i)): one for i in range(1, n + 1) for j in range(1, n + 1)}
        return _two_site(n, k, a, b, local, RAT, None)
    if kind == "Q":
        local = {((i, i), (j, j)): one for i in range(1, n + 1) for j in range(1, n + 1)}
        return _two_site(n, k, a, b, local, RAT, None)
    if kind == "rbar":
        ratio = RatFunc.of("h") / RatFunc.of(u)
        local = {}
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                key = ((i, j), (j, i))
                local[key] = local.get(key, RatFunc.of(0)) + ratio
                key = ((i, j), (i, j))
                local[key] = local.get(key, RatFunc.of(0)) + one
        return _two_site(n, k, a, b, local, RAT, None)
    if kind in ("r_norm", "rbar_series"):
        if N is None or M is None:
            raise ValueError("series operators need N and M")
        ser = build_operator("rbar", n, k, a, b).expand(N, M)
        if kind == "r_norm":
            f = f if f is not None else solve_f(n, max(N, M))
            ser = ser.scale(f.series(N, M))
        if shift:
            ser = ser.map(lambda x: x.shift(shift))
        return ser
    raise ValueError(f"unknown operator kind {kind!r}")


def compose(x: TensorOperator, y: TensorOperator) -> TensorOperator:
    x._check(y)
    by_row: dict = {}
    for (r, c), val in y.entries.items():
        by_row.setdefault(r, []).append((c, val))
    out: dict = {}
    for (r, m), a in x.entries.items():
        for c, b in by_row.get(m, ()):
            key = (r, c)
            p = a * b
            out[key] = out[key] + p if key in out else p
    return x._like(out)


def partial_trace(op: TensorOperator, factors):
    """Trace over the given 1-based factors.  Tracing all factors returns a scalar."""
    factors = sorted(set(factors))
    if any(not 1 <= a <= op.k for a in factors):
        raise PlacementError("trace factor out of range")
    keep = [a for a in range(1, op.k + 1) if a not in factors]
    out: dict = {}
    for (r, c), x in op.entries.items():
        if any(r[a - 1] != c[a - 1] for a in factors):
            continue
        key = (tuple(r[a - 1] for a in keep), tuple(c[a - 1] for a in keep))
        out[key] = out[key] + x if key in out else x
    if not keep:
        return out.get(((), ()), op._const(0))
    return op._like(out, len(keep))


def partial_transpose(op: TensorOperator, factors) -> TensorOperator:
    factors = set(factors)
    if any(not 1 <= a <= op.k for a in factors):
        raise PlacementError("transpose factor out of range")
    out = {}
    for (r, c), x in op.entries.items():
        r2, c2 = list(r), list(c)
        for a in factors:
            r2[a - 1], c2[a - 1] = c[a - 1], r[a - 1]
        out[(tuple(r2), tuple(c2))] = x
    return op._like(out)


def operator_inverse(op: TensorOperator) -> TensorOperator:
    """Inverse of a series operator ``I + X`` with ``X`` of positive h-valuation,
    by the terminating geometric series."""
    if op.kind != SERIES:
        raise ScalarKindMismatch("inverse is implemented for series operators")
    ident = identity(op.n, op.k, SERIES, op.field)
    X = op - ident
    for (r, c), x in X.entries.items():
        for e, a in x.coeffs.items():
            if a.coeff(0):
                raise ValueError("operator is not identity modulo h")
    result, power = ident, ident
    for _ in range(op.field.M):
        power = -compose(power, X)
        if power.is_zero():
            break
        result = result + power
    return result


def _numeric_compose(x: dict, y: dict) -> dict:
    by_row: dict = {}
    for (r, c), val in y.items():
        by_row.setdefault(r, []).append((c, val))
    out: dict = {}
    for (r, m), a in x.items():
        for c, b in by_row.get(m, ()):
            out[(r, c)] = out.get((r, c), 0) + a * b
    return {k: v for k, v in out.items() if v}


def _first_difference(x: TensorOperator, y: TensorOperator):
    for key in sorted(set(x.entries) | set(y.entries)):
        a, b = x.entries.get(key), y.entries.get(key)
        if a != b:
            return key, a, b
    return None


def check_ybe_unitarity(n: int, points: int = 20, seed: int = 0) -> list:
    """Yang-Baxter equation and unitarity of ``rbar``, symbolically and at
    seeded random rational points (where each factor is evaluated first and
    the products are formed numerically)."""
    results = []
    rng = random.Random(seed)
    pts = []
    while len(pts) < points:
        p = {s: Fraction(rng.randint(-40, 40), rng.randint(1, 9)) for s in ("u", "v", "h")}
        if p["u"] and p["v"] and p["u"] != p["v"]:
            pts.append(p)

    with timed() as tm:
        R12 = build_operator("rbar", n, 3, 1, 2, u="u-v")
        R13 = build_operator("rbar", n, 3, 1, 3, u="u")
        R23 = build_operator("rbar", n, 3, 2, 3, u="v")
        lhs = R12 @ R13 @ R23
        rhs = R23 @ R13 @ R12
        diff = _first_difference(lhs, rhs)
        witness = None if diff is None else {"entry": diff[0], "lhs": repr(diff[1]), "rhs": repr(diff[2])}
        if witness is None:
            for p in pts:
                a = _numeric_compose(_numeric_compose(R12.evaluate(**p), R13.evaluate(**p)), R23.evaluate(**p))
                b = _numeric_compose(_numeric_compose(R23.evaluate(**p), R13.evaluate(**p)), R12.evaluate(**p))
                if a != b:
                    key = next(k for k in sorted(set(a) | set(b)) if a.get(k) != b.get(k))
                    witness = {"entry": key, "point": p}
                    break
    results.append(CheckResult("rmatrix", f"ybe-n{n}", "Yang-Baxter equation for rbar", witness is None, witness, tm["t"], {"points": pts}))

    with timed() as tm:
        R12 = build_operator("rbar", n, 2, 1, 2, u="u")
        R21m = build_operator("rbar", n, 2, 2, 1, u="-u")
        prod = R12 @ R21m
        target = identity(n, 2).scale(RatFunc.of("(u**2 - h**2)/u**2"))
        diff = _first_difference(prod, target)
        witness = None if diff is None else {"entry": diff[0], "lhs": repr(diff[1]), "rhs": repr(diff[2])}
        if witness is None:
            for p in pts:
                a = _numeric_compose(R12.evaluate(**p), R21m.evaluate(**p))
                b = target.evaluate(**p)
                if a != b:
                    witness = {"point": p}
                    break
    results.append(CheckResult("rmatrix", f"unitarity-n{n}", "unitarity of rbar", witness is None, witness, tm["t"], {"points": pts}))
    return results


def jucys_product(k: int, n: int) -> TensorOperator:
    """``prod_{i<j} rbar_ij(u_i - u_j)`` in lexicographic order with ``u_i = u + (i-1)h``."""
    out = identity(n, k)
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            out = out @ build_operator("rbar", n, k, i, j, u=f"({i - j})*h")
    return out


def check_jucys(k: int, n: int) -> CheckResult:
    if k > n:
        raise ValueError("need k <= n")
    with timed() as tm:
        lhs = jucys_product(k, n)
        rhs = build_operator("A", n, k).scale(factorial(k))
        diff = _first_difference(lhs, rhs)
        witness = None if diff is None else {"entry": diff[0], "lhs": repr(diff[1]), "rhs": repr(diff[2])}
    # With R = f * rbar the same product picks up prod_{i<j} f((i-j)h), a
    # constant only defined as a formal series; it is reported, not asserted.
    f_args = [f"f({i - j}h)" for i in range(1, k + 1) for j in range(i + 1, k + 1)]
    return CheckResult(
        "rmatrix", f"jucys-k{k}-n{n}", "fusion of rbar into the antisymmetrizer", witness is None, witness, tm["t"],
        {"normalized_scalar_factor": " * ".join(f_args) or "1"},
    )


def crossing_residuals(n: int, M: int, N: int, normalized: bool = True) -> list:
    """Residuals of the two crossing relations
    ``(R(u)^-1)^{t2} R(u-hn)^{t2} = I`` and ``R(u-hn)^{t1} (R(u)^-1)^{t1} = I``."""
    f = solve_f(n, max(M, N) + 1)
    # over-allocate the u-order: shifting by -n h and inverting stay exact in
    # NEG direction, so N suffices
    kind = "r_norm" if normalized else "rbar_series"
    R = build_operator(kind, n, 2, 1, 2, f=f, N=N, M=M)
    Rs = build_operator(kind, n, 2, 1, 2, f=f, N=N, M=M, shift=-n)
    Rinv = operator_inverse(R)
    ident = identity(n, 2, SERIES, R.field)
    one = partial_transpose(Rinv, [2]) @ partial_transpose(Rs, [2]) - ident
    two = partial_transpose(Rs, [1]) @ partial_transpose(Rinv, [1]) - ident
    return [one, two]


def _series_witness(op: TensorOperator):
    for key in sorted(op.entries):
        x = op.entries[key]
        for e in sorted(x.coeffs, reverse=True):
            a = x.coeffs[e]
            d = a.valuation()
            return {"entry": key, "u_exponent": e, "h_degree": d, "value": str(a.coeff(d))}
    return None


def check_crossing(n: int, M: int, N: int, normalized: bool = True) -> CheckResult:
    with timed() as tm:
        res = crossing_residuals(n, M, N, normalized)
        witness = None
        for which, op in enumerate(res, 1):
            w = _series_witness(op)
            if w is not None:
                witness = dict(w, relation=which)
                break
    label = "r" if normalized else "rbar"
    return CheckResult(
        "rmatrix", f"crossing-{label}-n{n}-M{M}-N{N}", "crossing symmetry of the normalized R-matrix",
        witness is None, witness, tm["t"],
    )
