"""Matrices of algebra-valued series: the generator matrices, inversion,
quasideterminants and the Gauss decomposition ``L = F H E``."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .algebra import Algebra
from .scalars import NEG, POS, NotInvertible, TruncatedSeries, shift_substitute
from .tensor import permutation_sign

PLUS_SECTOR, MINUS_SECTOR = "+", "-"


class SeriesMatrix:
    """An ``n x m`` grid of series over a common ring, direction and order.
    Indices in the public methods are 1-based."""

    __slots__ = ("rows", "ring", "direction", "order", "sector")

    def __init__(self, rows, sector: str | None = None):
        self.rows = [list(r) for r in rows]
        first = self.rows[0][0]
        self.ring, self.direction, self.order = first.ring, first.direction, first.order
        self.sector = sector

    @classmethod
    def identity(cls, ring, n: int, direction: str, order: int, sector=None) -> "SeriesMatrix":
        return cls(
            [[TruncatedSeries(ring, direction, {0: ring.one()} if i == j else {}, order) for j in range(n)]
             for i in range(n)],
            sector,
        )

    @property
    def shape(self) -> tuple:
        return len(self.rows), len(self.rows[0])

    def __getitem__(self, ij) -> TruncatedSeries:
        i, j = ij
        return self.rows[i - 1][j - 1]

    def zero_entry(self) -> TruncatedSeries:
        return TruncatedSeries(self.ring, self.direction, {}, self.order)

    def submatrix(self, rows, cols) -> "SeriesMatrix":
        return SeriesMatrix([[self[i, j] for j in cols] for i in rows], self.sector)

    def map(self, fn) -> "SeriesMatrix":
        return SeriesMatrix([[fn(x) for x in r] for r in self.rows], self.sector)

    def shift(self, gamma) -> "SeriesMatrix":
        return self.map(lambda x: shift_substitute(x, gamma))

    def truncate(self, order: int) -> "SeriesMatrix":
        return self.map(lambda x: x.truncate(order))

    def __add__(self, other):
        return SeriesMatrix([[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], self.sector)

    def __sub__(self, other):
        return SeriesMatrix([[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)], self.sector)

    def __neg__(self):
        return self.map(lambda x: -x)

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        n, m = self.shape
        m2, k = other.shape
        if m != m2:
            raise ValueError("shape mismatch")
        out = []
        for i in range(n):
            row = []
            for j in range(k):
                acc = None
                for t in range(m):
                    a, b = self.rows[i][t], other.rows[t][j]
                    if a.is_zero() or b.is_zero():
                        continue
                    p = a * b
                    acc = p if acc is None else acc + p
                row.append(acc if acc is not None else self.zero_entry())
            out.append(row)
        return SeriesMatrix(out, self.sector)

    def __eq__(self, other):
        return isinstance(other, SeriesMatrix) and self.rows == other.rows

    def first_difference(self, other: "SeriesMatrix"):
        """``(i, j, exponent)`` of the first differing coefficient, or None."""
        for i, (r1, r2) in enumerate(zip(self.rows, other.rows), 1):
            for j, (a, b) in enumerate(zip(r1, r2), 1):
                if a != b:
                    d = a - b
                    return (i, j, min(d.coeffs, key=abs))
        return None


def build_L(sector: str, alg: Algebra, N: int | None = None) -> SeriesMatrix:
    """``L^+(u) = 1 - h sum_k l^(k) u^(-k-1)`` or ``L^-(u) = 1 + h sum_{s>=1} l^(-s) u^(s-1)``."""
    n = alg.config.n
    N = alg.config.N if N is None else N
    rows = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            coeffs = {}
            if i == j:
                coeffs[0] = alg.one()
            if sector == PLUS_SECTOR:
                for k in range(N):
                    x = alg.gen(i, j, k).shift_h(1)
                    coeffs[-k - 1] = -x
                row.append(TruncatedSeries(alg, NEG, coeffs, N))
            else:
                for e in range(N + 1):
                    x = alg.gen(i, j, -e - 1).shift_h(1)
                    coeffs[e] = coeffs[e] + x if e in coeffs else x
                row.append(TruncatedSeries(alg, POS, coeffs, N))
        rows.append(row)
    return SeriesMatrix(rows, sector)


def invert_matrix_series(Lm: SeriesMatrix) -> SeriesMatrix:
    """Inverse of ``I + X`` with every coefficient of ``X`` divisible by ``h``,
    as the terminating geometric series ``sum_k (-X)^k``."""
    n, m = Lm.shape
    ident = SeriesMatrix.identity(Lm.ring, n, Lm.direction, Lm.order, Lm.sector)
    X = Lm - ident
    for row in X.rows:
        for x in row:
            for a in x.coeffs.values():
                if any(d == 0 for (_, d) in a.t):
                    raise NotInvertible("constant term of the matrix is not the identity")
    result, power = ident, ident
    for _ in range(Lm.ring.M):
        power = -(power @ X)
        if all(x.is_zero() for r in power.rows for x in r):
            break
        result = result + power
    return result


def inverse_by_elimination(A: SeriesMatrix) -> SeriesMatrix:
    """Gauss-Jordan inverse with noncommutative pivots.  Each pivot must have
    an invertible constant term."""
    n, m = A.shape
    if n != m:
        raise ValueError("matrix is not square")
    work = [list(r) for r in A.rows]
    inv = [list(r) for r in SeriesMatrix.identity(A.ring, n, A.direction, A.order).rows]
    for col in range(n):
        piv = work[col][col]
        try:
            pinv = piv.invert()
        except NotInvertible:
            raise NotInvertible(f"pivot {col + 1} is not invertible")
        work[col] = [pinv * x for x in work[col]]
        inv[col] = [pinv * x for x in inv[col]]
        for r in range(n):
            if r == col or work[r][col].is_zero():
                continue
            factor = work[r][col]
            work[r] = [x - factor * y for x, y in zip(work[r], work[col])]
            inv[r] = [x - factor * y for x, y in zip(inv[r], inv[col])]
    return SeriesMatrix(inv, A.sector)


def quasideterminant(A: SeriesMatrix, i: int, j: int) -> TruncatedSeries:
    """``|A|_ij = a_ij - r_i (A^{ij})^-1 c_j`` where ``A^{ij}`` deletes row
    ``i`` and column ``j``, ``r_i`` is row ``i`` without entry ``j`` and
    ``c_j`` column ``j`` without entry ``i``."""
    n, m = A.shape
    if n == 1:
        return A[1, 1]
    rows = [r for r in range(1, n + 1) if r != i]
    cols = [c for c in range(1, m + 1) if c != j]
    sub_inv = inverse_by_elimination(A.submatrix(rows, cols))
    row = A.submatrix([i], cols)
    col = A.submatrix(rows, [j])
    return A[i, j] - (row @ sub_inv @ col)[1, 1]


def boxed_submatrix(L: SeriesMatrix, p: int, q: int) -> SeriesMatrix:
    """Rows ``1..min(p,q)-1, p`` and columns ``1..min(p,q)-1, q``; the entry
    ``(p, q)`` sits in the bottom-right corner."""
    m = min(p, q)
    idx = list(range(1, m))
    return L.submatrix(idx + [p], idx + [q])


@dataclass
class GaussData:
    F: SeriesMatrix
    H: SeriesMatrix
    E: SeriesMatrix

    def k(self, i: int) -> TruncatedSeries:
        return self.H[i, i]

    def e(self, i: int, j: int) -> TruncatedSeries:
        return self.E[i, j]

    def f(self, j: int, i: int) -> TruncatedSeries:
        return self.F[j, i]

    def product(self) -> SeriesMatrix:
        return self.F @ self.H @ self.E


def _assemble(n, ring, direction, order, sector, k, e, f) -> GaussData:
    zero = lambda: TruncatedSeries(ring, direction, {}, order)  # noqa: E731
    one = lambda: TruncatedSeries(ring, direction, {0: ring.one()}, order)  # noqa: E731
    F = [[one() if a == b else (f[(a, b)] if a > b else zero()) for b in range(1, n + 1)] for a in range(1, n + 1)]
    H = [[k[a] if a == b else zero() for b in range(1, n + 1)] for a in range(1, n + 1)]
    E = [[one() if a == b else (e[(a, b)] if a < b else zero()) for b in range(1, n + 1)] for a in range(1, n + 1)]
    return GaussData(SeriesMatrix(F, sector), SeriesMatrix(H, sector), SeriesMatrix(E, sector))


def gauss_components(L: SeriesMatrix) -> GaussData:
    """Gauss factors from the boxed quasideterminant formulas."""
    n = L.shape[0]
    k, e, f = {}, {}, {}
    kinv = {}
    for i in range(1, n + 1):
        k[i] = quasideterminant(boxed_submatrix(L, i, i), i, i)
        kinv[i] = k[i].invert()
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            e[(i, j)] = kinv[i] * quasideterminant(boxed_submatrix(L, i, j), i, i)
            f[(j, i)] = quasideterminant(boxed_submatrix(L, j, i), i, i) * kinv[i]
    return _assemble(n, L.ring, L.direction, L.order, L.sector, k, e, f)


def gauss_by_elimination(L: SeriesMatrix) -> GaussData:
    """Gauss factors by successive Schur complements: ``k_1 = l_11``,
    ``e_1j = k_1^-1 l_1j``, ``f_j1 = l_j1 k_1^-1``, then recurse on
    ``l_ab - f_a1 k_1 e_1b``."""
    n = L.shape[0]
    work = {(a, b): L[a, b] for a in range(1, n + 1) for b in range(1, n + 1)}
    k, e, f = {}, {}, {}
    for i in range(1, n + 1):
        k[i] = work[(i, i)]
        kinv = k[i].invert()
        for j in range(i + 1, n + 1):
            e[(i, j)] = kinv * work[(i, j)]
            f[(j, i)] = work[(j, i)] * kinv
        for a in range(i + 1, n + 1):
            for b in range(i + 1, n + 1):
                work[(a, b)] = work[(a, b)] - f[(a, i)] * k[i] * e[(i, b)]
    return _assemble(n, L.ring, L.direction, L.order, L.sector, k, e, f)


def column_qdet(entry, size: int, x_shift=0) -> TruncatedSeries:
    """``sum_sigma sgn(sigma) m_{sigma(1),1}(u) m_{sigma(2),2}(u+h) ...`` where
    ``entry(a, b, gamma)`` returns ``m_ab(u + gamma h)``; ``x_shift`` offsets
    the base point."""
    total = None
    for perm in itertools.permutations(range(1, size + 1)):
        term = None
        for col in range(1, size + 1):
            x = entry(perm[col - 1], col, x_shift + col - 1)
            term = x if term is None else aligned_mul(term, x)
        if permutation_sign([p - 1 for p in perm]) < 0:
            term = -term
        total = term if total is None else aligned_add(total, term)
    return total


def aligned_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Product after truncating both factors to the smaller exact order."""
    N = min(a.order, b.order)
    return a.truncate(N) * b.truncate(N)


def aligned_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    N = min(a.order, b.order)
    return a.truncate(N) + b.truncate(N)


def qdet_factorization(L: SeriesMatrix, gauss: GaussData | None = None):
    """Both sides of ``qdet L(u) = k_1(u) k_2(u+h) ... k_n(u+(n-1)h)``."""
    n = L.shape[0]
    gauss = gauss or gauss_components(L)
    lhs = column_qdet(shifted_entry_getter(L), n)
    rhs = None
    for i in range(1, n + 1):
        x = shift_substitute(gauss.k(i), i - 1)
        rhs = x if rhs is None else aligned_mul(rhs, x)
    N = min(lhs.order, rhs.order)
    return lhs.truncate(N), rhs.truncate(N)


def shifted_entry_getter(L: SeriesMatrix, rows=None, cols=None):
    """Memoized access to ``L[rows[a], cols[b]](u + gamma h)``."""
    rows = rows or list(range(1, L.shape[0] + 1))
    cols = cols or list(range(1, L.shape[1] + 1))
    cache = {}

    def get(a, b, gamma):
        key = (a, b, gamma)
        if key not in cache:
            cache[key] = shift_substitute(L[rows[a - 1], cols[b - 1]], gamma)
        return cache[key]

    return get
