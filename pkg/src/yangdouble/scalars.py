"""Exact coefficient arithmetic.

Everything here works over the rationals, modulo ``h^(M+1)``.  The types are

* :class:`HPoly` -- a truncated polynomial in ``h``;
* :class:`TruncatedSeries` -- a series in ``u`` expanded either in
  non-positive or in non-negative powers of ``u``.  Coefficients live in a
  *coefficient ring*, which is :class:`HRing` for scalars and the mode
  algebra for operator-valued series;
* :class:`BiRegionSeries` -- a bivariate expansion in ``u, v`` valid in one
  of the regions ``|u| > |v|`` or ``|v| > |u|``;
* :class:`RatFunc` -- a rational function in ``u`` (and ``v``) with
  coefficients in ``Q[h]``.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Any, Callable, Iterable, Mapping

import sympy

NEG = "neg"  # exponents <= 0, i.e. an expansion in u^-1
POS = "pos"  # exponents >= 0, i.e. an expansion in u

U_OVER_V = "u>v"
V_OVER_U = "v>u"
ANY_REGION = "any"  # distributions such as the formal delta that need no expansion region


class DirectionMismatch(ValueError):
    pass


class TruncationMismatch(ValueError):
    pass


class NotInvertible(ArithmeticError):
    pass


def binom(n: int, k: int) -> int:
    """Binomial coefficient valid for negative ``n``."""
    if k < 0:
        return 0
    if n >= 0:
        return comb(n, k) if k <= n else 0
    return (-1) ** k * comb(k - n - 1, k)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, sympy.Rational):
        return Fraction(int(x.p), int(x.q))
    raise TypeError(f"not an exact rational: {x!r}")


# ---------------------------------------------------------------------------
# truncated polynomials in h


class HPoly:
    """A polynomial in ``h`` modulo ``h^(M+1)`` with rational coefficients.

    >>> h = HPoly.monomial(1, 1, M=3)
    >>> (1 + h) * (1 - h)
    HPoly(1 - h^2; M=3)
    >>> ((1 + h) ** -1).c
    (Fraction(1, 1), Fraction(-1, 1), Fraction(1, 1), Fraction(-1, 1))
    """

    __slots__ = ("c", "M")

    def __init__(self, coeffs: Iterable = (), M: int = 0):
        if M < 0:
            raise ValueError("truncation order must be non-negative")
        c = [as_fraction(x) for x in list(coeffs)[: M + 1]]
        while c and not c[-1]:
            c.pop()
        self.c = tuple(c)
        self.M = M

    @classmethod
    def _make(cls, c: list, M: int) -> "HPoly":
        while c and not c[-1]:
            c.pop()
        obj = object.__new__(cls)
        obj.c = tuple(c)
        obj.M = M
        return obj

    @classmethod
    def const(cls, x, M: int) -> "HPoly":
        return cls._make([as_fraction(x)], M)

    @classmethod
    def monomial(cls, x, k: int, M: int) -> "HPoly":
        """``x * h^k`` (zero when ``k > M``)."""
        if k > M:
            return cls._make([], M)
        return cls._make([Fraction(0)] * k + [as_fraction(x)], M)

    def _coerce(self, other) -> "HPoly":
        if isinstance(other, HPoly):
            if other.M != self.M:
                raise TruncationMismatch(f"h-orders {self.M} and {other.M} differ")
            return other
        return HPoly.const(other, self.M)

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self.c, o.c
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, x in enumerate(b):
            c[i] += x
        return HPoly._make(c, self.M)

    __radd__ = __add__

    def __neg__(self):
        return HPoly._make([-x for x in self.c], self.M)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        M = self.M
        if not self.c or not o.c:
            return HPoly._make([], M)
        out = [Fraction(0)] * min(M + 1, len(self.c) + len(o.c) - 1)
        for i, x in enumerate(self.c):
            if not x:
                continue
            for j, y in enumerate(o.c[: M + 1 - i]):
                out[i + j] += x * y
        return HPoly._make(out, M)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = HPoly.const(1, self.M)
        for _ in range(k):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, HPoly):
            return self * other.inverse()
        return self * HPoly.const(Fraction(1) / as_fraction(other), self.M)

    def inverse(self) -> "HPoly":
        if not self.c or not self.c[0]:
            raise NotInvertible("constant term of an h-polynomial is zero")
        a0 = 1 / self.c[0]
        b = [a0]
        for k in range(1, self.M + 1):
            s = sum(
                (self.c[i] * b[k - i] for i in range(1, min(k, len(self.c) - 1) + 1)),
                Fraction(0),
            )
            b.append(-a0 * s)
        return HPoly._make(b, self.M)

    def shift(self, k: int) -> "HPoly":
        """Multiply by ``h^k``; negative ``k`` divides and requires valuation >= -k."""
        if k >= 0:
            return HPoly._make([Fraction(0)] * k + list(self.c), self.M)
        if any(self.c[: -k]):
            raise NotInvertible(f"cannot divide by h^{-k}")
        return HPoly._make(list(self.c[-k:]), self.M)

    def retruncate(self, M: int) -> "HPoly":
        return HPoly._make(list(self.c[: M + 1]), M)

    def valuation(self) -> int | None:
        for i, x in enumerate(self.c):
            if x:
                return i
        return None

    def coeff(self, k: int) -> Fraction:
        return self.c[k] if 0 <= k < len(self.c) else Fraction(0)

    def __call__(self, h) -> Fraction:
        h = as_fraction(h)
        return sum((x * h**i for i, x in enumerate(self.c)), Fraction(0))

    def __bool__(self):
        return bool(self.c)

    def is_zero(self) -> bool:
        return not self.c

    def __eq__(self, other):
        if isinstance(other, HPoly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self.c == HPoly.const(other, self.M).c
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        return f"HPoly({format_hpoly(self)}; M={self.M})"

    def to_sympy(self, h=None):
        h = h if h is not None else sympy.Symbol("h")
        return sum((sympy.Rational(x.numerator, x.denominator) * h**i for i, x in enumerate(self.c)), sympy.Integer(0))


def format_hpoly(p: HPoly) -> str:
    parts = []
    for i, x in enumerate(p.c):
        if not x:
            continue
        mon = "" if i == 0 else ("h" if i == 1 else f"h^{i}")
        if not mon:
            s = str(x)
        elif x == 1:
            s = mon
        elif x == -1:
            s = "-" + mon
        else:
            s = f"{x}*{mon}"
        parts.append(s)
    if not parts:
        return "0"
    out = parts[0]
    for s in parts[1:]:
        out += " - " + s[1:] if s.startswith("-") else " + " + s
    return out


class HRing:
    """Coefficient ring ``Q[h]/h^(M+1)`` in the form series code expects."""

    def __init__(self, M: int):
        self.M = M

    def zero(self) -> HPoly:
        return HPoly._make([], self.M)

    def one(self) -> HPoly:
        return HPoly.const(1, self.M)

    def scale(self, x: HPoly, s: HPoly) -> HPoly:
        return x * s

    def inverse(self, x: HPoly) -> HPoly:
        return x.inverse()

    def __eq__(self, other):
        return isinstance(other, HRing) and other.M == self.M

    def __hash__(self):
        return hash(("HRing", self.M))


# ---------------------------------------------------------------------------
# series in u


class TruncatedSeries:
    """A series ``sum_e a_e u^e`` with ``|e| <= order``.

    ``direction`` is :data:`NEG` (expansion in ``u^-1``) or :data:`POS`
    (expansion in ``u``).  Coefficients are elements of ``ring``; zero
    coefficients are never stored.
    """

    __slots__ = ("ring", "direction", "order", "coeffs")

    def __init__(self, ring, direction: str, coeffs: Mapping[int, Any], order: int):
        if direction not in (NEG, POS):
            raise ValueError(f"unknown direction {direction!r}")
        self.ring = ring
        self.direction = direction
        self.order = order
        sign = -1 if direction == NEG else 1
        out = {}
        for e, a in coeffs.items():
            if e * sign < 0:
                raise DirectionMismatch(f"exponent {e} not allowed in a {direction} series")
            if abs(e) > order or not a:
                continue
            out[e] = a
        self.coeffs = out

    @classmethod
    def constant(cls, ring, a, direction: str, order: int) -> "TruncatedSeries":
        return cls(ring, direction, {0: a}, order)

    @classmethod
    def one(cls, ring, direction: str, order: int) -> "TruncatedSeries":
        return cls(ring, direction, {0: ring.one()}, order)

    @classmethod
    def zero(cls, ring, direction: str, order: int) -> "TruncatedSeries":
        return cls(ring, direction, {}, order)

    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise TypeError("expected a TruncatedSeries")
        if other.direction != self.direction:
            raise DirectionMismatch(f"{self.direction} vs {other.direction}")
        if other.order != self.order or other.ring != self.ring:
            raise TruncationMismatch("series truncations differ")

    def coeff(self, e: int):
        return self.coeffs.get(e, self.ring.zero())

    def __getitem__(self, e: int):
        return self.coeff(e)

    def __add__(self, other):
        self._check(other)
        out = dict(self.coeffs)
        for e, a in other.coeffs.items():
            out[e] = out[e] + a if e in out else a
        return TruncatedSeries(self.ring, self.direction, out, self.order)

    def __neg__(self):
        return TruncatedSeries(self.ring, self.direction, {e: -a for e, a in self.coeffs.items()}, self.order)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._check(other)
        out: dict[int, Any] = {}
        N = self.order
        for e1, a in self.coeffs.items():
            for e2, b in other.coeffs.items():
                e = e1 + e2
                if abs(e) > N:
                    continue
                p = a * b
                out[e] = out[e] + p if e in out else p
        return TruncatedSeries(self.ring, self.direction, out, N)

    def scale(self, s) -> "TruncatedSeries":
        """Multiply every coefficient by the scalar ``s`` (an HPoly or rational)."""
        if not isinstance(s, HPoly):
            s = HPoly.const(s, self.ring.M)
        return self.map(lambda a: self.ring.scale(a, s))

    def map(self, fn: Callable) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.direction, {e: fn(a) for e, a in self.coeffs.items()}, self.order)

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.direction, self.coeffs, min(order, self.order))

    def invert(self) -> "TruncatedSeries":
        return series_invert(self)

    def shift(self, gamma) -> "TruncatedSeries":
        return shift_substitute(self, gamma)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.direction == other.direction
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        terms = ", ".join(f"u^{e}: {a!r}" for e, a in sorted(self.coeffs.items(), reverse=True))
        return f"TruncatedSeries({self.direction}, N={self.order}, {{{terms}}})"


def series_arith(a: TruncatedSeries, b: TruncatedSeries, op: str) -> TruncatedSeries:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def series_invert(a: TruncatedSeries) -> TruncatedSeries:
    """Two-sided inverse.  The constant coefficient must be invertible in
    the coefficient ring (for scalars: nonzero at ``h = 0``)."""
    ring = a.ring
    a0 = a.coeff(0)
    if not a0:
        raise NotInvertible("series has zero constant term")
    inv0 = ring.inverse(a0)
    sign = -1 if a.direction == NEG else 1
    b = {0: inv0}
    others = [(abs(e), x) for e, x in a.coeffs.items() if e != 0]
    for k in range(1, a.order + 1):
        s = None
        for m, x in others:
            if m <= k and (k - m) * sign in b:
                t = x * b[(k - m) * sign]
                s = t if s is None else s + t
        if s is not None and s:
            b[k * sign] = -(inv0 * s)
    return TruncatedSeries(ring, a.direction, b, a.order)


def shift_substitute(a: TruncatedSeries, gamma) -> TruncatedSeries:
    """Substitute ``u -> u + gamma*h`` and re-expand in the same direction.

    For :data:`NEG` series every coefficient of the result within the order
    is exact.  For :data:`POS` series the coefficient of ``u^q`` receives
    contributions from ``u^e`` with ``q <= e <= q + M``, so the result is
    exact only up to ``order - M`` and is returned with that order.
    """
    gamma = as_fraction(gamma)
    ring = a.ring
    M = ring.M
    if gamma == 0:
        return a
    out: dict[int, Any] = {}

    def put(e, x):
        if x:
            out[e] = out[e] + x if e in out else x

    if a.direction == NEG:
        N = a.order
        for e, x in a.coeffs.items():
            m = -e
            if m == 0:
                put(0, x)
                continue
            for q in range(0, min(M, N - m) + 1):
                put(e - q, ring.scale(x, HPoly.monomial(binom(-m, q) * gamma**q, q, M)))
        return TruncatedSeries(ring, NEG, out, N)
    N = max(a.order - M, 0)
    for e, x in a.coeffs.items():
        for q in range(max(0, e - M), min(e, N) + 1):
            put(q, ring.scale(x, HPoly.monomial(binom(e, q) * gamma ** (e - q), e - q, M)))
    return TruncatedSeries(ring, POS, out, N)


def scalar_series(coeffs: Mapping[int, Any], direction: str, N: int, M: int) -> TruncatedSeries:
    """Convenience: a scalar series from ``{exponent: HPoly or iterable of h-coefficients}``."""
    ring = HRing(M)
    out = {}
    for e, x in coeffs.items():
        if isinstance(x, HPoly):
            out[e] = x.retruncate(M) if x.M != M else x
        elif isinstance(x, (int, Fraction)):
            out[e] = HPoly.const(x, M)
        else:
            out[e] = HPoly(x, M)
    return TruncatedSeries(ring, direction, out, N)


def h_series(coeffs: Mapping[int, Any], direction: str, N: int, M: int) -> TruncatedSeries:
    """Series whose coefficient of ``u^e`` is ``x * h^|e|`` -- the shape of a
    scale-invariant series ``1 + sum c_k (h/u)^k`` or ``1 + sum c_k (u/h)^k``."""
    return scalar_series({e: HPoly.monomial(x, abs(e), M) for e, x in coeffs.items()}, direction, N, M)


# ---------------------------------------------------------------------------
# bivariate expansions


class BiRegionSeries:
    """``sum a_{p,q} u^p v^q`` restricted to a box window.

    ``window = (umin, umax, vmin, vmax)``.  The region records which way
    kernels ``(u - v)^-m`` were expanded, so mixing regions is an error.
    """

    __slots__ = ("region", "window", "M", "coeffs")

    def __init__(self, region: str, window: tuple, M: int, coeffs: Mapping[tuple, HPoly] = ()):
        if region not in (U_OVER_V, V_OVER_U, ANY_REGION):
            raise ValueError(f"unknown region {region!r}")
        self.region = region
        self.window = tuple(window)
        self.M = M
        umin, umax, vmin, vmax = self.window
        self.coeffs = {
            (p, q): a
            for (p, q), a in dict(coeffs).items()
            if a and umin <= p <= umax and vmin <= q <= vmax
        }

    def in_window(self, p: int, q: int) -> bool:
        umin, umax, vmin, vmax = self.window
        return umin <= p <= umax and vmin <= q <= vmax

    def coeff(self, p: int, q: int) -> HPoly:
        return self.coeffs.get((p, q), HPoly._make([], self.M))

    def _check(self, other) -> str:
        if other.window != self.window or other.M != self.M:
            raise TruncationMismatch("bivariate windows differ")
        if self.region == ANY_REGION:
            return other.region
        if other.region in (ANY_REGION, self.region):
            return self.region
        raise DirectionMismatch("bivariate series expanded in different regions")

    def __add__(self, other):
        region = self._check(other)
        out = dict(self.coeffs)
        for k, a in other.coeffs.items():
            out[k] = out[k] + a if k in out else a
        return BiRegionSeries(region, self.window, self.M, out)

    def __neg__(self):
        return BiRegionSeries(self.region, self.window, self.M, {k: -a for k, a in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, BiRegionSeries):
            s = other if isinstance(other, HPoly) else HPoly.const(other, self.M)
            return BiRegionSeries(self.region, self.window, self.M, {k: a * s for k, a in self.coeffs.items()})
        region = self._check(other)
        out: dict = {}
        for (p1, q1), a in self.coeffs.items():
            for (p2, q2), b in other.coeffs.items():
                k = (p1 + p2, q1 + q2)
                if not self.in_window(*k):
                    continue
                x = a * b
                out[k] = out[k] + x if k in out else x
        return BiRegionSeries(region, self.window, self.M, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, BiRegionSeries):
            return NotImplemented
        return self.window == other.window and self.coeffs == other.coeffs

    def u_slice(self, q: int) -> dict[int, HPoly]:
        """Coefficients of ``v^q`` as a map from the ``u``-exponent."""
        return {p: a for (p, qq), a in self.coeffs.items() if qq == q}

    def __repr__(self):
        return f"BiRegionSeries({self.region}, window={self.window}, {len(self.coeffs)} terms)"


def region_expand(m: int, gamma, region: str, window: tuple, M: int) -> BiRegionSeries:
    """Expand ``(u - v + gamma*h)^-m`` in the given region, restricted to ``window``.

    In the region ``|u| > |v|`` this is a series in ``v/u``; in ``|v| > |u|``
    a series in ``u/v``.
    """
    if m < 1:
        raise ValueError("kernel exponent must be >= 1")
    gamma = as_fraction(gamma)
    umin, umax, vmin, vmax = window
    out: dict = {}
    for j in range(M + 1):
        cj = binom(-m, j) * gamma**j
        if not cj:
            continue
        pw = m + j
        # (u - v)^-pw
        if region == U_OVER_V:
            # sum_q C(pw+q-1, q) v^q u^(-pw-q)
            q = max(0, vmin)
            while q <= vmax and -pw - q >= umin:
                key = (-pw - q, q)
                if umin <= key[0] <= umax:
                    x = HPoly.monomial(cj * comb(pw + q - 1, q), j, M)
                    out[key] = out[key] + x if key in out else x
                q += 1
        elif region == V_OVER_U:
            sgn = (-1) ** pw
            q = max(0, umin)
            while q <= umax and -pw - q >= vmin:
                key = (q, -pw - q)
                if vmin <= key[1] <= vmax:
                    x = HPoly.monomial(sgn * cj * comb(pw + q - 1, q), j, M)
                    out[key] = out[key] + x if key in out else x
                q += 1
        else:
            raise ValueError(f"unknown region {region!r}")
    return BiRegionSeries(region, window, M, out)


def region_difference(a: BiRegionSeries, b: BiRegionSeries) -> BiRegionSeries:
    """``a - b`` for expansions of the same function in the two regions.

    The result no longer depends on a region; for ``(u - v)^-1`` it is the
    formal delta function.
    """
    if {a.region, b.region} != {U_OVER_V, V_OVER_U}:
        raise DirectionMismatch("expected one expansion per region")
    if a.window != b.window or a.M != b.M:
        raise TruncationMismatch("bivariate windows differ")
    out = dict(a.coeffs)
    for k, x in b.coeffs.items():
        out[k] = out[k] - x if k in out else -x
    return BiRegionSeries(ANY_REGION, a.window, a.M, out)


def delta_series(window: tuple, M: int, region: str = ANY_REGION) -> BiRegionSeries:
    """``sum_k u^(-k-1) v^k`` restricted to ``window``."""
    umin, umax, vmin, vmax = window
    one = HPoly.const(1, M)
    out = {}
    for k in range(vmin, vmax + 1):
        if umin <= -k - 1 <= umax:
            out[(-k - 1, k)] = one
    return BiRegionSeries(region, window, M, out)


# ---------------------------------------------------------------------------
# rational functions

u_sym, v_sym, h_sym = sympy.symbols("u v h")


class RatFunc:
    """A reduced rational function in ``u, v, h`` over ``Q``.

    Backed by sympy polynomials; the denominator is made monic with respect
    to a fixed term order so that equal functions have equal representations.
    """

    __slots__ = ("num", "den")
    gens = (u_sym, v_sym, h_sym)

    def __init__(self, num, den=1):
        if not isinstance(num, sympy.Poly) or not isinstance(den, sympy.Poly):
            n, d = sympy.fraction(sympy.together(sympy.sympify(num) / sympy.sympify(den)))
            num, den = n, d
        num = sympy.Poly(num, *self.gens, domain="QQ")
        den = sympy.Poly(den, *self.gens, domain="QQ")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        g = sympy.gcd(num, den)
        if not g.is_one:
            num = sympy.div(num, g)[0]
            den = sympy.div(den, g)[0]
        lc = den.LC()
        if lc != 1:
            num = num.quo_ground(lc)
            den = den.monic()
        self.num = num
        self.den = den

    @classmethod
    def of(cls, expr) -> "RatFunc":
        if isinstance(expr, RatFunc):
            return expr
        if isinstance(expr, Fraction):
            expr = sympy.Rational(expr.numerator, expr.denominator)
        return cls(expr)

    def __add__(self, other):
        o = RatFunc.of(other)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        return self + (-RatFunc.of(other))

    def __rsub__(self, other):
        return RatFunc.of(other) - self

    def __mul__(self, other):
        o = RatFunc.of(other)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc.of(other)
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.of(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den**-k, self.num**-k)
        return RatFunc(self.num**k, self.den**k)

    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self):
        return not self.num.is_zero

    def __eq__(self, other):
        try:
            o = RatFunc.of(other)
        except (sympy.SympifyError, TypeError):
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num.as_expr(), self.den.as_expr()))

    def subs(self, **vals) -> "RatFunc":
        m = {}
        for k, x in vals.items():
            x = as_fraction(x)
            m[sympy.Symbol(k)] = sympy.Rational(x.numerator, x.denominator)
        return RatFunc.of(self.as_expr().subs(m))

    def evaluate(self, u=None, v=None, h=None) -> Fraction:
        m = {}
        for sym, x in ((u_sym, u), (v_sym, v), (h_sym, h)):
            if x is not None:
                x = as_fraction(x)
                m[sym] = sympy.Rational(x.numerator, x.denominator)
        d = self.den.as_expr().subs(m)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        val = sympy.nsimplify(self.num.as_expr().subs(m) / d)
        if not val.is_Rational:
            raise ValueError("evaluation did not reduce to a rational; supply all variables")
        return Fraction(int(val.p), int(val.q))

    def as_expr(self):
        return self.num.as_expr() / self.den.as_expr()

    def to_series(self, N: int, M: int) -> TruncatedSeries:
        """Expand a function of ``u, h`` in non-positive powers of ``u``."""
        num = sympy.Poly(self.num.as_expr(), u_sym, h_sym, domain="QQ")
        den = sympy.Poly(self.den.as_expr(), u_sym, h_sym, domain="QQ")
        if v_sym in self.as_expr().free_symbols:
            raise ValueError("to_series expects a function of u and h only")
        dn, dd = num.degree(u_sym), den.degree(u_sym)
        if dn > dd and not num.is_zero:
            raise ValueError("function has positive powers of u")

        def coeffs(p: sympy.Poly, top: int):
            out: dict[int, list] = {}
            for (a, b), x in p.terms():
                out.setdefault(a - top, [Fraction(0)] * (M + 1))
                if b <= M:
                    out[a - top][b] += Fraction(int(x.p), int(x.q))
            return {e: HPoly(c, M) for e, c in out.items()}

        ring = HRing(M)
        n_s = TruncatedSeries(ring, NEG, coeffs(num, dd), N + dd)
        d_s = TruncatedSeries(ring, NEG, coeffs(den, dd), N + dd)
        res = n_s * series_invert(d_s)
        return res.truncate(N)

    def __repr__(self):
        return f"RatFunc({self.as_expr()})"
