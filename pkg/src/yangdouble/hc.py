"""The Harish-Chandra map ``chi = eta o theta`` at the critical level, the
image formula for ``l_k(u)`` and the eigenvalues on Wakimoto modules.

``theta`` keeps the normal monomials built from diagonal modes only and
``eta`` renames ``l_ii^(k)`` to the commuting variable ``l_i^k``.  With the
cutoff ``p`` the map is taken modulo ``J_p`` on the algebra side and modulo
the ideal ``I_p`` generated by the ``l_i^k`` with ``k >= p`` on the
polynomial side; ``theta`` sends ``J_p`` into ``I_p``, so both sides are
exact in the truncation box.
"""
from __future__ import annotations

import configparser
import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2

from .algebra import Algebra, AlgebraElement, to_mpq
from .center import CentralSeries, build_ell, laurent_coefficient, qdet
from .gauss import MINUS_SECTOR, PLUS_SECTOR, aligned_mul, build_L
from .reports import CheckResult, timed
from .scalars import NEG, POS, HPoly, HRing, NotInvertible, TruncatedSeries, as_fraction, binom, shift_substitute

ONE = gmpy2.mpq(1)


# ---------------------------------------------------------------------------
# the commutative image


class DiagonalRing:
    """Polynomials in ``l_i^k`` over ``Q[h]/h^(M+1)``, modulo ``I_p``
    (``cutoff=None`` keeps every variable)."""

    def __init__(self, n: int, M: int, cutoff: int | None):
        self.n = n
        self.M = M
        self.cutoff = cutoff

    def element(self, flat: dict) -> "DiagonalPolynomial":
        return DiagonalPolynomial(self, flat)

    def zero(self) -> "DiagonalPolynomial":
        return DiagonalPolynomial(self, {})

    def one(self) -> "DiagonalPolynomial":
        return DiagonalPolynomial(self, {((), 0): ONE})

    def var(self, i: int, k: int) -> "DiagonalPolynomial":
        if not 1 <= i <= self.n:
            raise ValueError(f"variable index {i} out of range for n={self.n}")
        return DiagonalPolynomial(self, {(((i, k),), 0): ONE})

    def scale(self, x: "DiagonalPolynomial", s: HPoly) -> "DiagonalPolynomial":
        return x.hscale(s)

    def inverse(self, x: "DiagonalPolynomial") -> "DiagonalPolynomial":
        lam = x.t.get(((), 0))
        if not lam or any(d == 0 and mono for (mono, d) in x.t):
            raise NotInvertible("polynomial is not a scalar unit modulo h")
        y = DiagonalPolynomial(self, {k: q / lam for k, q in x.t.items() if k != ((), 0)})
        result = self.one()
        power = self.one()
        for _ in range(self.M):
            power = -(power * y)
            if not power:
                break
            result = result + power
        return result.hscale(HPoly.const(1 / _fraction(lam), self.M))

    def __eq__(self, other):
        return isinstance(other, DiagonalRing) and (other.n, other.M, other.cutoff) == (self.n, self.M, self.cutoff)

    def __hash__(self):
        return hash(("DiagonalRing", self.n, self.M, self.cutoff))


def _fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _in_ideal(mono: tuple, cutoff: int | None) -> bool:
    return cutoff is not None and any(k >= cutoff for _, k in mono)


class DiagonalPolynomial:
    """``{(monomial, h_degree): rational}``; a monomial is a sorted tuple of
    variables ``(i, k)`` with repetition."""

    __slots__ = ("ring", "t")

    def __init__(self, ring: DiagonalRing, flat: dict):
        self.ring = ring
        self.t = {
            (mono, d): q for (mono, d), q in flat.items()
            if q and d <= ring.M and not _in_ideal(mono, ring.cutoff)
        }

    def _check(self, other):
        if not isinstance(other, DiagonalPolynomial) or other.ring != self.ring:
            raise TypeError("polynomials over different rings")

    def __add__(self, other):
        self._check(other)
        out = dict(self.t)
        for k, q in other.t.items():
            out[k] = out[k] + q if k in out else q
        return DiagonalPolynomial(self.ring, out)

    def __neg__(self):
        return DiagonalPolynomial(self.ring, {k: -q for k, q in self.t.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check(other)
        M = self.ring.M
        out: dict = {}
        for (ma, da), qa in self.t.items():
            for (mb, db), qb in other.t.items():
                d = da + db
                if d > M:
                    continue
                key = (tuple(sorted(ma + mb)), d)
                out[key] = out[key] + qa * qb if key in out else qa * qb
        return DiagonalPolynomial(self.ring, out)

    def hscale(self, s: HPoly) -> "DiagonalPolynomial":
        out: dict = {}
        for (mono, d), q in self.t.items():
            for e, c in enumerate(s.c):
                if c and d + e <= self.ring.M:
                    key = (mono, d + e)
                    v = q * to_mpq(c)
                    out[key] = out[key] + v if key in out else v
        return DiagonalPolynomial(self.ring, out)

    def evaluate(self, values) -> HPoly:
        """Substitute ``l_i^k -> values(i, k)`` (rationals)."""
        M = self.ring.M
        c = [Fraction(0)] * (M + 1)
        cache: dict = {}
        for (mono, d), q in self.t.items():
            x = _fraction(q)
            for var in mono:
                if var not in cache:
                    cache[var] = as_fraction(values(*var))
                x *= cache[var]
            c[d] += x
        return HPoly(c, M)

    def __bool__(self):
        return bool(self.t)

    def __eq__(self, other):
        if not isinstance(other, DiagonalPolynomial):
            return NotImplemented
        return self.ring == other.ring and self.t == other.t

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def __repr__(self):
        if not self.t:
            return "0"
        parts = []
        for (mono, d), q in sorted(self.t.items(), key=lambda kv: (kv[0][1], kv[0][0])):
            name = "*".join(f"l{i}^{k}" for i, k in mono) or "1"
            hpart = "" if d == 0 else ("h*" if d == 1 else f"h^{d}*")
            parts.append(f"{q}*{hpart}{name}")
        return " + ".join(parts)


def theta_project(x: AlgebraElement) -> AlgebraElement:
    """Keep the normal monomials all of whose factors are diagonal."""
    return x.filter(lambda w: all(g.i == g.j for g in w))


def chi(x: AlgebraElement, ring: DiagonalRing | None = None) -> DiagonalPolynomial:
    alg = x.alg
    ring = ring or DiagonalRing(alg.config.n, alg.M, alg.cutoff)
    out: dict = {}
    for (w, d), q in theta_project(x).t.items():
        key = (tuple(sorted((g.i, g.r) for g in w)), d)
        out[key] = out[key] + q if key in out else q
    return DiagonalPolynomial(ring, out)


def chi_series(s: TruncatedSeries, ring: DiagonalRing) -> TruncatedSeries:
    return TruncatedSeries(ring, s.direction, {e: chi(x, ring) for e, x in s.coeffs.items()}, s.order)


# ---------------------------------------------------------------------------
# the image formula


def l_plus(ring: DiagonalRing, i: int, order: int) -> TruncatedSeries:
    """``l_i^+(u) = 1 - h sum_{k>=0} l_i^k u^(-k-1)``."""
    h = HPoly.monomial(-1, 1, ring.M)
    coeffs = {0: ring.one()}
    for k in range(order):
        coeffs[-k - 1] = ring.var(i, k).hscale(h)
    return TruncatedSeries(ring, NEG, coeffs, order)


def l_minus(ring: DiagonalRing, i: int, order: int) -> TruncatedSeries:
    """``l_i^-(u) = 1 + h sum_{k<0} l_i^k u^(-k-1)``."""
    h = HPoly.monomial(1, 1, ring.M)
    coeffs = {0: ring.one()}
    for e in range(order + 1):
        x = ring.var(i, -e - 1).hscale(h)
        coeffs[e] = coeffs[e] + x if e in coeffs else x
    return TruncatedSeries(ring, POS, coeffs, order)


@dataclass
class LambdaFamily:
    """``lambda_i(u) = l_i^-(u) P_i(u)`` with the plus-sector factor
    ``P_i(u) = prod_{a<i} l_a^+(u - a h + hn/2) / prod_{a<=i} l_a^+(u - (a-1)h + hn/2)``
    kept apart, so that products of shifted ``lambda``'s split into one
    ``u``-series and one ``u^-1``-series.  ``shift`` replaces ``n/2`` (used
    only by the negative control)."""

    ring: DiagonalRing
    minus_order: int
    plus_order: int
    shift: Fraction | None = None
    minus: dict = field(default_factory=dict)
    plus: dict = field(default_factory=dict)

    def minus_part(self, i: int, gamma) -> TruncatedSeries:
        key = (i, Fraction(gamma))
        if key not in self.minus:
            self.minus[key] = shift_substitute(l_minus(self.ring, i, self.minus_order), gamma)
        return self.minus[key]

    def plus_part(self, i: int, gamma) -> TruncatedSeries:
        key = (i, Fraction(gamma))
        if key not in self.plus:
            n = self.ring.n
            half = Fraction(n, 2) if self.shift is None else Fraction(self.shift)
            num = TruncatedSeries.one(self.ring, NEG, self.plus_order)
            den = TruncatedSeries.one(self.ring, NEG, self.plus_order)
            for a in range(1, i):
                num = num * shift_substitute(l_plus(self.ring, a, self.plus_order), gamma - a + half)
            for a in range(1, i + 1):
                den = den * shift_substitute(l_plus(self.ring, a, self.plus_order), gamma - (a - 1) + half)
            self.plus[key] = num * den.invert()
        return self.plus[key]


def _subset_pairs(fam: LambdaFamily, n: int, k: int) -> list:
    pairs = []
    for subset in itertools.combinations(range(1, n + 1), k):
        a = None
        b = None
        for t, i in enumerate(subset):
            x, y = fam.minus_part(i, t), fam.plus_part(i, t)
            a = x if a is None else aligned_mul(a, x)
            b = y if b is None else b * y
        pairs.append((a, b))
    return pairs


def hc_image_formula(ring: DiagonalRing, k: int, exponents: range, m_bound: int, shift=None) -> dict:
    """``sum_{i_1<...<i_k} lambda_{i_1}(u) lambda_{i_2}(u+h) ... lambda_{i_k}(u+(k-1)h)``
    as ``{exponent: DiagonalPolynomial}``."""
    shift_loss = ring.M if k > 1 else 0
    fam = LambdaFamily(ring, max(exponents) + m_bound + shift_loss, m_bound, shift)
    return _assemble(_subset_pairs(fam, ring.n, k), exponents, m_bound, ring.zero())


def _assemble(pairs: list, exponents: range, m_bound: int, zero) -> dict:
    out = {}
    for e in exponents:
        total = zero
        for a, b in pairs:
            total = total + laurent_coefficient(a, b, e, m_bound)
        if total:
            out[e] = total
    return out


def chi_of_ell(ell: CentralSeries, ring: DiagonalRing) -> dict:
    return {e: chi(x, ring) for e, x in ell.coefficients.items() if chi(x, ring)}


def first_mismatch(a: dict, b: dict):
    for e in sorted(set(a) | set(b)):
        if (a.get(e) or None) != (b.get(e) or None):
            return e
    return None


def image_ring(alg: Algebra) -> DiagonalRing:
    return DiagonalRing(alg.config.n, alg.M, alg.cutoff)


def check_hc_image(alg: Algebra, k: int, exponents: range = range(-2, 3), ell: CentralSeries | None = None) -> list:
    """``chi(l_k(u)) = sum lambda_{i_1}(u) ... lambda_{i_k}(u+(k-1)h)`` coefficientwise."""
    cfg = alg.config
    ring = image_ring(alg)
    results = []
    with timed() as box:
        ell = ell or build_ell(alg, k, exponents)
        lhs = chi_of_ell(ell, ring)
        rhs = hc_image_formula(ring, k, exponents, ell.m_bound)
        e = first_mismatch(lhs, rhs)
    witness = None
    if e is not None:
        witness = {"exponent": e, "chi": repr(lhs.get(e, 0))[:300], "formula": repr(rhs.get(e, 0))[:300]}
    results.append(CheckResult(
        "hc", f"hc-image-k{k}-n{cfg.n}-M{cfg.M}-p{alg.cutoff}", "image of l_k under chi", e is None, witness,
        box["t"], {"exponents": sorted(lhs), "m_bound": ell.m_bound, "monomials": sum(len(x.t) for x in lhs.values())},
    ))
    if k == cfg.n:
        results.append(check_ell_n_image(alg, lhs, exponents, ell.m_bound))
    return results


def check_hc_image_unshifted(alg: Algebra, k: int, ell: CentralSeries, exponents: range = range(-2, 3)) -> CheckResult:
    """The image formula with the ``hn/2`` shift removed; expected to fail."""
    ring = image_ring(alg)
    with timed() as box:
        lhs = chi_of_ell(ell, ring)
        rhs = hc_image_formula(ring, k, exponents, ell.m_bound, shift=0)
        e = first_mismatch(lhs, rhs)
    witness = None if e is None else {"exponent": e}
    return CheckResult("hc", f"hc-image-unshifted-k{k}-n{alg.config.n}", "image formula without the hn/2 shift",
                       e is None, witness, box["t"])


def check_ell_n_image(alg: Algebra, image: dict, exponents: range, m_bound: int) -> CheckResult:
    """The image of ``l_n`` against ``chi(qdet L^-(u)) chi(qdet L^+(u + hn/2))^-1``
    (both factors central, so ``chi`` is multiplicative on them)."""
    cfg = alg.config
    ring = image_ring(alg)
    with timed() as box:
        shift_loss = cfg.M if cfg.n > 1 else 0
        dm = qdet(build_L(MINUS_SECTOR, alg, max(exponents) + m_bound + shift_loss))
        dp = shift_substitute(qdet(build_L(PLUS_SECTOR, alg, m_bound)), Fraction(cfg.n, 2))
        a = chi_series(dm, ring)
        b = chi_series(dp, ring).invert()
        route = _assemble([(a, b)], exponents, m_bound, ring.zero())
        e = first_mismatch(image, route)
    witness = None if e is None else {"exponent": e, "chi": repr(image.get(e, 0))[:300], "qdet": repr(route.get(e, 0))[:300]}
    return CheckResult("hc", f"hc-ell-n-qdet-route-n{cfg.n}", "image of l_n through the quantum determinants",
                       e is None, witness, box["t"])


def qdet_plus_image(ring: DiagonalRing, order: int) -> TruncatedSeries:
    """``l_1^+(u+(n-1)h) l_2^+(u+(n-2)h) ... l_n^+(u)``."""
    n = ring.n
    out = TruncatedSeries.one(ring, NEG, order)
    for i in range(1, n + 1):
        out = out * shift_substitute(l_plus(ring, i, order), n - i)
    return out


def check_qdet_plus_image(alg: Algebra, order: int = 4) -> CheckResult:
    cfg = alg.config
    ring = DiagonalRing(cfg.n, alg.M, None)
    exact = alg.with_cutoff(None)
    with timed() as box:
        lhs = chi_series(qdet(build_L(PLUS_SECTOR, exact, order)), ring)
        rhs = qdet_plus_image(ring, order)
        ok = lhs == rhs
    witness = None
    if not ok:
        e = first_mismatch(lhs.coeffs, rhs.coeffs)
        witness = {"exponent": e, "chi": repr(lhs.coeffs.get(e, 0))[:300], "expected": repr(rhs.coeffs.get(e, 0))[:300]}
    return CheckResult("hc", f"hc-qdet-plus-image-n{cfg.n}", "image of qdet L^+", ok, witness, box["t"])


def check_multiplicativity(alg: Algebra, j: int, k: int, exponents: range = range(-1, 2),
                           ells: dict | None = None) -> CheckResult:
    """``chi(x y) = chi(x) chi(y)`` for coefficients ``x`` of ``l_j`` and ``y``
    of ``l_k``.  Exact modulo ``J_p``: ``J_p`` is a left ideal and ``y`` is
    central in the completion, so ``x_p y_p = x y`` modulo ``J_p``."""
    cfg = alg.config
    ring = image_ring(alg)
    ells = ells or {}
    witness = None
    pairs = 0
    with timed() as box:
        x_ser = ells.get(j) or build_ell(alg, j, exponents)
        y_ser = ells.get(k) or build_ell(alg, k, exponents)
        for e1 in exponents:
            for e2 in exponents:
                x = x_ser.coefficients.get(e1)
                y = y_ser.coefficients.get(e2)
                if x is None or y is None:
                    continue
                pairs += 1
                lhs = chi(x * y, ring)
                rhs = chi(x, ring) * chi(y, ring)
                if lhs != rhs:
                    witness = {"exponents": [e1, e2], "difference": repr(lhs - rhs)[:300]}
                    break
            if witness:
                break
    return CheckResult("hc", f"hc-multiplicative-l{j}-l{k}-n{cfg.n}", "chi is multiplicative on the centre",
                       witness is None, witness, box["t"], {"pairs": pairs})


# ---------------------------------------------------------------------------
# Wakimoto eigenvalues


@dataclass(frozen=True)
class WakimotoParams:
    """``kappa^+(u) = 1 - h sum_{k>=0} a_k u^(-k-1)`` (shared by all ``i``) and
    ``kappa_i^-(u) = 1 + h sum_{s>=1} b_{i,s} u^(s-1)``."""

    n: int
    plus: tuple
    minus: tuple  # one tuple per i

    def __post_init__(self):
        if len(self.minus) != self.n:
            raise ValueError(f"expected {self.n} minus-sector series, got {len(self.minus)}")
        object.__setattr__(self, "plus", tuple(Fraction(x) for x in self.plus))
        object.__setattr__(self, "minus", tuple(tuple(Fraction(x) for x in b) for b in self.minus))

    @classmethod
    def trivial(cls, n: int) -> "WakimotoParams":
        return cls(n, (), tuple(() for _ in range(n)))

    @classmethod
    def random(cls, n: int, length: int, seed: int) -> "WakimotoParams":
        rng = random.Random(seed)

        def draw():
            return Fraction(rng.randint(-5, 5), rng.randint(1, 4))

        return cls(n, tuple(draw() for _ in range(length)), tuple(tuple(draw() for _ in range(length)) for _ in range(n)))

    @property
    def length(self) -> int:
        return max([len(self.plus)] + [len(b) for b in self.minus])

    def value(self, i: int, k: int) -> Fraction:
        """The specialization ``l_i^+(u) = kappa^+(u)``, ``l_i^-(u) = kappa_i^-(u)``
        on variables."""
        if k >= 0:
            return self.plus[k] if k < len(self.plus) else Fraction(0)
        b = self.minus[i - 1]
        return b[-k - 1] if -k - 1 < len(b) else Fraction(0)

    def kappa_plus(self, M: int, order: int) -> TruncatedSeries:
        coeffs = {0: HPoly.const(1, M)}
        for k, a in enumerate(self.plus[:order]):
            coeffs[-k - 1] = HPoly.monomial(-a, 1, M)
        return TruncatedSeries(HRing(M), NEG, coeffs, order)

    def kappa_minus(self, i: int, M: int, order: int) -> TruncatedSeries:
        coeffs = {0: HPoly.const(1, M)}
        for s, b in enumerate(self.minus[i - 1][: order + 1]):
            coeffs[s] = coeffs.get(s, HPoly.const(0, M)) + HPoly.monomial(b, 1, M)
        return TruncatedSeries(HRing(M), POS, coeffs, order)

    def to_text(self) -> str:
        lines = ["[wakimoto]", f"n = {self.n}", "kappa_plus = " + ", ".join(map(str, self.plus))]
        for i, b in enumerate(self.minus, start=1):
            lines.append(f"kappa_minus_{i} = " + ", ".join(map(str, b)))
        return "\n".join(lines) + "\n"


def _fractions(text: str) -> tuple:
    return tuple(Fraction(x.strip()) for x in text.split(",") if x.strip())


def parse_wakimoto_params(text: str) -> WakimotoParams:
    """Read the ``[wakimoto]`` section of a plain-text parameter file."""
    cp = configparser.ConfigParser()
    cp.read_string(text)
    if "wakimoto" not in cp:
        raise ValueError("missing [wakimoto] section")
    sec = cp["wakimoto"]
    n = sec.getint("n")
    if n is None:
        raise ValueError("missing n")
    known = {"n", "kappa_plus"} | {f"kappa_minus_{i}" for i in range(1, n + 1)}
    extra = set(sec) - known
    if extra:
        raise ValueError(f"unknown keys {sorted(extra)}")
    minus = tuple(_fractions(sec.get(f"kappa_minus_{i}", "")) for i in range(1, n + 1))
    return WakimotoParams(n, _fractions(sec.get("kappa_plus", "")), minus)


def load_wakimoto_params(path) -> WakimotoParams:
    with open(path, encoding="utf-8") as fh:
        return parse_wakimoto_params(fh.read())


def wakimoto_eigenvalues(params: WakimotoParams, k: int, M: int, exponents: range) -> dict:
    """``sum_{i_1<...<i_k} Lambda_{i_1}(u) ... Lambda_{i_k}(u+(k-1)h)`` with
    ``Lambda_i(u) = kappa_i^-(u) kappa^+(u + hn/2)^-1``, as ``{exponent: HPoly}``."""
    n = params.n
    m_bound = M * max(params.length, 1)
    shift_loss = M if k > 1 else 0
    minus_order = max(exponents) + m_bound + shift_loss
    half = Fraction(n, 2)
    kp = params.kappa_plus(M, m_bound)
    pairs = []
    for subset in itertools.combinations(range(1, n + 1), k):
        a = None
        b = None
        for t, i in enumerate(subset):
            x = shift_substitute(params.kappa_minus(i, M, minus_order), t)
            y = shift_substitute(kp, t + half).invert()
            a = x if a is None else aligned_mul(a, x)
            b = y if b is None else b * y
        pairs.append((a, b))
    return _assemble(pairs, exponents, m_bound, HPoly.const(0, M))


def specialize(image: dict, params: WakimotoParams) -> dict:
    out = {}
    for e, x in image.items():
        v = x.evaluate(params.value)
        if v:
            out[e] = v
    return out


def check_wakimoto_consistency(params: WakimotoParams, k: int, M: int, exponents: range = range(-2, 3),
                               chi_image: dict | None = None, label: str = "") -> list:
    """The eigenvalue formula against the image formula under the
    specialization (and against a computed ``chi(l_k)`` when given).  The
    image is computed with cutoff equal to the parameter length, where the
    specialization kills no surviving variable."""
    results = []
    p = max(params.length, 1)
    ring = DiagonalRing(params.n, M, p)
    with timed() as box:
        eig = wakimoto_eigenvalues(params, k, M, exponents)
        image = specialize(hc_image_formula(ring, k, exponents, M * p), params)
        e = first_mismatch(eig, image)
    witness = None if e is None else {"exponent": e, "eigenvalue": repr(eig.get(e)), "image": repr(image.get(e))}
    results.append(CheckResult("wakimoto", f"wakimoto-k{k}-n{params.n}{label}", "eigenvalues match the image formula",
                               e is None, witness, box["t"], {"exponents": sorted(eig)}))
    if chi_image is not None:
        img_ring = next(iter(chi_image.values())).ring if chi_image else ring
        if img_ring.cutoff is not None and img_ring.cutoff < p or img_ring.M != M:
            raise ValueError("the chi image must be computed with cutoff >= parameter length and the same M")
        with timed() as box:
            image2 = specialize(chi_image, params)
            e = first_mismatch(eig, image2)
        witness = None if e is None else {"exponent": e, "eigenvalue": repr(eig.get(e)), "chi": repr(image2.get(e))}
        results.append(CheckResult("wakimoto", f"wakimoto-chi-k{k}-n{params.n}{label}",
                                   "eigenvalues match the specialized chi(l_k)", e is None, witness, box["t"]))
    return results


def check_trivial_wakimoto(n: int, k: int, M: int, exponents: range = range(-2, 3)) -> CheckResult:
    """``kappa^+ = kappa_i^- = 1`` gives the constant ``binomial(n, k)``."""
    with timed() as box:
        eig = wakimoto_eigenvalues(WakimotoParams.trivial(n), k, M, exponents)
        expected = {0: HPoly.const(binom(n, k), M)}
        ok = eig == expected
    return CheckResult("wakimoto", f"wakimoto-trivial-k{k}-n{n}", "trivial parameters give binomial(n, k)", ok,
                       None if ok else {"eigenvalue": repr(eig)}, box["t"])
