"""Elements of the truncated mode algebra and the normal-form engine."""
from __future__ import annotations

import random
from fractions import Fraction

from gmpy2 import mpq

from . import _kernel
from .config import NORMALIZED, AlgebraConfig
from .modes import Gen, format_word, gen, is_normal
from .relations import ONE, RelationTable, _acc
from .reports import CheckResult, timed
from .scalars import HPoly, NotInvertible


class ConfigMismatch(ValueError):
    pass


def to_mpq(x) -> mpq:
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    return mpq(x)


def to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


class Algebra:
    """The algebra for one configuration: relation table, rewriter and
    element constructors.  It also serves as the coefficient ring of
    operator-valued series."""

    def __init__(self, config: AlgebraConfig, table: RelationTable | None = None, cutoff: bool = True,
                 strict: bool = False):
        self.config = config
        self.M = config.M
        if table is not None and table.config != config:
            # tables do not depend on N or p
            same = table.config.replace(N=config.N, p=config.p) == config
            if not same:
                raise ConfigMismatch("relation table was derived for another configuration")
        self.table = table if table is not None else RelationTable(config, strict)
        self.cutoff = config.p if cutoff else None
        self.rewriter = _kernel.Rewriter(config.M, self.cutoff, self.table.rule, ONE)

    def with_cutoff(self, p: int | None) -> "Algebra":
        """Same relation table, different cutoff (``None`` disables it)."""
        cfg = self.config.replace(p=p if p is not None else self.config.p)
        return Algebra(cfg, self.table, cutoff=p is not None)

    # constructors

    def element(self, flat: dict) -> "AlgebraElement":
        return AlgebraElement(self, flat)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {((), 0): ONE})

    def scalar(self, x) -> "AlgebraElement":
        if isinstance(x, HPoly):
            return AlgebraElement(self, {((), d): to_mpq(q) for d, q in enumerate(x.c) if q and d <= self.M})
        q = to_mpq(x)
        return AlgebraElement(self, {((), 0): q} if q else {})

    def gen(self, i: int, j: int, r: int) -> "AlgebraElement":
        n = self.config.n
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"generator indices ({i}, {j}) out of range for n={n}")
        return self.normal_form({((gen(i, j, r),), 0): ONE})

    def word(self, *gens: Gen, coeff=1, hdeg: int = 0) -> "AlgebraElement":
        """Normal form of the product of the given generators."""
        return self.normal_form({(tuple(gens), hdeg): to_mpq(coeff)})

    def normal_form(self, raw) -> "AlgebraElement":
        """Normal form of a raw combination ``{(word, h_degree): q}`` or
        ``{word: HPoly}``."""
        if isinstance(raw, AlgebraElement):
            return raw
        flat: dict = {}
        for key, val in raw.items():
            if isinstance(val, HPoly):
                for d, q in enumerate(val.c):
                    if q:
                        _acc(flat, (key, d), to_mpq(q))
            else:
                _acc(flat, key, to_mpq(val))
        return AlgebraElement(self, self.rewriter.normal_form(flat))

    # ring interface for TruncatedSeries

    def scale(self, x: "AlgebraElement", s: HPoly) -> "AlgebraElement":
        return x.hscale(s)

    def inverse(self, x: "AlgebraElement") -> "AlgebraElement":
        lam = x.t.get(((), 0))
        if not lam:
            raise NotInvertible("element has no invertible scalar part")
        for (w, d) in x.t:
            if d == 0 and w:
                raise NotInvertible("element is not a scalar unit modulo h")
        inv = 1 / lam
        y = AlgebraElement(self, {k: q * inv for k, q in x.t.items() if k != ((), 0)})
        result = self.one()
        power = self.one()
        for _ in range(self.M):
            power = -(power * y)
            if not power:
                break
            result = result + power
        return result.hscale_q(inv)

    # operations

    def mul(self, x, y):
        return x * y

    def add(self, x, y):
        return x + y

    def commutator(self, x, y):
        return x * y - y * x


class AlgebraElement:
    """A normal-ordered element; ``t`` maps ``(word, h_degree)`` to a
    nonzero rational."""

    __slots__ = ("alg", "t")

    def __init__(self, alg: Algebra, flat: dict):
        self.alg = alg
        self.t = flat

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            raise TypeError("expected an AlgebraElement")
        if other.alg is not self.alg:
            if other.alg.config != self.alg.config:
                raise ConfigMismatch("elements of different algebras")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.alg.scalar(other)
        self._check(other)
        out = dict(self.t)
        for k, q in other.t.items():
            _acc(out, k, q)
        return AlgebraElement(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.alg, {k: -q for k, q in self.t.items()})

    def __sub__(self, other):
        if not isinstance(other, AlgebraElement):
            other = self.alg.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            self._check(other)
            return AlgebraElement(self.alg, self.alg.rewriter.product(self.t, other.t))
        if isinstance(other, HPoly):
            return self.hscale(other)
        return self.hscale_q(to_mpq(other))

    def __rmul__(self, other):
        if isinstance(other, HPoly):
            return self.hscale(other)
        return self.hscale_q(to_mpq(other))

    def hscale_q(self, q) -> "AlgebraElement":
        if not q:
            return AlgebraElement(self.alg, {})
        return AlgebraElement(self.alg, {k: v * q for k, v in self.t.items()})

    def hscale(self, s: HPoly) -> "AlgebraElement":
        M = self.alg.M
        out: dict = {}
        sc = [(d, to_mpq(q)) for d, q in enumerate(s.c) if q]
        for (w, d), v in self.t.items():
            for e, q in sc:
                if d + e <= M:
                    _acc(out, (w, d + e), v * q)
        return AlgebraElement(self.alg, out)

    def shift_h(self, k: int) -> "AlgebraElement":
        """Multiply by ``h^k``; a negative ``k`` requires divisibility."""
        M = self.alg.M
        out = {}
        for (w, d), v in self.t.items():
            if d + k < 0:
                raise NotInvertible(f"element is not divisible by h^{-k}")
            if d + k <= M:
                out[(w, d + k)] = v
        return AlgebraElement(self.alg, out)

    def __eq__(self, other):
        if isinstance(other, AlgebraElement):
            return self.t == other.t
        if isinstance(other, (int, Fraction)):
            return self.t == self.alg.scalar(other).t
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.t.items()))

    def __bool__(self):
        return bool(self.t)

    def is_zero(self) -> bool:
        return not self.t

    @property
    def terms(self) -> dict:
        """``{word: HPoly}``."""
        M = self.alg.M
        acc: dict = {}
        for (w, d), q in self.t.items():
            acc.setdefault(w, [Fraction(0)] * (M + 1))[d] = to_fraction(q)
        return {w: HPoly(c, M) for w, c in acc.items()}

    def coefficient(self, word: tuple) -> HPoly:
        M = self.alg.M
        c = [Fraction(0)] * (M + 1)
        for (w, d), q in self.t.items():
            if w == word:
                c[d] = to_fraction(q)
        return HPoly(c, M)

    def scalar_part(self) -> HPoly:
        return self.coefficient(())

    def h_truncate(self, M: int) -> "AlgebraElement":
        return AlgebraElement(self.alg, {k: q for k, q in self.t.items() if k[1] <= M})

    def filter(self, pred) -> "AlgebraElement":
        """Keep the terms whose word satisfies ``pred``."""
        return AlgebraElement(self.alg, {k: q for k, q in self.t.items() if pred(k[0])})

    def max_hdeg(self) -> int:
        return max((d for _, d in self.t), default=-1)

    def __repr__(self):
        if not self.t:
            return "0"
        parts = []
        for (w, d), q in sorted(self.t.items(), key=lambda kv: (kv[0][1], len(kv[0][0]), kv[0][0])):
            hpart = "" if d == 0 else ("h" if d == 1 else f"h^{d}")
            mon = "*".join(x for x in (hpart, format_word(w) if w else "") if x) or "1"
            parts.append(f"{q}*{mon}" if q != 1 else mon)
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# alternative rewriting strategies (for confluence checks)


def normal_form_strategy(alg: Algebra, raw: dict, strategy: str = "rightmost", seed: int = 0) -> dict:
    """Rewrite without memoization, choosing the descent to resolve by
    ``strategy`` (``leftmost``, ``rightmost`` or ``random``).  Uses the same
    pair rules and cutoff as ``alg``; returns a flat term map."""
    rng = random.Random(seed)
    M = alg.M
    rewriter = alg.rewriter
    work = {k: to_mpq(v) for k, v in raw.items() if k[1] <= M}
    done: dict = {}
    while work:
        (w, d), q = work.popitem()
        if rewriter.dropped(w):
            continue
        descents = [k for k in range(len(w) - 1) if w[k] > w[k + 1]]
        if not descents:
            _acc(done, (w, d), q)
            continue
        if strategy == "leftmost":
            k = descents[0]
        elif strategy == "rightmost":
            k = descents[-1]
        else:
            k = rng.choice(descents)
        for w2, d2, q2 in alg.table.rule(w[k], w[k + 1], M - d):
            _acc(work, (w[:k] + w2 + w[k + 2:], d + d2), q * q2)
    return done


# ---------------------------------------------------------------------------
# checks


def expected_leading_term(config: AlgebraConfig, g: Gen, g2: Gen) -> dict:
    """h-degree-zero part of ``[g, g2]`` predicted by the loop-algebra bracket
    with central extension; flat term map."""
    i, j, a = g.i, g.j, g.r
    k, l, b = g2.i, g2.j, g2.r
    out: dict = {}
    if k == j:
        _acc(out, ((gen(i, l, a + b),), 0), ONE)
    if i == l:
        _acc(out, ((gen(k, j, a + b),), 0), -ONE)
    c = to_mpq(config.c)
    # central term from pairing l^(a) with l^(-a)
    if a + b == 0 and a != 0:
        sgn = 1 if a > 0 else -1
        m = abs(a)
        if k == j and i == l:
            _acc(out, ((), 0), sgn * m * c)
        if config.normalization == NORMALIZED and i == j and k == l:
            _acc(out, ((), 0), -sgn * m * c / config.n)
    return out


def check_graded_leading_terms(alg: Algebra, pairs=None) -> CheckResult:
    """The h-degree-zero part of every commutator of window generators agrees
    with the loop-algebra bracket (including the central term)."""
    from .modes import window_generators

    cfg = alg.config
    exact = alg.with_cutoff(None)
    with timed() as tm:
        if pairs is None:
            gens = window_generators(cfg.n, cfg.W)
            pairs = [(x, y) for x in gens for y in gens if x != y]
        witness = None
        checked = 0
        for g, g2 in pairs:
            com = exact.commutator(exact.word(g), exact.word(g2))
            lead = {k: q for k, q in com.t.items() if k[1] == 0}
            want = expected_leading_term(cfg, g, g2)
            checked += 1
            if lead != want:
                witness = {"pair": [g.label(), g2.label()], "got": repr(AlgebraElement(exact, lead)),
                           "want": repr(AlgebraElement(exact, want))}
                break
    return CheckResult("relations", f"leading-terms-n{cfg.n}-W{cfg.W}-M{cfg.M}-{cfg.normalization}",
                       "graded leading terms of commutators", witness is None, witness, tm["t"],
                       {"pairs_checked": checked})


def probe_filter(word: tuple, q: int) -> bool:
    """Monomial lies in the probe window: every plus generator has index < q."""
    return all(g.sector == 0 or g.r < q for g in word)


def cutoff_stability(build, alg: Algebra, p: int, probe: int, label: str = "element") -> CheckResult:
    """Compare ``build(algebra)`` computed with cutoffs ``p`` and ``p + 1`` on
    the monomials of the probe window."""
    with timed() as tm:
        a = build(alg.with_cutoff(p))
        b = build(alg.with_cutoff(p + 1))
        a_t = {k: q for k, q in _flatten(a).items() if probe_filter(k[0], probe)}
        b_t = {k: q for k, q in _flatten(b).items() if probe_filter(k[0], probe)}
        witness = None
        if a_t != b_t:
            key = next(k for k in sorted(set(a_t) | set(b_t), key=repr) if a_t.get(k) != b_t.get(k))
            witness = {"monomial": format_word(key[0]), "h_degree": key[1],
                       f"p={p}": str(a_t.get(key, 0)), f"p={p + 1}": str(b_t.get(key, 0))}
    return CheckResult("relations", f"cutoff-stability-{label}-p{p}-q{probe}", "cutoff stability",
                       witness is None, witness, tm["t"])


def _flatten(x) -> dict:
    """Flat term map of an element or of a list/dict of elements (keys are
    prefixed with the position)."""
    if isinstance(x, AlgebraElement):
        return x.t
    out = {}
    items = x.items() if isinstance(x, dict) else enumerate(x)
    for pos, el in items:
        for (w, d), q in _flatten(el).items():
            out[(w, (pos, d) if not isinstance(d, tuple) else (pos,) + d)] = q
    return out
