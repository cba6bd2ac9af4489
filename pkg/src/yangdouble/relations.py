"""Reordering rules for pairs of mode generators, derived from the RTT
relations, and the relation table with its cache file format.

Conventions.  ``T^+(u) = sum_{a>=0} l^(a) u^(-a-1)``, ``T^-(v) =
sum_{s>=1} l^(-s) v^(s-1)`` and ``t^+(u) = 1 - h T^+(u)``, ``t^-(v) = 1 + h
T^-(v)``.

Same sector.  Clearing the denominator of ``rbar(u-v)`` gives, for either
sector,

    (u-v)[T_ij(u), T_kl(v)] = +-(delta_kj (T_il(v) - T_il(u))
                                 + delta_il (T_kj(u) - T_kj(v)))
                              + h (T_kj(v) T_il(u) - T_kj(u) T_il(v))

(upper sign for the plus sector) and telescoping in the first argument
yields closed formulas.  The scalar normalization cancels here.

Mixed sectors.  With ``alpha = u-v-hc/2``, ``beta = u-v+hc/2`` and ``G =
f(beta)/f(alpha)`` (``G = 1`` without normalization)

    [T^+_ij(u), T^-_kl(v)] = h^-2 { (h/alpha) t^+_kj(u) t^-_il(v)
                                   - (h/beta) t^-_kj(v) t^+_il(u)
                                   - (G-1) [t^-_kl(v) t^+_ij(u) + (h/beta) t^-_kj(v) t^+_il(u)] }

expanded in ``|u| > |v|``.  The braces are computed to ``h^(M+2)`` and
divided by ``h^2``; a nonzero part below ``h^2`` means the extraction is
inconsistent and aborts.
"""
from __future__ import annotations

import io
import os
from fractions import Fraction
from math import comb

from gmpy2 import mpq

from . import _kernel
from .config import NORMALIZED, AlgebraConfig
from .fnorm import ps_inv, ps_moebius, ps_mul, solve_f
from .modes import MINUS, PLUS, Gen, gen, window_generators

CACHE_FORMAT = 1
CACHE_MAGIC = "yangdouble-relation-table"

ONE = mpq(1)
ZERO = mpq(0)


class WindowError(ValueError):
    """A rule was requested for a generator outside the table window."""


class InconsistentExtraction(RuntimeError):
    pass


class CacheError(ValueError):
    pass


def _acc(out: dict, key, q):
    v = out.get(key)
    v = q if v is None else v + q
    if v:
        out[key] = v
    elif key in out:
        del out[key]


def mixed_kernels(config: AlgebraConfig) -> dict:
    """tau-series coefficients (``tau = h/(u-v)``) of the kernels ``h/alpha``,
    ``h/beta``, ``G - 1`` and ``(G - 1) h/beta``, through ``tau^(M+2)``."""
    K = config.M + 2
    half = mpq(config.c) / 2
    k1 = [ZERO] + [half ** (m - 1) for m in range(1, K + 1)]
    k2 = [ZERO] + [(-half) ** (m - 1) for m in range(1, K + 1)]
    if config.normalization == NORMALIZED:
        fhat = list(solve_f(config.n, K).coefficients)
        hc = Fraction(config.c) / 2
        G = ps_mul(ps_moebius(fhat, hc, K), ps_inv(ps_moebius(fhat, -hc, K), K), K)
        S = [mpq(x) for x in G]
        S[0] -= 1
    else:
        S = [ZERO] * (K + 1)
    k3 = [ZERO] * (K + 1)
    for a in range(K + 1):
        if S[a]:
            for b in range(K + 1 - a):
                k3[a + b] += S[a] * k2[b]
    return {"alpha": k1, "beta": k2, "S": S, "S_beta": k3}


class RuleDeriver:
    """One-step commutators ``[g, g2]`` for ``g > g2`` as raw term maps."""

    def __init__(self, config: AlgebraConfig):
        self.config = config
        self.kernels = mixed_kernels(config)

    def commutator(self, g: Gen, g2: Gen) -> dict:
        if g.sector == PLUS and g2.sector == PLUS:
            return self.plus_plus(g, g2)
        if g.sector == MINUS and g2.sector == MINUS:
            return self.minus_minus(g, g2)
        if g.sector == PLUS and g2.sector == MINUS:
            return self.plus_minus(g, g2)
        return {k: -q for k, q in self.plus_minus(g2, g).items()}

    def plus_plus(self, g: Gen, g2: Gen) -> dict:
        i, j, a = g.i, g.j, g.r
        k, l, b = g2.i, g2.j, g2.r
        out: dict = {}
        if k == j:
            _acc(out, ((gen(i, l, a + b),), 0), ONE)
        if i == l:
            _acc(out, ((gen(k, j, a + b),), 0), -ONE)
        for t in range(a):
            _acc(out, ((gen(k, j, b + t), gen(i, l, a - t - 1)), 1), ONE)
            _acc(out, ((gen(k, j, a - t - 1), gen(i, l, b + t)), 1), -ONE)
        return out

    def minus_minus(self, g: Gen, g2: Gen) -> dict:
        i, j, a = g.i, g.j, -g.r
        k, l, b = g2.i, g2.j, -g2.r
        out: dict = {}
        if k == j:
            _acc(out, ((gen(i, l, -a - b),), 0), ONE)
        if i == l:
            _acc(out, ((gen(k, j, -a - b),), 0), -ONE)
        for t in range(a):
            _acc(out, ((gen(k, j, -(b + t + 1)), gen(i, l, -(a - t))), 1), -ONE)
            _acc(out, ((gen(k, j, -(a - t)), gen(i, l, -(b + t + 1))), 1), ONE)
        return out

    def plus_minus(self, g: Gen, g2: Gen) -> dict:
        """``[l_ij^(a), l_kl^(-s)]`` read off as the coefficient of
        ``u^(-a-1) v^(s-1)``."""
        i, j, a = g.i, g.j, g.r
        k, l, s = g2.i, g2.j, -g2.r
        eu, ev = -a - 1, s - 1
        top = self.config.M + 2
        kern = self.kernels

        def tplus(p, q, e):
            if e == 0:
                return [((), 0, ONE)] if p == q else []
            return [((gen(p, q, -e - 1),), 1, -ONE)]

        def tminus(p, q, e):
            res = [((gen(p, q, -e - 1),), 1, ONE)]
            if e == 0 and p == q:
                res.append(((), 0, ONE))
            return res

        # (kernel, sign, plus entry, minus entry, plus factor first?)
        terms = [
            (kern["alpha"], ONE, (k, j), (i, l), True),
            (kern["beta"], -ONE, (i, l), (k, j), False),
            (kern["S"], -ONE, (i, j), (k, l), False),
            (kern["S_beta"], -ONE, (i, l), (k, j), False),
        ]
        raw: dict = {}
        for series, sign, pe, me, plus_first in terms:
            for m in range(1, top + 1):
                km = series[m]
                if not km:
                    continue
                for q in range(0, ev + 1):
                    x = -m - q
                    if x < eu:
                        break
                    kc = sign * km * comb(m + q - 1, q)
                    for wp, dp, cp in tplus(pe[0], pe[1], eu - x):
                        for wm, dm, cm in tminus(me[0], me[1], ev - q):
                            d = m + dp + dm
                            if d > top:
                                continue
                            w = wp + wm if plus_first else wm + wp
                            _acc(raw, (w, d), kc * cp * cm)
        # the m = 0 part of G - 1 vanishes, so S needs no constant term
        out = {}
        for (w, d), q in raw.items():
            if d < 2:
                raise InconsistentExtraction(
                    f"term of h-degree {d} survives in [{g.label()}, {g2.label()}]: {w}"
                )
            out[(w, d - 2)] = q
        return out


class RelationTable:
    """Exact normal forms of disordered generator pairs.

    Rules are derived on demand and memoized per (pair, h-budget).
    :meth:`derive_window` fills the table for every pair of generators with
    ``|r| <= W``.  With ``strict=True`` any request involving a generator
    outside the window raises :class:`WindowError`.
    """

    def __init__(self, config: AlgebraConfig, strict: bool = False):
        self.config = config
        self.strict = strict
        self.deriver = RuleDeriver(config)
        self.full: dict = {}
        self.partial: dict = {}
        self.raw: dict = {}
        self._exact = _kernel.Rewriter(config.M, None, self.rule, ONE)

    @property
    def fingerprint(self) -> str:
        return self.config.table_fingerprint()

    def in_window(self, g: Gen) -> bool:
        return -self.config.W <= g.r <= self.config.W and 1 <= g.i <= self.config.n and 1 <= g.j <= self.config.n

    def raw_commutator(self, g: Gen, g2: Gen) -> dict:
        key = (g, g2)
        r = self.raw.get(key)
        if r is None:
            r = self.deriver.commutator(g, g2)
            self.raw[key] = r
        return r

    def rule(self, g: Gen, g2: Gen, budget: int) -> list:
        """Normal form of ``g*g2`` (``g > g2``) modulo ``h^(budget+1)``."""
        key = (g, g2)
        full = self.full.get(key)
        if full is not None:
            if budget >= self.config.M:
                return full
            return [t for t in full if t[1] <= budget]
        pkey = (g, g2, budget)
        res = self.partial.get(pkey)
        if res is not None:
            return res
        if self.strict and not (self.in_window(g) and self.in_window(g2)):
            bad = g if not self.in_window(g) else g2
            raise WindowError(f"rule for {g.label()}*{g2.label()} needs {bad.label()} outside window W={self.config.W}")
        res = [((g2, g), 0, ONE)]
        corr = {k: q for k, q in self.raw_commutator(g, g2).items() if k[1] <= budget}
        nf: dict = {}
        for (w, d), q in corr.items():
            for (w2, d2), q2 in self._exact.word_nf(w, budget - d).items():
                _acc(nf, (w2, d + d2), q * q2)
        res += sorted(((w, d, q) for (w, d), q in nf.items()), key=_term_key)
        if budget >= self.config.M:
            self.full[key] = res
        else:
            self.partial[pkey] = res
        return res

    def derive_window(self) -> "RelationTable":
        gens = window_generators(self.config.n, self.config.W)
        for a, g in enumerate(gens):
            for g2 in gens[:a]:
                self.rule(g, g2, self.config.M)
        return self

    def window_rules(self) -> dict:
        gens = window_generators(self.config.n, self.config.W)
        out = {}
        for a, g in enumerate(gens):
            for g2 in gens[:a]:
                out[(g, g2)] = self.rule(g, g2, self.config.M)
        return out

    # cache file

    def dumps(self) -> str:
        buf = io.StringIO()
        rules = self.window_rules()
        buf.write(f"{CACHE_MAGIC}\n")
        buf.write(f"format {CACHE_FORMAT}\n")
        buf.write(f"fingerprint {self.fingerprint}\n")
        cfg = self.config.to_json()
        buf.write("config " + " ".join(f"{k}={cfg[k]}" for k in sorted(cfg)) + "\n")
        buf.write(f"rules {len(rules)}\n")
        for (g, g2), terms in sorted(rules.items()):
            body = " ".join(f"{_word_text(w)}:{d}:{q}" for w, d, q in terms)
            buf.write(f"{_gen_text(g)};{_gen_text(g2)} {body}\n")
        return buf.getvalue()

    def save(self, path) -> None:
        tmp = f"{path}.tmp{os.getpid()}"
        with open(tmp, "w") as fh:
            fh.write(self.dumps())
        os.replace(tmp, path)

    @classmethod
    def loads(cls, text: str, config: AlgebraConfig, strict: bool = False) -> "RelationTable":
        lines = text.splitlines()
        if len(lines) < 5 or lines[0] != CACHE_MAGIC:
            raise CacheError("not a relation table file")
        if lines[1] != f"format {CACHE_FORMAT}":
            raise CacheError(f"unsupported format line {lines[1]!r}")
        fp = lines[2].split(" ", 1)[1] if lines[2].startswith("fingerprint ") else None
        if fp != config.table_fingerprint():
            raise CacheError("fingerprint mismatch")
        try:
            count = int(lines[4].split()[1])
        except (IndexError, ValueError):
            raise CacheError("bad rule count line")
        body = lines[5:]
        if len(body) != count:
            raise CacheError(f"expected {count} rules, found {len(body)}")
        table = cls(config, strict)
        try:
            for line in body:
                head, _, rest = line.partition(" ")
                a, b = head.split(";")
                terms = []
                for tok in rest.split():
                    w, d, q = tok.split(":")
                    terms.append((_parse_word(w), int(d), mpq(q)))
                table.full[(_parse_gen(a), _parse_gen(b))] = terms
        except ValueError as exc:
            raise CacheError(f"malformed rule record: {exc}")
        return table

    @classmethod
    def load(cls, path, config: AlgebraConfig, strict: bool = False) -> "RelationTable":
        with open(path) as fh:
            return cls.loads(fh.read(), config, strict)


def derive_relations(config: AlgebraConfig, strict: bool = False) -> RelationTable:
    return RelationTable(config, strict).derive_window()


def _term_key(t):
    return (t[1], len(t[0]), t[0])


def _gen_text(g: Gen) -> str:
    return f"{g.i},{g.j},{g.r}"


def _parse_gen(s: str) -> Gen:
    i, j, r = (int(x) for x in s.split(","))
    return gen(i, j, r)


def _word_text(w: tuple) -> str:
    return "/".join(_gen_text(g) for g in w) if w else "1"


def _parse_word(s: str) -> tuple:
    if s == "1":
        return ()
    return tuple(_parse_gen(x) for x in s.split("/"))
