"""Normal-form rewriting, pure Python implementation.

Terms are flat maps ``{(word, d): q}`` meaning ``q * h^d * word``.  A
``pair_rule(g, g2, budget)`` callback returns the normal form of the
disordered product ``g*g2`` as a list of ``(word, d, q)`` with
``d <= budget``; its ``d == 0`` part is ``g2*g`` plus words of length < 2,
and every longer correction has ``d >= 1``.  Rewriting the first descent of
a word therefore lowers (budget, length, inversions) lexicographically.

With a cutoff ``p``, a word is discarded as soon as some plus-sector
generator with index ``>= p`` has no minus-sector generator to its right:
reordering the remaining plus generators among themselves never lowers the
largest index, so every normal monomial it produces would be dropped.
"""
from __future__ import annotations


class Rewriter:
    def __init__(self, M: int, cutoff, pair_rule, one):
        self.M = M
        self.cutoff = cutoff
        self.pair_rule = pair_rule
        self.one = one
        self.memo: dict = {}

    def dropped(self, word: tuple) -> bool:
        p = self.cutoff
        if p is None:
            return False
        for g in reversed(word):
            if g[0] == 0:
                return False
            if g[3] >= p:
                return True
        return False

    def word_nf(self, word: tuple, budget: int) -> dict:
        key = (word, budget)
        res = self.memo.get(key)
        if res is not None:
            return res
        if self.dropped(word):
            res = {}
        else:
            k = -1
            for pos in range(len(word) - 1):
                if word[pos] > word[pos + 1]:
                    k = pos
                    break
            if k < 0:
                res = {(word, 0): self.one}
            else:
                res = {}
                head, tail = word[:k], word[k + 2:]
                for w, d, q in self.pair_rule(word[k], word[k + 1], budget):
                    sub = self.word_nf(head + w + tail, budget - d)
                    for (w2, d2), q2 in sub.items():
                        kk = (w2, d + d2)
                        v = res.get(kk)
                        v = q * q2 if v is None else v + q * q2
                        if v:
                            res[kk] = v
                        else:
                            del res[kk]
        self.memo[key] = res
        return res

    def normal_form(self, terms: dict) -> dict:
        M = self.M
        out: dict = {}
        for (w, d), q in terms.items():
            if d > M or not q:
                continue
            for (w2, d2), q2 in self.word_nf(w, M - d).items():
                kk = (w2, d + d2)
                v = out.get(kk)
                v = q * q2 if v is None else v + q * q2
                if v:
                    out[kk] = v
                else:
                    del out[kk]
        return out

    def product(self, x: dict, y: dict) -> dict:
        """Normal form of the product of two flat term maps."""
        M = self.M
        raw: dict = {}
        for (w1, d1), q1 in x.items():
            for (w2, d2), q2 in y.items():
                d = d1 + d2
                if d > M:
                    continue
                kk = (w1 + w2, d)
                v = raw.get(kk)
                raw[kk] = q1 * q2 if v is None else v + q1 * q2
        return self.normal_form(raw)
