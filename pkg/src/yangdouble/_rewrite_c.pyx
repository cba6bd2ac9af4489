# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled normal-form rewriting; same algorithm and interface as
``_rewrite_py``."""


cdef class Rewriter:
    cdef public int M
    cdef public object cutoff
    cdef public object pair_rule
    cdef public object one
    cdef public dict memo
    cdef int _p
    cdef bint _has_cutoff

    def __init__(self, int M, cutoff, pair_rule, one):
        self.M = M
        self.cutoff = cutoff
        self.pair_rule = pair_rule
        self.one = one
        self.memo = {}
        self._has_cutoff = cutoff is not None
        self._p = cutoff if cutoff is not None else 0

    cpdef bint dropped(self, tuple word):
        cdef Py_ssize_t k
        cdef tuple g
        if not self._has_cutoff:
            return False
        for k in range(len(word) - 1, -1, -1):
            g = <tuple>word[k]
            if <int>g[0] == 0:
                return False
            if <int>g[3] >= self._p:
                return True
        return False

    cpdef dict word_nf(self, tuple word, int budget):
        cdef tuple key = (word, budget)
        cdef object res = self.memo.get(key)
        cdef dict out, sub
        cdef Py_ssize_t k, pos, n
        cdef tuple head, tail, w, w2, kk
        cdef int d, d2
        cdef object q, q2, v
        if res is not None:
            return <dict>res
        if self.dropped(word):
            out = {}
        else:
            n = len(word)
            k = -1
            for pos in range(n - 1):
                if word[pos] > word[pos + 1]:
                    k = pos
                    break
            if k < 0:
                out = {(word, 0): self.one}
            else:
                out = {}
                head = word[:k]
                tail = word[k + 2:]
                for w, d, q in self.pair_rule(word[k], word[k + 1], budget):
                    sub = self.word_nf(head + w + tail, budget - d)
                    for (w2, d2), q2 in sub.items():
                        kk = (w2, d + d2)
                        v = out.get(kk)
                        v = q * q2 if v is None else v + q * q2
                        if v:
                            out[kk] = v
                        else:
                            del out[kk]
        self.memo[key] = out
        return out

    cpdef dict normal_form(self, dict terms):
        cdef dict out = {}
        cdef tuple w, w2, kk
        cdef int d, d2
        cdef object q, q2, v
        for (w, d), q in terms.items():
            if d > self.M or not q:
                continue
            for (w2, d2), q2 in self.word_nf(w, self.M - d).items():
                kk = (w2, d + d2)
                v = out.get(kk)
                v = q * q2 if v is None else v + q * q2
                if v:
                    out[kk] = v
                else:
                    del out[kk]
        return out

    cpdef dict product(self, dict x, dict y):
        cdef dict raw = {}
        cdef tuple w1, w2, kk
        cdef int d1, d2, d
        cdef object q1, q2, v
        for (w1, d1), q1 in x.items():
            for (w2, d2), q2 in y.items():
                d = d1 + d2
                if d > self.M:
                    continue
                kk = (w1 + w2, d)
                v = raw.get(kk)
                raw[kk] = q1 * q2 if v is None else v + q1 * q2
        return self.normal_form(raw)
