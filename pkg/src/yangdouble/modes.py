"""Mode generators ``l_ij^(r)`` and the PBW order.

A generator is stored as the tuple ``(sector, off, i, r)`` where ``sector``
is 0 for ``r < 0`` and 1 for ``r >= 0``, and ``off`` is ``j - i`` in the
minus sector and ``i - j`` in the plus sector.  Plain tuple comparison on
this encoding *is* the PBW order: every minus mode precedes every plus
mode, minus modes are ordered lexicographically by ``(j-i, i, r)`` and plus
modes by ``(i-j, i, r)``.  A word is a tuple of generators; it is normal
when it is non-decreasing.
"""
from __future__ import annotations

from typing import NamedTuple

MINUS, PLUS = 0, 1


class Gen(NamedTuple):
    sector: int
    off: int
    i: int
    r: int

    @property
    def j(self) -> int:
        return self.i + self.off if self.sector == MINUS else self.i - self.off

    @property
    def is_plus(self) -> bool:
        return self.sector == PLUS

    @property
    def ij(self) -> tuple:
        return (self.i, self.j)

    def label(self) -> str:
        return f"l{self.i}{self.j}({self.r})"

    def __repr__(self):
        return self.label()


def gen(i: int, j: int, r: int) -> Gen:
    if r < 0:
        return Gen(MINUS, j - i, i, r)
    return Gen(PLUS, i - j, i, r)


def parse_gen(text: str) -> Gen:
    """Inverse of :meth:`Gen.label` for single-digit indices, also accepting
    ``l_1_2(-3)``."""
    t = text.strip()
    if not t.startswith("l") or not t.endswith(")"):
        raise ValueError(f"bad generator label {text!r}")
    head, r = t[1:-1].split("(")
    parts = [p for p in head.split("_") if p]
    if len(parts) == 1:
        i, j = int(parts[0][0]), int(parts[0][1:])
    else:
        i, j = int(parts[0]), int(parts[1])
    return gen(i, j, int(r))


def is_normal(word: tuple) -> bool:
    return all(word[k] <= word[k + 1] for k in range(len(word) - 1))


def word_degree(word: tuple) -> int:
    """Sum of mode indices (the grading with ``deg l^(r) = r``)."""
    return sum(g.r for g in word)


def format_word(word: tuple) -> str:
    return "*".join(g.label() for g in word) if word else "1"


def window_generators(n: int, W: int) -> list:
    """All generators with ``-W <= r <= W``, sorted in PBW order."""
    out = [gen(i, j, r) for i in range(1, n + 1) for j in range(1, n + 1) for r in range(-W, W + 1)]
    return sorted(out)
