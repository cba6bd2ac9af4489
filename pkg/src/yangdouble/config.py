"""Algebra configuration and its fingerprint."""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, replace
from fractions import Fraction

NORMALIZED = "normalized"
UNNORMALIZED = "unnormalized"


@dataclass(frozen=True)
class AlgebraConfig:
    """Parameters of a truncated model of the algebra.

    ``c`` is the value of the central element, ``M`` the h-order (work
    modulo ``h^(M+1)``), ``N`` the u-order of series, ``W`` the mode window
    ``-W <= r <= W`` of the eagerly derived relation table and ``p`` the
    plus-sector cutoff: normal monomials containing ``l^(r)`` with ``r >= p``
    are dropped.
    """

    n: int
    c: Fraction = Fraction(0)
    normalization: str = UNNORMALIZED
    M: int = 4
    N: int = 4
    W: int = 4
    p: int = 4

    def __post_init__(self):
        object.__setattr__(self, "c", Fraction(self.c))
        if self.n < 2:
            raise ValueError("n must be at least 2")
        if min(self.M, self.N, self.W) < 1:
            raise ValueError("M, N and W must be positive")
        if self.p < 0:
            raise ValueError("the cutoff p must be non-negative (p = 0 is the vacuum quotient)")
        if self.normalization not in (NORMALIZED, UNNORMALIZED):
            raise ValueError(f"unknown normalization {self.normalization!r}")

    @property
    def critical(self) -> bool:
        return self.c == -self.n

    def replace(self, **changes) -> "AlgebraConfig":
        return replace(self, **changes)

    def to_json(self) -> dict:
        d = asdict(self)
        d["c"] = str(self.c)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "AlgebraConfig":
        d = dict(d)
        d["c"] = Fraction(d["c"])
        return cls(**d)

    def fingerprint(self) -> str:
        return _digest(self.to_json())

    def table_fingerprint(self) -> str:
        """Fingerprint of the fields a relation table depends on (not ``N``
        or the cutoff ``p``)."""
        d = self.to_json()
        return _digest({k: d[k] for k in TABLE_FIELDS})


TABLE_FIELDS = ("n", "c", "normalization", "M", "W")


def _digest(d: dict) -> str:
    blob = json.dumps(d, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
