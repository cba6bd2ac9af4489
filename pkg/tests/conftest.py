from fractions import Fraction
from functools import lru_cache

from yangdouble.algebra import Algebra
from yangdouble.config import NORMALIZED, AlgebraConfig
from yangdouble.relations import RelationTable


@lru_cache(maxsize=None)
def make_algebra(n=2, c=None, normalization=NORMALIZED, M=4, N=4, W=4, p=4):
    c = Fraction(-n) if c is None else Fraction(c)
    config = AlgebraConfig(n=n, c=c, normalization=normalization, M=M, N=N, W=W, p=p)
    return Algebra(config, RelationTable(config))
