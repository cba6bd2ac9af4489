"""Compare the compiled and pure-Python rewriting kernels on the same
workload: normal forms of products of random modes at n = 2 and n = 3.

    python3 benchmarks/bench_normal_form.py [--words 200] [--length 4] [--repeat 3]
"""
from __future__ import annotations

import argparse
import random
import time

from yangdouble import _rewrite_py
from yangdouble.config import NORMALIZED, AlgebraConfig
from yangdouble.modes import gen
from yangdouble.relations import ONE, RelationTable

try:
    from yangdouble import _rewrite_c
except ImportError:
    _rewrite_c = None


def workload(n: int, count: int, length: int, seed: int) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        word = tuple(gen(rng.randint(1, n), rng.randint(1, n), rng.randint(-3, 3)) for _ in range(length))
        out.append({(word, 0): ONE})
    return out


def timed_run(backend, table: RelationTable, terms: list, cutoff) -> tuple:
    rw = backend.Rewriter(table.config.M, cutoff, table.rule, ONE)
    t0 = time.perf_counter()
    results = [rw.normal_form(t) for t in terms]
    return time.perf_counter() - t0, results


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--words", type=int, default=200)
    ap.add_argument("--length", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    backends = [("python", _rewrite_py)]
    if _rewrite_c is not None:
        backends.append(("compiled", _rewrite_c))
    else:
        print("compiled kernel not built; timing the Python fallback only")
    print(f"{'n':>2} {'cutoff':>6} {'backend':>9} {'best s':>9} {'speedup':>8}")
    for n in (2, 3):
        table = RelationTable(AlgebraConfig(n=n, c=-n, normalization=NORMALIZED, M=4, W=4)).derive_window()
        terms = workload(n, args.words, args.length, args.seed)
        for cutoff in (None, 2):
            best = {}
            outputs = {}
            for name, backend in backends:
                times = []
                for _ in range(args.repeat):
                    dt, res = timed_run(backend, table, terms, cutoff)
                    times.append(dt)
                best[name] = min(times)
                outputs[name] = res
            if len(outputs) == 2 and outputs["python"] != outputs["compiled"]:
                raise SystemExit(f"backends disagree at n={n}, cutoff={cutoff}")
            for name in best:
                print(f"{n:>2} {str(cutoff):>6} {name:>9} {best[name]:>9.4f} {best['python'] / best[name]:>8.2f}")


if __name__ == "__main__":
    main()
