from fractions import Fraction
import random
import subprocess
import sys

import pytest

from conftest import make_algebra
from yangdouble import _kernel, _rewrite_py
from yangdouble.algebra import Algebra
from yangdouble.config import NORMALIZED, UNNORMALIZED, AlgebraConfig
from yangdouble.modes import gen
from yangdouble.relations import CACHE_MAGIC, ONE, CacheError, RelationTable, RuleDeriver
from yangdouble.rtt import check_base_commutators, check_rtt_route


@pytest.fixture(scope="module")
def table():
    cfg = AlgebraConfig(n=2, c=Fraction(-2), normalization=NORMALIZED, M=3, N=4, W=3, p=4)
    return RelationTable(cfg).derive_window()


def test_config_validation():
    with pytest.raises(ValueError):
        AlgebraConfig(n=1)
    with pytest.raises(ValueError):
        AlgebraConfig(n=2, M=0)
    with pytest.raises(ValueError):
        AlgebraConfig(n=2, p=-1)
    with pytest.raises(ValueError):
        AlgebraConfig(n=2, normalization="other")
    assert AlgebraConfig(n=2, p=0).p == 0


def test_config_json_round_trip():
    cfg = AlgebraConfig(n=3, c=Fraction(-3, 2), normalization=NORMALIZED, M=3, N=5, W=2, p=3)
    assert AlgebraConfig.from_json(cfg.to_json()) == cfg
    assert AlgebraConfig(n=3, c=-3).critical


def test_table_fingerprint_ignores_cutoff_and_series_order():
    cfg = AlgebraConfig(n=2, c=-2)
    assert cfg.table_fingerprint() == cfg.replace(p=7, N=9).table_fingerprint()
    assert cfg.fingerprint() != cfg.replace(p=7).fingerprint()


@pytest.mark.parametrize("change", [{"c": Fraction(0)}, {"c": Fraction(-1)}, {"M": 3}, {"W": 5}, {"n": 3},
                                    {"normalization": NORMALIZED}])
def test_fingerprint_changes(change):
    cfg = AlgebraConfig(n=2, c=-2)
    assert cfg.table_fingerprint() != cfg.replace(**change).table_fingerprint()


def test_cache_round_trip(table, tmp_path):
    path = tmp_path / "t.txt"
    table.save(path)
    text = path.read_text()
    assert text.splitlines()[0] == CACHE_MAGIC
    assert text.splitlines()[1] == "format 1"
    again = RelationTable.load(path, table.config)
    assert again.dumps() == text
    assert again.rule(gen(2, 2, 1), gen(1, 1, -1), 3) == table.rule(gen(2, 2, 1), gen(1, 1, -1), 3)


def test_cache_rejects_other_level(table):
    with pytest.raises(CacheError, match="fingerprint"):
        RelationTable.loads(table.dumps(), table.config.replace(c=Fraction(0)))


def test_cache_accepts_other_cutoff(table):
    RelationTable.loads(table.dumps(), table.config.replace(p=6))


@pytest.mark.parametrize("mutate", [
    lambda lines: ["garbage"] + lines[1:],
    lambda lines: lines[:1] + ["format 99"] + lines[2:],
    lambda lines: lines[:-1],
    lambda lines: lines[:-1] + [lines[-1].replace(":", "?")],
    lambda lines: lines[:4] + ["rules x"] + lines[5:],
])
def test_cache_rejects_corruption(table, mutate):
    lines = table.dumps().splitlines()
    with pytest.raises(CacheError):
        RelationTable.loads("\n".join(mutate(lines)) + "\n", table.config)


@pytest.mark.parametrize("normalization", [NORMALIZED, UNNORMALIZED])
@pytest.mark.parametrize("c", [-2, 0, Fraction(3, 5)])
def test_base_commutators(normalization, c):
    assert check_base_commutators(make_algebra(c=c, normalization=normalization, M=3)).passed


@pytest.mark.parametrize("normalization", [NORMALIZED, UNNORMALIZED])
def test_rtt_route(normalization):
    assert check_rtt_route(make_algebra(normalization=normalization, M=3), radius=2).passed


def test_rtt_route_detects_wrong_table():
    # a table labelled c = 3 whose rules are derived at c = 0
    cfg = make_algebra(c=3, M=3).config
    table = RelationTable(cfg)
    table.deriver = RuleDeriver(cfg.replace(c=Fraction(0)))
    alg = Algebra(cfg, table)
    assert not check_rtt_route(alg, radius=2).passed


def _words(n, count, seed):
    rng = random.Random(seed)
    return [tuple(gen(rng.randint(1, n), rng.randint(1, n), rng.randint(-3, 3)) for _ in range(4))
            for _ in range(count)]


@pytest.mark.parametrize("cutoff", [None, 2])
def test_backends_agree(table, cutoff):
    compiled = pytest.importorskip("yangdouble._rewrite_c")
    py = _rewrite_py.Rewriter(table.config.M, cutoff, table.rule, ONE)
    c = compiled.Rewriter(table.config.M, cutoff, table.rule, ONE)
    for w in _words(2, 40, seed=5):
        assert c.normal_form({(w, 0): ONE}) == py.normal_form({(w, 0): ONE})


def test_pure_python_switch():
    code = "from yangdouble import _kernel; print(_kernel.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env={"YANGDOUBLE_PURE_PYTHON": "1", "PATH": ""},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert _kernel.BACKEND in ("python", "compiled")
