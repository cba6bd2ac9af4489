"""Verification suites, the run configuration and the relation-table cache.

Each suite derives the algebra configurations it needs from the run
configuration: relation and Gauss checks use the requested level and
normalization as given (Gauss and current relations are stated for the
unnormalized algebra, which is therefore forced there), while the centre,
Harish-Chandra and Wakimoto suites work in the normalized algebra at the
critical level ``c = -n`` and use other levels only for negative controls.
"""
from __future__ import annotations

import logging
import os
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

from . import center, hc, rtt, tensor
from .algebra import Algebra, check_graded_leading_terms
from .config import NORMALIZED, UNNORMALIZED, AlgebraConfig
from .currents import run_gauss_suite
from .fnorm import check_telescoping
from .gauss import MINUS_SECTOR, PLUS_SECTOR
from .relations import CacheError, RelationTable
from .reports import CheckResult, Report

log = logging.getLogger("yangdouble")

SUITES = ("rmatrix", "fnorm", "relations", "gauss", "center", "hc", "wakimoto")
CACHE_ENV = "YANGDOUBLE_CACHE_DIR"


@dataclass
class RunConfig:
    """Everything a run depends on.  ``c = None`` means the critical level."""

    n: int = 2
    c: Fraction | None = None
    normalization: str = NORMALIZED
    M: int = 4
    N: int = 4
    W: int = 4
    p: int = 4
    suites: tuple = SUITES
    seed: int = 0
    cache_dir: str | None = None
    output: str | None = None
    wakimoto_params: str | None = None
    centrality_p: int = 6
    gauss_window: int = 3
    jobs: int = 1

    def __post_init__(self):
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s) {unknown}; choose from {', '.join(SUITES)}")
        self.suites = tuple(self.suites)
        self.algebra_config()  # validate bounds

    @property
    def level(self) -> Fraction:
        return Fraction(-self.n) if self.c is None else Fraction(self.c)

    def algebra_config(self, **changes) -> AlgebraConfig:
        base = AlgebraConfig(n=self.n, c=self.level, normalization=self.normalization, M=self.M, N=self.N, W=self.W,
                             p=self.p)
        return base.replace(**changes)

    def critical_config(self, **changes) -> AlgebraConfig:
        return self.algebra_config(c=Fraction(-self.n), normalization=NORMALIZED, **changes)

    def resolved_cache_dir(self) -> Path:
        if self.cache_dir:
            return Path(self.cache_dir)
        env = os.environ.get(CACHE_ENV)
        if env:
            return Path(env)
        return Path.home() / ".cache" / "yangdouble"

    def to_json(self) -> dict:
        d = asdict(self)
        d["c"] = str(self.level)
        d["suites"] = list(self.suites)
        d["cache_dir"] = str(self.resolved_cache_dir())
        return d


class TableCache:
    """Relation tables keyed by :meth:`AlgebraConfig.table_fingerprint`, kept
    in memory and in ``relations-<fingerprint>.txt`` files."""

    def __init__(self, directory: Path | None, report: Report | None = None):
        self.directory = directory
        self.report = report
        self.tables: dict = {}

    def path(self, config: AlgebraConfig) -> Path | None:
        if self.directory is None:
            return None
        return self.directory / f"relations-{config.table_fingerprint()[:24]}.txt"

    def _warn(self, msg: str):
        log.warning(msg)
        if self.report is not None:
            self.report.warnings.append(msg)

    def table(self, config: AlgebraConfig) -> RelationTable:
        fp = config.table_fingerprint()
        if fp in self.tables:
            return self.tables[fp]
        path = self.path(config)
        table = None
        if path is not None and path.exists():
            try:
                table = RelationTable.load(path, config)
                log.info("loaded relation table %s", path)
            except (CacheError, OSError) as exc:
                self._warn(f"cache file {path} rejected ({exc}); re-deriving")
        if table is None:
            table = RelationTable(config).derive_window()
            if path is not None:
                try:
                    path.parent.mkdir(parents=True, exist_ok=True)
                    table.save(path)
                except OSError as exc:
                    self._warn(f"could not write cache file {path}: {exc}")
        self.tables[fp] = table
        if self.report is not None:
            self.report.fingerprints[fp[:24]] = str(path) if path else "memory"
        return table

    def algebra(self, config: AlgebraConfig) -> Algebra:
        return Algebra(config, self.table(config))


def negative_control(result: CheckResult, label: str) -> CheckResult:
    """A check that is expected to fail; the control passes when it does."""
    return CheckResult(result.suite, f"{result.check_id}-negative-control", f"negative control: {label}",
                       not result.passed, None if not result.passed else "control unexpectedly passed",
                       result.wall_time, {"control_witness": result.witness})


# ---------------------------------------------------------------------------
# suites


def suite_rmatrix(rc: RunConfig, cache: TableCache) -> list:
    out = tensor.check_ybe_unitarity(rc.n, seed=rc.seed)
    for k in range(2, min(rc.n, 3) + 1):
        out.append(tensor.check_jucys(k, rc.n))
    out.append(tensor.check_crossing(rc.n, 6, 6, normalized=True))
    out.append(negative_control(tensor.check_crossing(rc.n, 6, 6, normalized=False), "crossing fails for rbar alone"))
    return out


def suite_fnorm(rc: RunConfig, cache: TableCache) -> list:
    return [check_telescoping(rc.n, 12)]


def suite_relations(rc: RunConfig, cache: TableCache) -> list:
    alg = cache.algebra(rc.algebra_config())
    return [check_graded_leading_terms(alg), rtt.check_base_commutators(alg), rtt.check_rtt_route(alg)]


def suite_gauss(rc: RunConfig, cache: TableCache) -> list:
    alg = cache.algebra(rc.algebra_config(normalization=UNNORMALIZED))
    return run_gauss_suite(alg, window=rc.gauss_window)


def suite_center(rc: RunConfig, cache: TableCache) -> list:
    crit = cache.algebra(rc.critical_config())
    zero = cache.algebra(rc.algebra_config(c=0, normalization=NORMALIZED))
    out = []
    for alg in (crit, zero):
        for sector in (PLUS_SECTOR, MINUS_SECTOR):
            out.append(center.qdet_centrality(alg, sector))
    out.append(negative_control(
        center.qdet_centrality(cache.algebra(rc.algebra_config(c=-rc.n, normalization=UNNORMALIZED)), PLUS_SECTOR),
        "qdet is not central without the normalization"))
    out.append(center.check_inverse_minors(crit))
    for k in range(1, rc.n + 1):
        out.append(center.check_ell_routes(crit, k))
    out.append(center.check_ell_n_identity(crit))
    cp = crit.with_cutoff(rc.centrality_p)
    for k in range(1, rc.n + 1):
        out += center.check_ell_centrality(cp, k)
    control = center.check_ell_centrality(zero.with_cutoff(rc.centrality_p), 1)[0]
    out.append(negative_control(control, "l_1 is not central away from the critical level"))
    out += center.check_vacuum_invariants(crit)
    vac0 = center.check_vacuum_invariants(zero, kmax=1)[0]
    out.append(negative_control(vac0, "vacuum invariance of lbar_1 needs the critical level"))
    return out


def suite_hc(rc: RunConfig, cache: TableCache) -> list:
    crit = cache.algebra(rc.critical_config())
    out = [hc.check_qdet_plus_image(crit)]
    ells = {}
    for k in range(1, rc.n + 1):
        ells[k] = center.build_ell(crit, k)
        out += hc.check_hc_image(crit, k, ell=ells[k])
    out.append(negative_control(hc.check_hc_image_unshifted(crit, 1, ells[1]), "the image needs the hn/2 shift"))
    if rc.n >= 2:
        out.append(hc.check_multiplicativity(crit, 1, 2, range(-2, 3), ells))
    return out


def wakimoto_param_sets(rc: RunConfig) -> list:
    sets = [(f"-seed{rc.seed + s}", hc.WakimotoParams.random(rc.n, rc.p, rc.seed + s)) for s in range(5)]
    if rc.wakimoto_params:
        params = hc.load_wakimoto_params(rc.wakimoto_params)
        if params.n != rc.n:
            raise ValueError(f"parameter file is for n={params.n}, run has n={rc.n}")
        if params.length > rc.p:
            raise ValueError(f"parameter series longer than the cutoff p={rc.p}")
        sets.append(("-file", params))
    return sets


def suite_wakimoto(rc: RunConfig, cache: TableCache) -> list:
    crit = cache.algebra(rc.critical_config())
    ring = hc.image_ring(crit)
    out = []
    for k in range(1, rc.n + 1):
        out.append(hc.check_trivial_wakimoto(rc.n, k, rc.M))
        image = hc.chi_of_ell(center.build_ell(crit, k), ring)
        for label, params in wakimoto_param_sets(rc):
            out += hc.check_wakimoto_consistency(params, k, rc.M, chi_image=image, label=label)
    return out


SUITE_FUNCTIONS = {
    "rmatrix": suite_rmatrix,
    "fnorm": suite_fnorm,
    "relations": suite_relations,
    "gauss": suite_gauss,
    "center": suite_center,
    "hc": suite_hc,
    "wakimoto": suite_wakimoto,
}


def _run_one(rc: RunConfig, name: str) -> tuple:
    report = Report(config={})
    cache = TableCache(rc.resolved_cache_dir(), report)
    results = SUITE_FUNCTIONS[name](rc, cache)
    return results, report.fingerprints, report.warnings


def run(rc: RunConfig) -> Report:
    report = Report(config=rc.to_json())
    if rc.jobs > 1 and len(rc.suites) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=rc.jobs) as pool:
            outcomes = list(pool.map(_run_one, [rc] * len(rc.suites), rc.suites))
    else:
        outcomes = [_run_one(rc, name) for name in rc.suites]
    for results, fps, warnings in outcomes:
        for r in results:
            report.add(r)
        report.fingerprints.update(fps)
        report.warnings.extend(w for w in warnings if w not in report.warnings)
    return report
