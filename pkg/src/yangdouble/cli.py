"""Command-line front end: ``run``, ``export-tables`` and ``show-config``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from .relations import RelationTable
from .suites import SUITES, RunConfig, TableCache, run


def _suite_list(text: str) -> tuple:
    if text.strip().lower() == "all":
        return SUITES
    return tuple(s.strip() for s in text.split(",") if s.strip())


def _add_config_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=int, default=2, help="rank of gl_n (default 2)")
    p.add_argument("--c", type=Fraction, default=None, help="level; default is the critical level -n")
    p.add_argument("--normalization", choices=("normalized", "unnormalized"), default="normalized")
    p.add_argument("--M", type=int, default=4, help="work modulo h^(M+1)")
    p.add_argument("--N", type=int, default=4, help="u-order of series")
    p.add_argument("--W", type=int, default=4, help="mode window of the relation table")
    p.add_argument("--p", type=int, default=4, help="plus-sector cutoff")
    p.add_argument("--suites", type=_suite_list, default=SUITES,
                   help=f"comma-separated subset of {','.join(SUITES)}, 'all', or '' for none")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cache-dir", default=None, help="relation-table cache directory (overrides YANGDOUBLE_CACHE_DIR)")
    p.add_argument("--wakimoto-params", default=None, help="plain-text parameter file for the wakimoto suite")
    p.add_argument("--centrality-p", type=int, default=6, help="cutoff used for the l_k centrality checks")
    p.add_argument("--gauss-window", type=int, default=3)
    p.add_argument("--jobs", type=int, default=1, help="worker processes, one suite per worker")


def _run_config(args, parser) -> RunConfig:
    try:
        return RunConfig(
            n=args.n, c=args.c, normalization=args.normalization, M=args.M, N=args.N, W=args.W, p=args.p,
            suites=args.suites, seed=args.seed, cache_dir=args.cache_dir, output=getattr(args, "output", None),
            wakimoto_params=args.wakimoto_params, centrality_p=args.centrality_p, gauss_window=args.gauss_window,
            jobs=args.jobs,
        )
    except ValueError as exc:
        parser.error(str(exc))


def cmd_run(args, parser) -> int:
    rc = _run_config(args, parser)
    report = run(rc)
    text = report.dumps(timing=not args.no_timing)
    if rc.output:
        Path(rc.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    for c in report.sorted_checks():
        print(f"{c.status.upper():4} {c.suite}/{c.check_id}", file=sys.stderr)
    s = report.to_json(timing=False)["summary"]
    print(f"{s['passed']}/{s['total']} checks passed", file=sys.stderr)
    return 0 if report.passed else 1


def cmd_export_tables(args, parser) -> int:
    rc = _run_config(args, parser)
    config = rc.algebra_config()
    table = TableCache(None).table(config)
    path = Path(args.out)
    table.save(path)
    again = RelationTable.load(path, config)
    if again.dumps() != table.dumps():
        print(f"round trip of {path} failed", file=sys.stderr)
        return 1
    print(f"wrote {path} ({len(table.window_rules())} rules, fingerprint {table.fingerprint[:24]})", file=sys.stderr)
    return 0


def cmd_show_config(args, parser) -> int:
    rc = _run_config(args, parser)
    cfg = rc.algebra_config()
    cache = TableCache(rc.resolved_cache_dir())
    doc = {
        "run": rc.to_json(),
        "algebra": cfg.to_json(),
        "fingerprint": cfg.fingerprint(),
        "table_fingerprint": cfg.table_fingerprint(),
        "cache_file": str(cache.path(cfg)),
    }
    print(json.dumps(doc, indent=2))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="yangdouble", description="Exact verification engine for the Yangian double DY_h(gl_n).")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    p_run = sub.add_parser("run", help="run verification suites and emit a JSON report")
    _add_config_flags(p_run)
    p_run.add_argument("--output", "-o", default=None, help="report path (default: stdout)")
    p_run.add_argument("--no-timing", action="store_true", help="omit wall times for a deterministic report")
    p_run.set_defaults(func=cmd_run)
    p_exp = sub.add_parser("export-tables", help="derive the relation table and write it in the cache format")
    _add_config_flags(p_exp)
    p_exp.add_argument("--out", required=True)
    p_exp.set_defaults(func=cmd_export_tables)
    p_show = sub.add_parser("show-config", help="print the resolved configuration and cache location")
    _add_config_flags(p_show)
    p_show.set_defaults(func=cmd_show_config)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
