import json
from pathlib import Path

import pytest

from yangdouble import cli
from yangdouble.config import AlgebraConfig
from yangdouble.hc import load_wakimoto_params
from yangdouble.reports import SCHEMA_VERSION, CheckResult, Report
from yangdouble.suites import CACHE_ENV, RunConfig, TableCache, negative_control, run

EXAMPLE = str(Path(__file__).resolve().parent.parent / "configs" / "wakimoto_example.ini")


@pytest.fixture
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv(CACHE_ENV, str(d))
    return d


def run_cli(args, capsys):
    code = cli.main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_report_schema():
    r = Report(config={"n": 2})
    r.add(CheckResult("s", "b", "anchor", True, None, 1.5))
    r.add(CheckResult("s", "a", "anchor", False, {"x": 1}, 0.5))
    doc = r.to_json(timing=False)
    assert doc["schema_version"] == SCHEMA_VERSION == 1
    assert doc["summary"] == {"total": 2, "passed": 1, "failed": 1}
    assert [c["check_id"] for c in doc["checks"]] == ["a", "b"]
    assert all(c["wall_time"] is None for c in doc["checks"])
    assert not r.passed


def test_negative_control_inverts_verdict():
    failing = CheckResult("s", "x", "a", False, "w")
    assert negative_control(failing, "label").passed
    assert not negative_control(CheckResult("s", "x", "a", True), "label").passed


def test_run_config_rejects_unknown_suite():
    with pytest.raises(ValueError):
        RunConfig(suites=("nope",))


def test_run_config_level_default_is_critical():
    assert RunConfig(n=3).level == -3
    assert RunConfig(n=3, c=0).level == 0


def test_cache_dir_resolution(tmp_path, monkeypatch):
    monkeypatch.setenv(CACHE_ENV, str(tmp_path / "env"))
    assert RunConfig().resolved_cache_dir() == tmp_path / "env"
    assert RunConfig(cache_dir=str(tmp_path / "flag")).resolved_cache_dir() == tmp_path / "flag"


def test_table_cache_reuse_and_corruption(tmp_path):
    cfg = AlgebraConfig(n=2, c=-2, normalization="normalized", M=2, W=2)
    first = TableCache(tmp_path)
    t1 = first.table(cfg)
    path = first.path(cfg)
    assert path.exists()
    report = Report(config={})
    again = TableCache(tmp_path, report).table(cfg)
    assert again.dumps() == t1.dumps()
    assert report.warnings == []
    path.write_text("corrupt\n")
    report = Report(config={})
    TableCache(tmp_path, report).table(cfg)
    assert len(report.warnings) == 1 and "rejected" in report.warnings[0]
    assert path.read_text() == t1.dumps()


def test_table_cache_keys_by_level(tmp_path):
    cfg = AlgebraConfig(n=2, c=-2, M=2, W=2)
    cache = TableCache(tmp_path)
    assert cache.path(cfg) != cache.path(cfg.replace(c=0))
    assert cache.path(cfg) == cache.path(cfg.replace(p=9))


def test_run_is_deterministic(cache_dir):
    rc = RunConfig(suites=("fnorm", "rmatrix"), n=2)
    a = run(rc).dumps(timing=False)
    b = run(rc).dumps(timing=False)
    assert a == b


def test_cli_run_small(cache_dir, tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, err = run_cli(["run", "--suites", "fnorm,relations", "--M", "2", "--W", "2", "-o", str(out),
                            "--no-timing"], capsys)
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["schema_version"] == 1
    assert doc["summary"]["failed"] == 0
    assert "PASS fnorm/" in err
    assert list(cache_dir.glob("relations-*.txt"))


def test_cli_run_empty(cache_dir, capsys):
    code, out, err = run_cli(["run", "--suites", ""], capsys)
    assert code == 0
    assert json.loads(out)["summary"]["total"] == 0


def test_cli_bad_suite(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", "--suites", "bogus"])
    assert exc.value.code == 2


def test_cli_show_config(cache_dir, capsys):
    code, out, _ = run_cli(["show-config", "--n", "3", "--c", "1/2"], capsys)
    doc = json.loads(out)
    assert code == 0
    assert doc["algebra"]["c"] == "1/2"
    assert doc["cache_file"].startswith(str(cache_dir))
    assert len(doc["table_fingerprint"]) == 64


def test_cli_export_tables(tmp_path, capsys):
    out = tmp_path / "t.txt"
    code, _, err = run_cli(["export-tables", "--M", "2", "--out", str(out)], capsys)
    assert code == 0
    assert "630 rules" in err
    assert out.read_text().splitlines()[4] == "rules 630"


def test_cli_wakimoto_file(cache_dir, tmp_path, capsys):
    out = tmp_path / "w.json"
    code, _, err = run_cli(["run", "--suites", "wakimoto", "--wakimoto-params", EXAMPLE, "-o", str(out)], capsys)
    assert code == 0
    ids = [c["check_id"] for c in json.loads(out.read_text())["checks"]]
    assert "wakimoto-k1-n2-file" in ids and "wakimoto-chi-k2-n2-file" in ids


def test_example_config_loads():
    p = load_wakimoto_params(EXAMPLE)
    assert p.n == 2 and p.length == 3
