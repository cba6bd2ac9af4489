"""Check results and the JSON report document."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class CheckResult:
    suite: str
    check_id: str
    anchor: str
    passed: bool
    witness: Any = None
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def __bool__(self):
        return self.passed

    def to_json(self, timing: bool = True) -> dict:
        return {
            "suite": self.suite,
            "check_id": self.check_id,
            "anchor": self.anchor,
            "status": self.status,
            "witness": jsonable(self.witness),
            "wall_time": round(self.wall_time, 6) if timing else None,
            "details": jsonable(self.details),
        }


@contextmanager
def timed():
    box = {"t": 0.0}
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box["t"] = time.perf_counter() - t0


def jsonable(x):
    """Convert exact values to JSON-friendly data; rationals become decimal
    fraction strings such as ``"-3/4"``."""
    if x is None or isinstance(x, (bool, int, str)):
        return x
    if isinstance(x, float):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return repr(x)


@dataclass
class Report:
    config: dict
    checks: list = field(default_factory=list)
    fingerprints: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)

    def add(self, result: CheckResult):
        self.checks.append(result)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def sorted_checks(self) -> list:
        return sorted(self.checks, key=lambda c: (c.suite, c.check_id))

    def to_json(self, timing: bool = True) -> dict:
        """``timing=False`` nulls the wall times, leaving a document that is a
        deterministic function of the configuration and seed."""
        return {
            "schema_version": SCHEMA_VERSION,
            "config": jsonable(self.config),
            "cache_fingerprints": dict(sorted(self.fingerprints.items())),
            "warnings": list(self.warnings),
            "summary": {
                "total": len(self.checks),
                "passed": sum(c.passed for c in self.checks),
                "failed": sum(not c.passed for c in self.checks),
            },
            "checks": [c.to_json(timing) for c in self.sorted_checks()],
        }

    def dumps(self, timing: bool = True) -> str:
        return json.dumps(self.to_json(timing), indent=2)
