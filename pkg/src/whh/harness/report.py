"""Per-check tallies and the versioned JSON report."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

SCHEMA = 1


@dataclass
class InequalityReport:
    check_id: str
    instances: int = 0
    failures: int = 0
    worst_margin: float = math.inf
    tolerance: float = 0.0
    worst_instance: dict = field(default_factory=dict)

    def add(self, margin: float, tol: float, instance: dict):
        margin = float(margin)
        self.instances += 1
        if not margin >= -tol:  # NaN counts as a failure
            self.failures += 1
        if margin < self.worst_margin or math.isnan(margin):
            self.worst_margin = margin
            self.tolerance = float(tol)
            self.worst_instance = dict(instance)

    def ok(self) -> bool:
        return self.failures == 0


class Tally:
    """Ordered collection of :class:`InequalityReport`, keyed by check id."""

    def __init__(self):
        self.reports: dict[str, InequalityReport] = {}

    def add(self, check_id, margin, tol, **instance):
        rep = self.reports.get(check_id)
        if rep is None:
            rep = self.reports[check_id] = InequalityReport(check_id)
        rep.add(margin, tol, instance)

    @property
    def failures(self) -> int:
        return sum(r.failures for r in self.reports.values())

    def __iter__(self):
        return iter(self.reports.values())


def _clean(obj):
    if isinstance(obj, float):
        if math.isinf(obj) or math.isnan(obj):
            return repr(obj)
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "tolist"):  # numpy scalars and arrays
        return _clean(obj.tolist())
    return obj


def build_report(command: str, config: dict, tally: Tally, extra: dict | None = None) -> dict:
    checks = [asdict(r) for r in tally]
    out = {
        "schema": SCHEMA,
        "command": command,
        "config": config,
        "checks": checks,
        "total_instances": sum(r.instances for r in tally),
        "total_failures": tally.failures,
        "status": "pass" if tally.failures == 0 else "fail",
    }
    if extra:
        out.update(extra)
    return _clean(out)


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"
