"""Check results and reports."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from typing import Dict, List, Optional


class _Clock:
    elapsed = 0.0


@contextmanager
def timed():
    clock = _Clock()
    start = time.perf_counter()
    try:
        yield clock
    finally:
        clock.elapsed = time.perf_counter() - start


class CheckResult:
    """Outcome of one exact identity check.

    ``residual`` is None for a pass; otherwise it holds the rendered
    nonzero difference, and ``where`` names the offending order or (g, n).
    """

    __slots__ = ("check_id", "anchor", "residual", "where", "elapsed", "orders")

    def __init__(self, check_id: str, anchor: str, residual: Optional[str] = None,
                 where: Optional[str] = None, elapsed: float = 0.0, orders: Optional[str] = None):
        self.check_id = check_id
        self.anchor = anchor
        self.residual = residual
        self.where = where
        self.elapsed = elapsed
        self.orders = orders

    @property
    def verdict(self) -> str:
        return "pass" if self.residual is None else "fail"

    @property
    def passed(self) -> bool:
        return self.residual is None

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self, include_timings: bool = False) -> dict:
        out = {"id": self.check_id, "anchor": self.anchor, "verdict": self.verdict}
        if self.orders is not None:
            out["verified"] = self.orders
        if not self.passed:
            out["where"] = self.where
            out["residual"] = self.residual
        if include_timings:
            out["elapsed"] = round(self.elapsed, 6)
        return out

    def line(self) -> str:
        tail = "" if self.passed else f"  at {self.where}: {self.residual}"
        return f"{self.verdict.upper():4}  {self.check_id}{tail}"

    def __repr__(self) -> str:
        return f"CheckResult({self.check_id!r}, {self.verdict})"


def combine(check_id: str, anchor: str, parts: List[CheckResult], orders: Optional[str] = None) -> CheckResult:
    """Fold sub-results into one; the first failure is reported."""
    elapsed = sum(p.elapsed for p in parts)
    for p in parts:
        if not p.passed:
            return CheckResult(check_id, anchor, p.residual, f"{p.check_id} {p.where or ''}".strip(), elapsed, orders)
    return CheckResult(check_id, anchor, None, None, elapsed, orders)


class Report:
    """Ordered collection of CheckResults with the run parameters."""

    def __init__(self, parameters: Dict[str, object], checks: Optional[List[CheckResult]] = None,
                 skipped: Optional[List[str]] = None):
        self.parameters = dict(parameters)
        self.checks: List[CheckResult] = sorted(checks or [], key=lambda c: c.check_id)
        self.skipped = sorted(skipped or [])

    def add(self, result: CheckResult) -> None:
        self.checks.append(result)
        self.checks.sort(key=lambda c: c.check_id)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> Dict[str, int]:
        n_pass = sum(1 for c in self.checks if c.passed)
        return {"total": len(self.checks), "pass": n_pass, "fail": len(self.checks) - n_pass,
                "skipped": len(self.skipped)}

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self, include_timings: bool = False) -> dict:
        return {
            "parameters": self.parameters,
            "checks": [c.to_dict(include_timings) for c in self.checks],
            "skipped": self.skipped,
            "summary": self.summary(),
        }

    def to_json(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, sort_keys=True)

    def text(self) -> str:
        lines = [c.line() for c in self.checks]
        for s in self.skipped:
            lines.append(f"SKIP  {s}")
        s = self.summary()
        lines.append(f"{s['pass']}/{s['total']} checks passed, {s['fail']} failed, {s['skipped']} skipped")
        return "\n".join(lines)
