"""Check records and suite reports with a stable JSON form."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

from drawdown.errors import DomainError

__all__ = ["Check", "SuiteReport", "clean_json", "dumps"]


@dataclass(frozen=True)
class Check:
    """One comparison of a statistic with its threshold.

    ``passed`` is the raw outcome ``statistic < threshold`` (or ``<=`` for
    identities).  A negative control is a deliberately wrong pairing: it is
    in order exactly when it does *not* pass.
    """

    name: str
    kind: str
    statistic: float
    threshold: float
    passed: bool
    n: int | None = None
    negative_control: bool = False
    detail: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.passed != self.negative_control

    def as_dict(self) -> dict[str, Any]:
        d = {
            "name": self.name,
            "kind": self.kind,
            "statistic": self.statistic,
            "threshold": self.threshold,
            "pass": self.passed,
            "n": self.n,
            "negative_control": self.negative_control,
            "ok": self.ok,
        }
        if self.detail:
            d["detail"] = dict(sorted(self.detail.items()))
        return d


@dataclass
class SuiteReport:
    """Outcome of a suite.

    The suite passes when at most ``allowed_failures`` ordinary checks fail
    and every negative control fails.
    """

    suite: str
    config: dict[str, Any]
    checks: list[Check] = field(default_factory=list)
    allowed_failures: int = 0

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.negative_control and not c.passed]

    @property
    def controls_ok(self) -> bool:
        return all(not c.passed for c in self.checks if c.negative_control)

    @property
    def passed(self) -> bool:
        return len(self.failures) <= self.allowed_failures and self.controls_ok

    def as_dict(self) -> dict[str, Any]:
        positive = [c for c in self.checks if not c.negative_control]
        return {
            "suite": self.suite,
            "pass": self.passed,
            "config": self.config,
            "n_checks": len(positive),
            "n_failed": len(self.failures),
            "allowed_failures": self.allowed_failures,
            "n_negative_controls": len(self.checks) - len(positive),
            "negative_controls_ok": self.controls_ok,
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return dumps(self.as_dict())

    def summary_lines(self) -> list[str]:
        lines = []
        for c in self.checks:
            tag = "ok  " if c.ok else "FAIL"
            role = " (control)" if c.negative_control else ""
            lines.append(f"{tag} {c.name}{role}: {c.statistic:.6g} vs {c.threshold:.6g}")
        verdict = "PASS" if self.passed else "FAIL"
        lines.append(
            f"{verdict} {self.suite}: {len(self.failures)} failed of "
            f"{sum(not c.negative_control for c in self.checks)} (allowed {self.allowed_failures})"
        )
        return lines


def clean_json(obj: Any) -> Any:
    """Replace non-finite floats by strings so the output is strict JSON."""
    if isinstance(obj, dict):
        return {str(k): clean_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean_json(v) for v in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        if math.isnan(obj):
            raise DomainError("NaN cannot be serialized")
        return "inf" if obj > 0 else "-inf"
    return obj


def dumps(obj: Any) -> str:
    return json.dumps(clean_json(obj), indent=2, sort_keys=False, allow_nan=False) + "\n"
