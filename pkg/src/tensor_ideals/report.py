from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Report:
    """Named pass/fail checks plus witnesses for the failures and any payload."""

    checks: dict[str, bool] = field(default_factory=dict)
    failures: dict[str, list[str]] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def record(self, name: str, problems: list[str]) -> None:
        self.checks[name] = not problems
        if problems:
            self.failures[name] = list(problems)

    def check(self, name: str, passed: bool, witness: str | None = None) -> None:
        self.record(name, [] if passed else [witness or "failed"])

    def merge(self, other: "Report", prefix: str = "") -> None:
        for name, passed in other.checks.items():
            self.checks[prefix + name] = passed
            if name in other.failures:
                self.failures[prefix + name] = other.failures[name]

    def __str__(self) -> str:
        lines = []
        for name, passed in self.checks.items():
            lines.append(f"{'PASS' if passed else 'FAIL'} {name}")
            for problem in self.failures.get(name, [])[:10]:
                lines.append(f"    {problem}")
        return "\n".join(lines)
