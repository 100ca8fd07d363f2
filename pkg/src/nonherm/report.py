"""Residual reports shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    name: str
    residual: float
    tolerance: float
    note: str = ""

    @property
    def passed(self) -> bool:
        # NaN residuals never pass
        return self.residual <= self.tolerance


@dataclass
class Report:
    title: str = ""
    checks: list[Check] = field(default_factory=list)

    def add(self, name: str, residual: float, tolerance: float, note: str = "") -> Check:
        check = Check(name, float(residual), float(tolerance), note)
        self.checks.append(check)
        return check

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def worst(self) -> float:
        return max((c.residual for c in self.checks), default=0.0)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def table(self) -> str:
        width = max([len(c.name) for c in self.checks] + [4])
        lines = [f"{'name':<{width}}  {'residual':>10}  {'tolerance':>9}  result"]
        for c in self.checks:
            status = "pass" if c.passed else "FAIL"
            line = f"{c.name:<{width}}  {c.residual:>10.3e}  {c.tolerance:>9.1e}  {status}"
            if c.note:
                line += f"  ({c.note})"
            lines.append(line)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "checks": [
                {
                    "name": c.name,
                    "residual": c.residual,
                    "tolerance": c.tolerance,
                    "passed": c.passed,
                    **({"note": c.note} if c.note else {}),
                }
                for c in self.checks
            ],
        }
