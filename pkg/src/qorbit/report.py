"""Pass/fail bookkeeping shared by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Case:
    check: str
    passed: bool
    residual: str = ""
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "m": self.params.get("m"),
            "n": self.params.get("n"),
            "check": self.check,
            "status": "pass" if self.passed else "fail",
        }
        extra = {k: v for k, v in self.params.items() if k not in ("m", "n")}
        if extra:
            out["detail"] = {k: extra[k] for k in sorted(extra)}
        if not self.passed and self.residual:
            out["residual"] = self.residual
        return out


@dataclass
class Report:
    suite: str
    cases: list[Case] = field(default_factory=list)

    def add(self, check: str, passed: bool, residual: str = "", **params) -> None:
        self.cases.append(Case(check, bool(passed), residual, params))

    def extend(self, other: "Report", **params) -> None:
        for c in other.cases:
            merged = dict(params)
            merged.update(c.params)
            self.cases.append(Case(c.check, c.passed, c.residual, merged))

    @property
    def passed(self) -> int:
        return sum(c.passed for c in self.cases)

    @property
    def failed(self) -> int:
        return sum(not c.passed for c in self.cases)

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def failures(self) -> list[Case]:
        return [c for c in self.cases if not c.passed]

    def __bool__(self):
        return self.ok

    def summary(self) -> dict:
        return {"passed": self.passed, "failed": self.failed}

    def __str__(self):
        lines = [f"{self.suite}: {self.passed} passed, {self.failed} failed"]
        for c in self.failures():
            lines.append(f"  FAIL {c.check} {c.params} {c.residual}")
        return "\n".join(lines)


VerificationReport = Report
