"""Check results shared by the verification suites and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    id: str
    ok: bool
    witness: str | None = None
    value: str | None = None
    ms: float = 0.0

    @property
    def status(self) -> str:
        return "pass" if self.ok else "fail"


@dataclass
class CheckReport:
    name: str
    checks: list = field(default_factory=list)

    def add(self, id: str, ok: bool, witness=None, value=None) -> Check:
        c = Check(id, bool(ok), None if ok else str(witness if witness is not None else "violated"),
                  None if value is None else str(value))
        self.checks.append(c)
        return c

    def extend(self, other: "CheckReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(Check(prefix + c.id, c.ok, c.witness, c.value, c.ms))

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def __bool__(self) -> bool:
        return self.passed
