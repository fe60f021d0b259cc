"""Deterministic machine-readable check reports.

status is "pass" exactly when the violation list is empty.  Timing is
measured but never serialized to JSON: reports must be byte-identical
across runs for fixed inputs and seeds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Violation:
    location: str
    residual: str
    message: str

    def to_dict(self):
        return {
            "location": self.location,
            "residual": self.residual,
            "message": self.message,
        }

    @staticmethod
    def from_dict(data):
        return Violation(data["location"], data["residual"], data["message"])


@dataclass
class CheckReport:
    command: str
    violations: list = field(default_factory=list)
    witness: dict | None = None
    info: dict | None = None
    timing_ms: float | None = None

    @property
    def status(self) -> str:
        return "pass" if not self.violations else "fail"

    def add(self, location, residual="", message=""):
        self.violations.append(Violation(location, str(residual), message))

    def merge(self, other: "CheckReport", prefix=""):
        for v in other.violations:
            self.violations.append(
                Violation(prefix + v.location, v.residual, v.message)
            )

    def ok(self) -> bool:
        return not self.violations

    def to_dict(self):
        out = {
            "command": self.command,
            "status": self.status,
            "violations": [v.to_dict() for v in self.violations],
        }
        if self.witness is not None:
            out["witness"] = self.witness
        if self.info is not None:
            out["info"] = self.info
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @staticmethod
    def from_dict(data) -> "CheckReport":
        rep = CheckReport(command=data["command"])
        rep.violations = [Violation.from_dict(v) for v in data["violations"]]
        rep.witness = data.get("witness")
        rep.info = data.get("info")
        return rep

    def text(self) -> str:
        lines = [f"[{self.status.upper()}] {self.command}"]
        for v in self.violations:
            lines.append(f"  at {v.location}: {v.message}")
            if v.residual:
                lines.append(f"    residual: {v.residual}")
        if self.info:
            for k, v in sorted(self.info.items()):
                lines.append(f"  {k}: {v}")
        if self.timing_ms is not None:
            lines.append(f"  ({self.timing_ms:.1f} ms)")
        return "\n".join(lines)
