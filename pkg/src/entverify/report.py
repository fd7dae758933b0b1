"""Structured pass/fail records produced by the certification routines."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    """One named deviation compared against its tolerance."""

    name: str
    measured: float
    tolerance: float
    passed: bool

    @classmethod
    def from_deviation(cls, name: str, measured: float, tolerance: float) -> "Check":
        measured = float(measured)
        return cls(name=name, measured=measured, tolerance=float(tolerance),
                   passed=measured <= tolerance)

    def to_dict(self) -> dict:
        return {"name": self.name, "measured": self.measured,
                "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class VerificationReport:
    scheme: str
    d: int
    checks: list[Check]
    metadata: dict = field(default_factory=dict)

    @property
    def overall(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "scheme": self.scheme,
            "d": self.d,
            "checks": [c.to_dict() for c in self.checks],
            "overall": self.overall,
            "metadata": dict(self.metadata),
        }
