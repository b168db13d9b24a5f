"""
Validation reports shared by every validator.
"""

from dataclasses import dataclass
from typing import Iterable, Tuple


@dataclass(frozen=True)
class Violation:
    """A broken rule together with a human-readable witness."""

    rule: str
    witness: str

    def __str__(self) -> str:
        return f"{self.rule}: {self.witness}"


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of a validation; valid exactly when no violation was found."""

    violations: Tuple[Violation, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    @property
    def rules(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(v.rule for v in self.violations))

    @classmethod
    def of(cls, violations: Iterable[Violation]) -> "ValidationReport":
        return cls(tuple(violations))

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        return ValidationReport(self.violations + other.violations)

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "violations": [
                {"rule": v.rule, "witness": v.witness} for v in self.violations
            ],
        }
