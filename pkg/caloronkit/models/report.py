"""
Report models for CaloronKit.
Exactness verdicts, equivalence reports and verification-suite rows.
"""

from dataclasses import dataclass, field
from typing import Any, Literal, Optional

from .forms import GradedScalarForm, MultiIndex

VerdictStatus = Literal["exact", "not_exact", "not_closed", "unsupported_domain"]
EquivalenceVerdict = Literal["equivalent", "inequivalent", "unsupported-domain"]


@dataclass(frozen=True)
class ExactnessVerdict:
    """
    Outcome of the period test on one homogeneous degree.

    Attributes:
        status: exact, not_exact, not_closed or unsupported_domain
        degree: Degree tested
        closedness: Sup norm of d(a)
        worst_period: Largest period magnitude (None when not computed)
        cycle: Coordinate subtorus realizing the worst period
        scale: max(1, sup norm of a); tolerances are relative to it
    """

    status: VerdictStatus
    degree: int
    closedness: float = 0.0
    worst_period: Optional[float] = None
    cycle: Optional[MultiIndex] = None
    scale: float = 1.0

    @property
    def exact(self) -> bool:
        return self.status == "exact"

    def to_dict(self) -> dict[str, Any]:
        return {
            "degree": self.degree,
            "status": self.status,
            "closedness": self.closedness,
            "worst_period": self.worst_period,
            "cycle": list(self.cycle) if self.cycle is not None else None,
            "scale": self.scale,
        }


@dataclass(frozen=True)
class EquivalenceReport:
    """
    Result of a CS-equivalence or string-datum equivalence decision.

    The verdict is "equivalent" only when every degree of the defect form is
    closed with vanishing periods; "inequivalent" refers to the given
    homotopy or path and is not a statement about all of them.
    """

    verdict: EquivalenceVerdict
    defect: GradedScalarForm
    per_degree: list[ExactnessVerdict]
    params: dict[str, Any] = field(default_factory=dict)
    consistency: dict[int, float] = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.verdict == "equivalent"

    def to_dict(self) -> dict[str, Any]:
        return {
            "verdict": self.verdict,
            "per_degree": [v.to_dict() for v in self.per_degree],
            "consistency": {str(k): v for k, v in self.consistency.items()},
            "params": self.params,
        }


@dataclass(frozen=True)
class SuiteRow:
    """One verified identity: measured defect against its tolerance."""

    name: str
    identity: str
    defect: float
    tolerance: float
    seconds: float = 0.0
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.error is None and self.defect <= self.tolerance

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "identity": self.identity,
            "defect": self.defect,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "seconds": round(self.seconds, 4),
            "error": self.error,
        }
