"""
Pydantic schemas for reports.
Suite reports, equivalence reports and per-degree exactness verdicts.
"""

from typing import Any, Optional

from pydantic import BaseModel, computed_field

from ..config import settings


class VerdictSchema(BaseModel):
    degree: int
    status: str
    closedness: float
    worst_period: Optional[float] = None
    cycle: Optional[list[int]] = None
    scale: float = 1.0


class EquivalenceReportSchema(BaseModel):
    """Equivalence decision with its per-degree evidence."""

    schema_version: str = settings.REPORT_SCHEMA_VERSION
    verdict: str
    per_degree: list[VerdictSchema]
    consistency: dict[str, float] = {}
    params: dict[str, Any] = {}


class SuiteRowSchema(BaseModel):
    name: str
    identity: str
    defect: float
    tolerance: float
    passed: bool
    seconds: float
    error: Optional[str] = None


class SuiteReportSchema(BaseModel):
    """Report of one verify run; embeds the full configuration."""

    schema_version: str = settings.REPORT_SCHEMA_VERSION
    suite: str
    config: dict[str, Any]
    rows: list[SuiteRowSchema]

    @computed_field
    @property
    def passed(self) -> bool:
        """All rows passed."""
        return all(row.passed for row in self.rows)
