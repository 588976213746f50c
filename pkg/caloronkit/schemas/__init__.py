"""Schemas package for CaloronKit."""

from .grid import CircleSpec, IntervalSpec, SphereSpec, GridSpec
from .data import ComplexArray, Component, FormFile, GroupMapFile, PairFile, GradedTerm, GradedFormFile
from .report import VerdictSchema, EquivalenceReportSchema, SuiteRowSchema, SuiteReportSchema
from .config import RunConfig

__all__ = [
    "CircleSpec", "IntervalSpec", "SphereSpec", "GridSpec",
    "ComplexArray", "Component", "FormFile", "GroupMapFile", "PairFile", "GradedTerm", "GradedFormFile",
    "VerdictSchema", "EquivalenceReportSchema", "SuiteRowSchema", "SuiteReportSchema",
    "RunConfig",
]
