"""Models package for CaloronKit."""

from .grid import Circle, Interval, EulerSphere3, Axis, Grid, make_grid, torus
from .forms import MatrixForm, GradedScalarForm, multi_indices, graded_defect
from .group import GroupMap
from .connection import ConnectionPair, FramedConnection, FormPath, PairPath, path_grid
from .coefficients import StringCoefficients, string_coefficient
from .report import ExactnessVerdict, EquivalenceReport, SuiteRow

__all__ = [
    "Circle", "Interval", "EulerSphere3", "Axis", "Grid", "make_grid", "torus",
    "MatrixForm", "GradedScalarForm", "multi_indices", "graded_defect",
    "GroupMap",
    "ConnectionPair", "FramedConnection", "FormPath", "PairPath", "path_grid",
    "StringCoefficients", "string_coefficient",
    "ExactnessVerdict", "EquivalenceReport", "SuiteRow",
]
