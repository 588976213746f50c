"""
Group-map model for CaloronKit.
Sampled smooth maps from a grid into GL(n, C) or U(n).
"""

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..config import settings
from ..errors import InvariantError
from .grid import Grid


@dataclass(frozen=True, eq=False)
class GroupMap:
    """
    Per-point invertible n×n matrices.

    Attributes:
        grid: Grid the map is sampled on
        rank: Matrix size n
        values: Array of shape grid.shape + (n, n)
        unitary: Values lie in U(n)
        based: Identity on the θ=0 slice of the distinguished circle
        tangents: Optional analytic derivatives by axis, used instead of the stencils
    """

    grid: Grid
    rank: int
    values: np.ndarray = field(repr=False)
    unitary: bool = False
    based: bool = False
    tangents: Mapping[int, np.ndarray] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=complex)
        object.__setattr__(self, "values", values)
        self.grid.check_field(values)
        if values.shape[-2:] != (self.rank, self.rank):
            raise InvariantError("Group values must be rank×rank matrices", rank=self.rank)
        for axis, tangent in self.tangents.items():
            self.grid.check_axis(axis)
            if tangent.shape != values.shape:
                raise InvariantError("Tangent array must match the values", axis=axis)
        cond = np.linalg.cond(values)
        if not np.all(np.isfinite(cond)):
            raise InvariantError("Group map has singular values")
        if self.unitary:
            defect = unitarity_defect(values)
            if defect > settings.UNITARY_TOL:
                raise InvariantError("Unitary map fails g*g = I", defect=defect)
        if self.based:
            defect = basedness_defect(self.grid, values)
            if defect > settings.BASEDNESS_TOL:
                raise InvariantError("Based map is not the identity at θ=0", defect=defect)

    def slice_values(self, axis: int, index: int) -> np.ndarray:
        return np.take(self.values, index, axis=axis)

    def __repr__(self) -> str:
        return f"<GroupMap(rank={self.rank}, grid={self.grid.shape}, unitary={self.unitary}, based={self.based})>"


def unitarity_defect(values: np.ndarray) -> float:
    n = values.shape[-1]
    product = np.conj(np.swapaxes(values, -1, -2)) @ values
    return float(np.max(np.abs(product - np.eye(n))))


def basedness_defect(grid: Grid, values: np.ndarray) -> float:
    """Distance from the identity on the θ=0 slice."""
    n = values.shape[-1]
    at_zero = np.take(values, 0, axis=grid.circle_axis)
    return float(np.max(np.abs(at_zero - np.eye(n))))
