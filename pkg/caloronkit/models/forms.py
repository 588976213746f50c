"""
Form models for CaloronKit.
Matrix-valued differential forms on a Grid and degree-indexed scalar forms.
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterator, Literal, Mapping, Optional

import numpy as np

from ..errors import DegreeError, ShapeMismatchError
from .grid import Grid

MultiIndex = tuple[int, ...]
Parity = Literal["even", "odd"]


def multi_indices(dim: int, degree: int) -> list[MultiIndex]:
    """Strictly increasing multi-indices of a given length, lexicographic order."""
    if degree < 0:
        return []
    return list(combinations(range(dim), degree))


@dataclass(frozen=True, eq=False)
class MatrixForm:
    """
    Degree-p form with n×n complex matrix coefficients.

    Attributes:
        grid: Grid the form lives on
        degree: Form degree p (a form with p > dim has no coefficients)
        rank: Matrix size n (scalar forms have rank 1)
        coeffs: Coefficient array of shape grid.shape + (n, n) per increasing multi-index
    """

    grid: Grid
    degree: int
    rank: int
    coeffs: Mapping[MultiIndex, np.ndarray] = field(repr=False)

    def __post_init__(self):
        if self.degree < 0:
            raise DegreeError("Form degree must be non-negative", degree=self.degree)
        expected = multi_indices(self.grid.dim, self.degree)
        if sorted(self.coeffs) != expected:
            raise ShapeMismatchError(
                "Coefficient table must list every increasing multi-index",
                degree=self.degree, keys=[list(k) for k in self.coeffs],
            )
        shape = self.grid.shape + (self.rank, self.rank)
        for index, array in self.coeffs.items():
            if array.shape != shape:
                raise ShapeMismatchError(
                    f"Coefficient {index} has shape {array.shape}, expected {shape}"
                )

    # Constructors

    @classmethod
    def zeros(cls, grid: Grid, degree: int, rank: int) -> "MatrixForm":
        shape = grid.shape + (rank, rank)
        return cls(grid, degree, rank, {
            index: np.zeros(shape, dtype=complex) for index in multi_indices(grid.dim, degree)
        })

    @classmethod
    def from_components(
        cls, grid: Grid, degree: int, rank: int, components: Mapping[MultiIndex, np.ndarray]
    ) -> "MatrixForm":
        """Build a form from the nonzero components; missing ones are zero."""
        shape = grid.shape + (rank, rank)
        coeffs = {}
        for index in multi_indices(grid.dim, degree):
            if index in components:
                coeffs[index] = np.asarray(components[index], dtype=complex).reshape(shape)
            else:
                coeffs[index] = np.zeros(shape, dtype=complex)
        unknown = set(components) - set(coeffs)
        if unknown:
            raise ShapeMismatchError("Components outside the multi-index table", keys=sorted(unknown))
        return cls(grid, degree, rank, coeffs)

    @classmethod
    def function(cls, grid: Grid, values: np.ndarray) -> "MatrixForm":
        """0-form from per-point matrices of shape grid.shape + (n, n)."""
        values = np.asarray(values, dtype=complex)
        grid.check_field(values)
        return cls(grid, 0, values.shape[-1], {(): values})

    @classmethod
    def scalar(cls, grid: Grid, degree: int, components: Mapping[MultiIndex, np.ndarray]) -> "MatrixForm":
        """Scalar form from per-point values of grid shape (broadcast allowed)."""
        full = {
            index: np.broadcast_to(np.asarray(values, dtype=complex), grid.shape)[..., None, None]
            for index, values in components.items()
        }
        return cls.from_components(grid, degree, 1, full)

    @classmethod
    def differential(cls, grid: Grid, axis: int) -> "MatrixForm":
        """The coordinate 1-form d(axis) as a scalar form."""
        grid.check_axis(axis)
        return cls.scalar(grid, 1, {(axis,): np.ones(grid.shape)})

    # Arithmetic

    def _check_compatible(self, other: "MatrixForm") -> None:
        if other.grid != self.grid or other.rank != self.rank or other.degree != self.degree:
            raise ShapeMismatchError(
                "Forms must share grid, rank and degree",
                degrees=[self.degree, other.degree], ranks=[self.rank, other.rank],
            )

    def map_coeffs(self, fn: Callable[[np.ndarray], np.ndarray], rank: Optional[int] = None) -> "MatrixForm":
        return MatrixForm(self.grid, self.degree, self.rank if rank is None else rank,
                          {index: fn(array) for index, array in self.coeffs.items()})

    def __add__(self, other: "MatrixForm") -> "MatrixForm":
        self._check_compatible(other)
        return MatrixForm(self.grid, self.degree, self.rank,
                          {k: v + other.coeffs[k] for k, v in self.coeffs.items()})

    def __sub__(self, other: "MatrixForm") -> "MatrixForm":
        self._check_compatible(other)
        return MatrixForm(self.grid, self.degree, self.rank,
                          {k: v - other.coeffs[k] for k, v in self.coeffs.items()})

    def __neg__(self) -> "MatrixForm":
        return self.map_coeffs(np.negative)

    def __mul__(self, scalar: complex) -> "MatrixForm":
        return self.map_coeffs(lambda array: array * scalar)

    __rmul__ = __mul__

    def component(self, index: MultiIndex) -> np.ndarray:
        return self.coeffs[tuple(index)]

    def sup_norm(self) -> float:
        """Max absolute entry over all coefficients and points (0 for an empty table)."""
        return max((float(np.max(np.abs(array))) for array in self.coeffs.values()), default=0.0)

    def trace(self) -> "MatrixForm":
        """Pointwise matrix trace as a scalar form."""
        return self.map_coeffs(lambda array: np.trace(array, axis1=-2, axis2=-1)[..., None, None], rank=1)

    def dagger(self) -> "MatrixForm":
        """Pointwise conjugate transpose of the coefficients."""
        return self.map_coeffs(lambda array: np.conj(np.swapaxes(array, -1, -2)))

    def values(self) -> np.ndarray:
        """Scalar coefficient arrays of a rank-1 form, by multi-index."""
        if self.rank != 1:
            raise ShapeMismatchError("values() is only defined for scalar forms", rank=self.rank)
        return np.stack([array[..., 0, 0] for array in self.coeffs.values()]) if self.coeffs else np.zeros(0)

    def horizontal(self, axis: int) -> "MatrixForm":
        """Zero every component whose multi-index contains the axis."""
        return MatrixForm(self.grid, self.degree, self.rank, {
            index: (np.zeros_like(array) if axis in index else array)
            for index, array in self.coeffs.items()
        })

    def __repr__(self) -> str:
        return f"<MatrixForm(degree={self.degree}, rank={self.rank}, grid={self.grid.shape})>"


@dataclass(frozen=True, eq=False)
class GradedScalarForm:
    """
    Inhomogeneous scalar form stored degree by degree.

    Attributes:
        grid: Grid the terms live on
        parity: "even" or "odd"; every stored degree respects it
        terms: Rank-1 MatrixForm per degree (absent degrees are zero)
    """

    grid: Grid
    parity: Parity
    terms: Mapping[int, MatrixForm] = field(default_factory=dict)

    def __post_init__(self):
        want = 0 if self.parity == "even" else 1
        for degree, term in self.terms.items():
            if degree % 2 != want:
                raise DegreeError(f"Degree {degree} does not match parity {self.parity}")
            if degree > self.grid.dim or term.degree != degree or term.rank != 1 or term.grid != self.grid:
                raise DegreeError("Graded term inconsistent with its slot", degree=degree)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    def degree_range(self) -> list[int]:
        """Every degree of this parity representable on the grid."""
        start = 0 if self.parity == "even" else 1
        return list(range(start, self.grid.dim + 1, 2))

    def term(self, degree: int) -> MatrixForm:
        if degree in self.terms:
            return self.terms[degree]
        return MatrixForm.zeros(self.grid, degree, 1)

    def _combine(self, other: "GradedScalarForm", op: Callable[[MatrixForm, MatrixForm], MatrixForm]) -> "GradedScalarForm":
        if other.grid != self.grid or other.parity != self.parity:
            raise ShapeMismatchError("Graded forms must share grid and parity")
        degrees = sorted(set(self.terms) | set(other.terms))
        return GradedScalarForm(self.grid, self.parity, {k: op(self.term(k), other.term(k)) for k in degrees})

    def __add__(self, other: "GradedScalarForm") -> "GradedScalarForm":
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other: "GradedScalarForm") -> "GradedScalarForm":
        return self._combine(other, lambda a, b: a - b)

    def __neg__(self) -> "GradedScalarForm":
        return GradedScalarForm(self.grid, self.parity, {k: -v for k, v in self.terms.items()})

    def __mul__(self, scalar: complex) -> "GradedScalarForm":
        return GradedScalarForm(self.grid, self.parity, {k: v * scalar for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __iter__(self) -> Iterator[tuple[int, MatrixForm]]:
        for degree in self.degrees:
            yield degree, self.terms[degree]

    def sup_norms(self) -> dict[int, float]:
        return {degree: term.sup_norm() for degree, term in self}

    def __repr__(self) -> str:
        return f"<GradedScalarForm(parity={self.parity}, degrees={self.degrees})>"


def graded_defect(a: GradedScalarForm, b: GradedScalarForm) -> dict[int, float]:
    """Per-degree sup norm of a − b."""
    return (a - b).sup_norms()
