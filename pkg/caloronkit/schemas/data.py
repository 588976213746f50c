"""
Pydantic schemas for form, map and pair files.
Complex arrays are stored as separate real and imaginary nested lists.
"""

from typing import Any, Literal, Optional

import numpy as np
from pydantic import BaseModel, field_validator, model_validator

from ..config import settings
from ..models.connection import ConnectionPair
from ..models.forms import GradedScalarForm, MatrixForm
from ..models.grid import Grid
from ..models.group import GroupMap
from .grid import GridSpec


class ComplexArray(BaseModel):
    """Complex array as [re, im] nested lists of equal shape."""

    re: Any
    im: Any

    @model_validator(mode="after")
    def validate_shapes(self) -> "ComplexArray":
        if np.shape(self.re) != np.shape(self.im):
            raise ValueError("Real and imaginary parts must have the same shape")
        return self

    def to_array(self) -> np.ndarray:
        return np.asarray(self.re, dtype=float) + 1j * np.asarray(self.im, dtype=float)

    @classmethod
    def from_array(cls, values: np.ndarray) -> "ComplexArray":
        values = np.asarray(values, dtype=complex)
        return cls(re=values.real.tolist(), im=values.imag.tolist())


class Component(BaseModel):
    """One coefficient of a form: increasing multi-index and its values."""

    index: list[int]
    values: ComplexArray

    @field_validator("index")
    @classmethod
    def validate_index(cls, v: list[int]) -> list[int]:
        """Multi-indices are strictly increasing."""
        if any(b <= a for a, b in zip(v, v[1:])) or any(i < 0 for i in v):
            raise ValueError("Multi-index must be strictly increasing and non-negative")
        return v


def _components(form: MatrixForm) -> list[Component]:
    return [Component(index=list(index), values=ComplexArray.from_array(array))
            for index, array in sorted(form.coeffs.items())]


def _form(grid: Grid, degree: int, rank: int, components: list[Component]) -> MatrixForm:
    return MatrixForm.from_components(
        grid, degree, rank, {tuple(c.index): c.values.to_array() for c in components}
    )


class FormFile(BaseModel):
    """A MatrixForm on a grid."""

    schema_version: str = settings.REPORT_SCHEMA_VERSION
    grid: GridSpec
    degree: int
    rank: int
    components: list[Component]

    @field_validator("degree")
    @classmethod
    def validate_degree(cls, v: int) -> int:
        if v < 0:
            raise ValueError("Degree must be non-negative")
        return v

    @field_validator("rank")
    @classmethod
    def validate_rank(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Rank must be at least 1")
        return v

    def to_form(self) -> MatrixForm:
        return _form(self.grid.to_grid(), self.degree, self.rank, self.components)

    @classmethod
    def from_form(cls, form: MatrixForm) -> "FormFile":
        return cls(grid=GridSpec.from_grid(form.grid), degree=form.degree, rank=form.rank,
                   components=_components(form))


class GroupMapFile(BaseModel):
    """A GroupMap: values of shape grid.shape + (n, n)."""

    schema_version: str = settings.REPORT_SCHEMA_VERSION
    grid: GridSpec
    rank: int
    unitary: bool = False
    based: bool = False
    values: ComplexArray

    @field_validator("rank")
    @classmethod
    def validate_rank(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Rank must be at least 1")
        return v

    def to_map(self) -> GroupMap:
        return GroupMap(self.grid.to_grid(), self.rank, self.values.to_array(),
                        unitary=self.unitary, based=self.based)

    @classmethod
    def from_map(cls, g: GroupMap) -> "GroupMapFile":
        return cls(grid=GridSpec.from_grid(g.grid), rank=g.rank, unitary=g.unitary, based=g.based,
                   values=ComplexArray.from_array(g.values))


class PairFile(BaseModel):
    """A ConnectionPair: the M-components of A and the values of Φ."""

    schema_version: str = settings.REPORT_SCHEMA_VERSION
    grid: GridSpec
    rank: int
    unitary: bool = False
    connection: list[Component]
    higgs: ComplexArray

    @field_validator("grid")
    @classmethod
    def validate_grid(cls, v: GridSpec) -> GridSpec:
        """Pairs live over M×S¹."""
        if v.distinguished_circle is None:
            raise ValueError("Pair files need a grid with a distinguished circle")
        return v

    def to_pair(self) -> ConnectionPair:
        grid = self.grid.to_grid()
        connection = _form(grid, 1, self.rank, self.connection)
        higgs = MatrixForm.function(grid, self.higgs.to_array())
        return ConnectionPair(connection, higgs, self.unitary)

    @classmethod
    def from_pair(cls, p: ConnectionPair) -> "PairFile":
        theta = p.grid.circle_axis
        components = [c for c in _components(p.connection) if c.index != [theta]]
        return cls(grid=GridSpec.from_grid(p.grid), rank=p.rank, unitary=p.unitary,
                   connection=components, higgs=ComplexArray.from_array(p.higgs.coeffs[()]))


class GradedTerm(BaseModel):
    degree: int
    components: list[Component]


class GradedFormFile(BaseModel):
    """A GradedScalarForm: one scalar form per stored degree."""

    schema_version: str = settings.REPORT_SCHEMA_VERSION
    grid: GridSpec
    parity: Literal["even", "odd"]
    quantity: Optional[str] = None
    terms: list[GradedTerm]

    def to_graded(self) -> GradedScalarForm:
        grid = self.grid.to_grid()
        return GradedScalarForm(grid, self.parity, {
            term.degree: _form(grid, term.degree, 1, term.components) for term in self.terms
        })

    @classmethod
    def from_graded(cls, form: GradedScalarForm, quantity: Optional[str] = None) -> "GradedFormFile":
        return cls(grid=GridSpec.from_grid(form.grid), parity=form.parity, quantity=quantity,
                   terms=[GradedTerm(degree=k, components=_components(term)) for k, term in form])
