"""
Pydantic schemas for grid descriptors.
Handles validation and serialization of grids in data files and on the command line.
"""

import math
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator, model_validator

from ..errors import GridError
from ..models.grid import MIN_SAMPLES, Circle, EulerSphere3, Grid, Interval, make_grid


def _check_samples(v: int) -> int:
    if v < MIN_SAMPLES:
        raise ValueError(f"Every axis needs at least {MIN_SAMPLES} samples")
    return v


class CircleSpec(BaseModel):
    """Periodic factor."""

    kind: Literal["circle"] = "circle"
    n: int
    period: float = 2 * math.pi
    label: str = "theta"

    @field_validator("n")
    @classmethod
    def validate_n(cls, v: int) -> int:
        return _check_samples(v)

    @field_validator("period")
    @classmethod
    def validate_period(cls, v: float) -> float:
        """Period must be positive."""
        if v <= 0:
            raise ValueError("Circle period must be positive")
        return v


class IntervalSpec(BaseModel):
    """Closed interval factor [a, b]."""

    kind: Literal["interval"] = "interval"
    n: int
    a: float = 0.0
    b: float = 1.0
    label: str = "t"

    @field_validator("n")
    @classmethod
    def validate_n(cls, v: int) -> int:
        return _check_samples(v)

    @model_validator(mode="after")
    def validate_bounds(self) -> "IntervalSpec":
        if self.b <= self.a:
            raise ValueError("Interval needs a < b")
        return self


class SphereSpec(BaseModel):
    """Euler-angle chart of the 3-sphere."""

    kind: Literal["sphere3"] = "sphere3"
    n_psi: int
    n_theta: int
    n_phi: int

    @field_validator("n_psi", "n_theta", "n_phi")
    @classmethod
    def validate_counts(cls, v: int) -> int:
        return _check_samples(v)


FactorSpec = Annotated[Union[CircleSpec, IntervalSpec, SphereSpec], Field(discriminator="kind")]


class GridSpec(BaseModel):
    """Grid descriptor: ordered factors and the optional distinguished circle axis."""

    factors: list[FactorSpec]
    distinguished_circle: Optional[int] = None

    @field_validator("factors")
    @classmethod
    def validate_factors(cls, v: list) -> list:
        if not v:
            raise ValueError("A grid needs at least one factor")
        return v

    def to_grid(self) -> Grid:
        factors = []
        for spec in self.factors:
            if isinstance(spec, CircleSpec):
                factors.append(Circle(spec.n, spec.period, spec.label))
            elif isinstance(spec, IntervalSpec):
                factors.append(Interval(spec.n, spec.a, spec.b, spec.label))
            else:
                factors.append(EulerSphere3(spec.n_psi, spec.n_theta, spec.n_phi))
        return make_grid(factors, self.distinguished_circle)

    @classmethod
    def from_grid(cls, grid: Grid) -> "GridSpec":
        factors: list = []
        for factor in grid.factors:
            if isinstance(factor, Circle):
                factors.append(CircleSpec(n=factor.n, period=factor.period, label=factor.label))
            elif isinstance(factor, Interval):
                factors.append(IntervalSpec(n=factor.n, a=factor.a, b=factor.b, label=factor.label))
            else:
                factors.append(SphereSpec(n_psi=factor.n_psi, n_theta=factor.n_theta, n_phi=factor.n_phi))
        return cls(factors=factors, distinguished_circle=grid.distinguished_circle)

    @classmethod
    def from_tokens(cls, text: str) -> "GridSpec":
        """
        Parse the command-line form AxBxC.

        Tokens: N is a circle, Ns1 the distinguished circle (last only),
        Ni an interval on [0, 1]; circles are labelled x1, x2, ...
        """
        tokens = [token.strip().lower() for token in text.split("x") if token.strip()]
        if not tokens:
            raise GridError("Empty grid description", grid=text)
        factors: list = []
        distinguished = None
        for position, token in enumerate(tokens):
            try:
                if token.endswith("s1"):
                    if position != len(tokens) - 1:
                        raise GridError("Only the last factor can be the distinguished circle", grid=text)
                    factors.append(CircleSpec(n=int(token[:-2])))
                    distinguished = position
                elif token.endswith("i"):
                    factors.append(IntervalSpec(n=int(token[:-1])))
                else:
                    factors.append(CircleSpec(n=int(token), label=f"x{position + 1}"))
            except ValueError as exc:
                raise GridError(f"Bad grid token '{token}'", grid=text, reason=str(exc)) from exc
        return cls(factors=factors, distinguished_circle=distinguished)
