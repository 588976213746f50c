"""
Pydantic schema for a command-line run.
Every run is reproducible from this configuration and its seed.
"""

from typing import Literal, Optional

from pydantic import BaseModel, field_validator

Command = Literal["generate", "compute", "verify"]
Quantity = Literal[
    "chern", "odd-chern", "cs", "string-form", "string-potential",
    "total-string-potential", "tau-hat", "gerbe", "holonomy", "cs-equivalence", "string-equivalence",
]
DataKind = Literal["pair", "map", "based-map", "homotopy", "connection"]


class RunConfig(BaseModel):
    """Validated command-line configuration."""

    command: Command
    grid: Optional[str] = None
    grid_file: Optional[str] = None
    rank: int = 2
    cutoff: Optional[int] = None
    seed: int = 7
    band_limit: int = 1
    amplitude: float = 0.5
    tol: Optional[float] = None
    exact_tol: Optional[float] = None
    ode_steps: Optional[int] = None
    samples: int = 33
    unitary: bool = True
    input: Optional[str] = None
    input2: Optional[str] = None
    out: Optional[str] = None
    suite: Optional[str] = None
    quantity: Optional[Quantity] = None
    algorithm: Optional[str] = None
    kind: Optional[DataKind] = None

    @field_validator("rank", "samples")
    @classmethod
    def validate_positive_int(cls, v: int) -> int:
        if v < 1:
            raise ValueError("Must be at least 1")
        return v

    @field_validator("cutoff", "band_limit", "seed")
    @classmethod
    def validate_non_negative(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 0:
            raise ValueError("Must be non-negative")
        return v

    @field_validator("tol", "exact_tol", "amplitude")
    @classmethod
    def validate_tolerance(cls, v: Optional[float]) -> Optional[float]:
        """Tolerances and amplitudes are strictly positive."""
        if v is not None and v <= 0:
            raise ValueError("Must be strictly positive")
        return v

    @field_validator("ode_steps")
    @classmethod
    def validate_ode_steps(cls, v: Optional[int]) -> Optional[int]:
        if v is not None and v < 8:
            raise ValueError("ode_steps must be at least 8")
        return v
