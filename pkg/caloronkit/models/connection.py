"""
Connection models for CaloronKit.
Trivialized (connection, Higgs field) pairs over M×S¹, framed connections,
and paths of connections or pairs over t ∈ [0, 1].
"""

from dataclasses import dataclass
from typing import Literal, Union

import numpy as np

from ..config import settings
from ..errors import DegreeError, InvariantError, PathError, ShapeMismatchError
from .forms import MatrixForm
from .grid import MIN_SAMPLES, Grid, Interval, make_grid


def anti_hermitian_defect(form: MatrixForm) -> float:
    """Sup norm of a + a* over all coefficients."""
    return (form + form.dagger()).sup_norm()


@dataclass(frozen=True, eq=False)
class ConnectionPair:
    """
    Module connection A and Higgs field Φ over M×S¹ in a trivialization.

    Attributes:
        connection: Degree-1 form with components only along M (its dθ slot is zero)
        higgs: Degree-0 form; Φ = 0 is the trivial Higgs field
        unitary: A and Φ are anti-Hermitian
    """

    connection: MatrixForm
    higgs: MatrixForm
    unitary: bool = False

    def __post_init__(self):
        A, Phi = self.connection, self.higgs
        grid = A.grid
        if grid.distinguished_circle is None:
            raise InvariantError("Connection pairs live on grids with a distinguished circle")
        if A.degree != 1 or Phi.degree != 0:
            raise DegreeError("A must be a 1-form and Φ a 0-form", degrees=[A.degree, Phi.degree])
        if Phi.grid != grid or Phi.rank != A.rank:
            raise ShapeMismatchError("A and Φ must share grid and rank")
        theta = grid.circle_axis
        if np.any(A.coeffs[(theta,)] != 0):
            raise InvariantError("A has a dθ component")
        based = float(np.max(np.abs(np.take(np.stack(list(A.coeffs.values())), 0, axis=theta + 1))))
        if based > settings.BASEDNESS_TOL:
            raise InvariantError("A is not based at θ=0", defect=based)
        if self.unitary:
            defect = max(anti_hermitian_defect(A), anti_hermitian_defect(Phi))
            if defect > settings.UNITARY_TOL:
                raise InvariantError("Unitary pair is not anti-Hermitian", defect=defect)

    @property
    def grid(self) -> Grid:
        return self.connection.grid

    @property
    def rank(self) -> int:
        return self.connection.rank

    def __add__(self, other: "ConnectionPair") -> "ConnectionPair":
        return ConnectionPair(self.connection + other.connection, self.higgs + other.higgs,
                              self.unitary and other.unitary)

    def __sub__(self, other: "ConnectionPair") -> "ConnectionPair":
        return ConnectionPair(self.connection - other.connection, self.higgs - other.higgs,
                              self.unitary and other.unitary)

    def scaled(self, factor: float) -> "ConnectionPair":
        return ConnectionPair(self.connection * factor, self.higgs * factor, self.unitary)

    def __repr__(self) -> str:
        return f"<ConnectionPair(rank={self.rank}, grid={self.grid.shape}, unitary={self.unitary})>"


@dataclass(frozen=True, eq=False)
class FramedConnection:
    """Connection 1-form on M×S¹ whose M-components vanish on the θ=0 slice."""

    form: MatrixForm
    unitary: bool = False

    def __post_init__(self):
        grid = self.form.grid
        if grid.distinguished_circle is None:
            raise InvariantError("Framed connections live on grids with a distinguished circle")
        if self.form.degree != 1:
            raise DegreeError("A framed connection is a 1-form", degree=self.form.degree)
        theta = grid.circle_axis
        framing = max(
            (float(np.max(np.abs(np.take(array, 0, axis=theta))))
             for index, array in self.form.coeffs.items() if index != (theta,)),
            default=0.0,
        )
        if framing > settings.FRAMING_TOL:
            raise InvariantError("Framing violated: M-components nonzero at θ=0", defect=framing)
        if self.unitary and anti_hermitian_defect(self.form) > settings.UNITARY_TOL:
            raise InvariantError("Unitary framed connection is not anti-Hermitian")

    @property
    def grid(self) -> Grid:
        return self.form.grid

    @property
    def rank(self) -> int:
        return self.form.rank


def path_grid(samples: int) -> Grid:
    """Interval grid carrying the t-samples of a sampled path."""
    if samples < 2:
        raise PathError("A sampled path needs at least two samples", samples=samples)
    if samples < MIN_SAMPLES:
        raise PathError(f"A sampled path needs at least {MIN_SAMPLES} samples", samples=samples)
    return make_grid([Interval(samples)])


@dataclass(frozen=True, eq=False)
class FormPath:
    """
    Path of connection 1-forms over t ∈ [0, 1].

    A straight path keeps its two endpoints and is evaluated analytically;
    a sampled path holds uniform samples including both endpoints.
    """

    kind: Literal["straight", "sampled"]
    forms: tuple[MatrixForm, ...]

    def __post_init__(self):
        if self.kind == "straight" and len(self.forms) != 2:
            raise PathError("A straight path has exactly two endpoints")
        if self.kind == "sampled":
            path_grid(len(self.forms))
        first = self.forms[0]
        for form in self.forms:
            if form.degree != 1:
                raise DegreeError("Paths of connections carry 1-forms")
            if form.grid != first.grid or form.rank != first.rank:
                raise PathError("Path entries must share grid and rank")

    @classmethod
    def straight(cls, start: MatrixForm, end: MatrixForm) -> "FormPath":
        return cls("straight", (start, end))

    @classmethod
    def sampled(cls, forms: list[MatrixForm]) -> "FormPath":
        return cls("sampled", tuple(forms))

    @property
    def grid(self) -> Grid:
        return self.forms[0].grid

    @property
    def rank(self) -> int:
        return self.forms[0].rank

    def at(self, t: float) -> MatrixForm:
        if self.kind != "straight":
            raise PathError("Analytic evaluation needs a straight path")
        start, end = self.forms
        return start * (1.0 - t) + end * t

    def velocity(self) -> MatrixForm:
        if self.kind != "straight":
            raise PathError("Constant velocity needs a straight path")
        return self.forms[1] - self.forms[0]

    def sample(self, intervals: int) -> "FormPath":
        """Materialize intervals+1 uniform samples."""
        ts = np.linspace(0.0, 1.0, intervals + 1)
        if self.kind == "straight":
            return FormPath.sampled([self.at(float(t)) for t in ts])
        raise PathError("Only straight paths can be resampled")


@dataclass(frozen=True, eq=False)
class PairPath:
    """Path of ConnectionPairs; straight lines are affine in both A and Φ."""

    kind: Literal["straight", "sampled"]
    pairs: tuple[ConnectionPair, ...]

    def __post_init__(self):
        if self.kind == "straight" and len(self.pairs) != 2:
            raise PathError("A straight path has exactly two endpoints")
        if self.kind == "sampled":
            path_grid(len(self.pairs))
        first = self.pairs[0]
        for pair in self.pairs:
            if pair.grid != first.grid or pair.rank != first.rank:
                raise PathError("Path entries must share grid and rank")

    @property
    def grid(self) -> Grid:
        return self.pairs[0].grid

    @property
    def rank(self) -> int:
        return self.pairs[0].rank

    @property
    def unitary(self) -> bool:
        return all(pair.unitary for pair in self.pairs)

    @property
    def start(self) -> ConnectionPair:
        return self.pairs[0]

    @property
    def end(self) -> ConnectionPair:
        return self.pairs[-1]

    def at(self, t: float) -> ConnectionPair:
        """(1−t)p0 + t p1; reproduces the endpoints exactly at t = 0 and 1."""
        if self.kind != "straight":
            raise PathError("Analytic evaluation needs a straight path")
        p0, p1 = self.pairs
        return ConnectionPair(
            p0.connection * (1.0 - t) + p1.connection * t,
            p0.higgs * (1.0 - t) + p1.higgs * t,
            self.unitary,
        )

    def velocity(self) -> ConnectionPair:
        if self.kind != "straight":
            raise PathError("Constant velocity needs a straight path")
        return self.pairs[1] - self.pairs[0]


Path = Union[FormPath, PairPath]
