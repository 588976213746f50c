"""
Grid model for CaloronKit.
Discretized product manifolds built from circle and interval factors plus an
optional Euler-angle chart of the 3-sphere.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Optional, Sequence, Union

import numpy as np
from scipy import fft
from scipy.integrate import romb

from ..errors import GridError, ShapeMismatchError

MIN_SAMPLES = 8


@dataclass(frozen=True)
class Circle:
    """Periodic factor sampled at θ_k = period·k/n (right endpoint excluded)."""

    n: int
    period: float = 2 * math.pi
    label: str = "theta"


@dataclass(frozen=True)
class Interval:
    """Closed uniform sampling of [a, b], both endpoints included."""

    n: int
    a: float = 0.0
    b: float = 1.0
    label: str = "t"


@dataclass(frozen=True)
class EulerSphere3:
    """
    Chart of S³ = SU(2) by three angles (ψ, θ, φ).

    The chart point is g = [[a, −b̄], [b, ā]] with a = cos(θ/2)e^{iψ/2} and
    b = sin(θ/2)e^{iφ}, ψ ∈ [0, 4π), θ ∈ [0, π], φ ∈ [0, 2π). Both ψ and φ are
    periodic, the chart covers S³ once, and the round metric has density
    sin θ / 8, total volume 2π². Orientation is the order (ψ, θ, φ); with it
    tr((g⁻¹dg)³) = (3/2) sin θ dψ∧dθ∧dφ for the identity map, so the odd
    Chern form integrates to ∫ (1/24π²) tr((g⁻¹dg)³) = +1.
    """

    n_psi: int
    n_theta: int
    n_phi: int


Factor = Union[Circle, Interval, EulerSphere3]


@dataclass(frozen=True, eq=False)
class Axis:
    """One sampled coordinate direction with its quadrature and stencil."""

    kind: Literal["circle", "interval"]
    n: int
    start: float
    stop: float
    label: str
    coords: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)
    stencil: np.ndarray = field(repr=False)

    @property
    def length(self) -> float:
        return self.stop - self.start


def fourier_stencil(n: int, period: float) -> np.ndarray:
    """Dense spectral differentiation matrix on n periodic samples."""
    k = fft.fftfreq(n, d=1.0 / n)
    col = 1j * k
    if n % 2 == 0:
        col[n // 2] = 0.0
    dmat = fft.ifft(col * fft.fft(np.eye(n)), axis=-1).T.real
    return dmat * (2 * math.pi / period)


def interval_stencil(n: int, h: float) -> np.ndarray:
    """Fourth-order central differences with fourth-order one-sided closures."""
    dmat = np.zeros((n, n))
    interior = np.array([1.0, -8.0, 0.0, 8.0, -1.0])
    for i in range(2, n - 2):
        dmat[i, i - 2:i + 3] = interior
    first = np.array([-25.0, 48.0, -36.0, 16.0, -3.0])
    second = np.array([-3.0, -10.0, 18.0, -6.0, 1.0])
    dmat[0, :5] = first
    dmat[1, :5] = second
    dmat[-1, -5:] = -first[::-1]
    dmat[-2, -5:] = -second[::-1]
    return dmat / (12.0 * h)


def interval_weights(n: int, h: float) -> np.ndarray:
    """
    Quadrature weights on closed uniform samples.

    Romberg weights when n−1 is a power of two (exact to degree 2k+1 with
    n = 2^k + 1), otherwise the Gregory-corrected trapezoid rule (exact on cubics).
    """
    if (n - 1) & (n - 2) == 0:
        return romb(np.eye(n), dx=h, axis=0)
    weights = np.full(n, h)
    correction = np.array([3 / 8, 7 / 6, 23 / 24]) * h
    weights[:3] = correction
    weights[-3:] = correction[::-1]
    return weights


def _circle_axis(n: int, period: float, label: str) -> Axis:
    coords = period * np.arange(n) / n
    return Axis(
        kind="circle", n=n, start=0.0, stop=period, label=label,
        coords=coords, weights=np.full(n, period / n),
        stencil=fourier_stencil(n, period),
    )


def _interval_axis(n: int, a: float, b: float, label: str) -> Axis:
    h = (b - a) / (n - 1)
    coords = np.linspace(a, b, n)
    return Axis(
        kind="interval", n=n, start=a, stop=b, label=label,
        coords=coords, weights=interval_weights(n, h),
        stencil=interval_stencil(n, h),
    )


def _factor_axes(factor: Factor) -> list[Axis]:
    if isinstance(factor, Circle):
        return [_circle_axis(factor.n, factor.period, factor.label)]
    if isinstance(factor, Interval):
        if not factor.b > factor.a:
            raise GridError("Interval endpoints must satisfy a < b", a=factor.a, b=factor.b)
        return [_interval_axis(factor.n, factor.a, factor.b, factor.label)]
    if isinstance(factor, EulerSphere3):
        return [
            _circle_axis(factor.n_psi, 4 * math.pi, "psi"),
            _interval_axis(factor.n_theta, 0.0, math.pi, "sphere_theta"),
            _circle_axis(factor.n_phi, 2 * math.pi, "phi"),
        ]
    raise GridError(f"Unknown factor type: {type(factor).__name__}")


def _sample_counts(factor: Factor) -> tuple[int, ...]:
    if isinstance(factor, EulerSphere3):
        return (factor.n_psi, factor.n_theta, factor.n_phi)
    return (factor.n,)


@dataclass(frozen=True)
class Grid:
    """
    Discretized product manifold.

    Attributes:
        factors: Ordered factor descriptors
        distinguished_circle: Axis index of the loop direction θ (always last) or None
        axes: One Axis per coordinate direction (a 3-sphere chart contributes three)
    """

    factors: tuple[Factor, ...]
    distinguished_circle: Optional[int] = None
    axes: tuple[Axis, ...] = field(default=(), compare=False, repr=False)

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(axis.n for axis in self.axes)

    @property
    def size(self) -> int:
        return math.prod(self.shape)

    @property
    def is_torus(self) -> bool:
        """All factors are plain circles."""
        return all(isinstance(factor, Circle) for factor in self.factors)

    @property
    def has_sphere(self) -> bool:
        return any(isinstance(factor, EulerSphere3) for factor in self.factors)

    @property
    def circle_axis(self) -> int:
        """Index of the distinguished circle."""
        if self.distinguished_circle is None:
            raise GridError("Grid has no distinguished circle")
        return self.distinguished_circle

    def check_axis(self, axis: int) -> int:
        if not 0 <= axis < self.dim:
            raise GridError(f"Axis {axis} out of range for a {self.dim}-dimensional grid")
        return axis

    def check_field(self, values: np.ndarray) -> None:
        if values.shape[:self.dim] != self.shape:
            raise ShapeMismatchError(
                "Field shape does not match grid",
                field_shape=list(values.shape), grid_shape=list(self.shape),
            )

    def differentiate(self, values: np.ndarray, axis: int) -> np.ndarray:
        """Apply the axis stencil to a per-point field; trailing dimensions are carried along."""
        self.check_axis(axis)
        self.check_field(values)
        moved = np.tensordot(self.axes[axis].stencil, values, axes=([1], [axis]))
        return np.moveaxis(moved, 0, axis)

    @cached_property
    def weights(self) -> np.ndarray:
        """Product of coordinate quadrature weights, shaped like the grid."""
        total = np.ones(())
        for axis in self.axes:
            total = np.multiply.outer(total, axis.weights)
        return total

    @cached_property
    def volume_weights(self) -> np.ndarray:
        """Metric measure: coordinate weights, sin θ / 8 weighted on the sphere chart."""
        weights = self.weights.copy()
        offset = 0
        for factor in self.factors:
            if isinstance(factor, EulerSphere3):
                sin_theta = np.sin(self.axes[offset + 1].coords) / 8.0
                shape = [1] * self.dim
                shape[offset + 1] = factor.n_theta
                weights = weights * sin_theta.reshape(shape)
                block = tuple(range(offset, offset + 3))
                sphere_total = weights.sum(axis=block, keepdims=True)
                others = np.delete(np.arange(self.dim), block)
                # rescale the sphere block to the exact volume 2π²
                raw = float(sphere_total.sum() / np.prod([self.axes[i].weights.sum() for i in others]))
                weights = weights * (2 * math.pi ** 2 / raw)
            offset += len(_sample_counts(factor))
        return weights

    @property
    def volume(self) -> float:
        return float(self.volume_weights.sum())

    def mesh(self) -> tuple[np.ndarray, ...]:
        """Coordinate arrays of grid shape (ij indexing)."""
        return tuple(np.meshgrid(*[axis.coords for axis in self.axes], indexing="ij"))

    def integrate_values(self, values: np.ndarray) -> np.ndarray:
        """Weighted sum over all grid points; trailing dimensions kept."""
        self.check_field(values)
        flat = values.reshape((self.size,) + values.shape[self.dim:])
        return np.tensordot(self.weights.reshape(self.size), flat, axes=(0, 0))

    def without_axis(self, axis: int) -> "Grid":
        """Grid with one circle or interval axis removed."""
        self.check_axis(axis)
        factors = list(self.factors)
        index = self._factor_of_axis(axis)
        if isinstance(factors[index], EulerSphere3):
            raise GridError("Cannot remove a single axis of the 3-sphere chart")
        del factors[index]
        distinguished = self.distinguished_circle
        if distinguished is not None:
            distinguished = None if distinguished == axis else distinguished - (distinguished > axis)
        return make_grid(factors, distinguished)

    def base(self) -> "Grid":
        """The grid M for M×S¹ (distinguished circle removed)."""
        return self.without_axis(self.circle_axis)

    def with_interval(self, position: int, n: int, a: float = 0.0, b: float = 1.0) -> "Grid":
        """Insert an Interval axis at the given axis position."""
        if not 0 <= position <= self.dim:
            raise GridError(f"Insert position {position} out of range")
        factors = list(self.factors)
        index = len(factors)
        for i in range(len(factors)):
            if self._first_axis_of_factor(i) >= position:
                index = i
                break
        factors.insert(index, Interval(n, a, b))
        distinguished = self.distinguished_circle
        if distinguished is not None and distinguished >= position:
            distinguished += 1
        return make_grid(factors, distinguished)

    def _first_axis_of_factor(self, index: int) -> int:
        return sum(len(_sample_counts(f)) for f in self.factors[:index])

    def _factor_of_axis(self, axis: int) -> int:
        start = 0
        for i, factor in enumerate(self.factors):
            width = len(_sample_counts(factor))
            if start <= axis < start + width:
                return i
            start += width
        raise GridError(f"Axis {axis} out of range")

    def __repr__(self) -> str:
        return f"<Grid(shape={self.shape}, distinguished_circle={self.distinguished_circle})>"


def make_grid(factors: Sequence[Factor], distinguished_circle: Optional[int] = None) -> Grid:
    """
    Build a grid from factor descriptors.

    Args:
        factors: Circle, Interval or EulerSphere3 descriptors in axis order
        distinguished_circle: Axis index of the loop direction; must be a circle and last

    Returns:
        Grid with coordinates, weights and stencils materialized

    Raises:
        GridError: Empty factor list, undersampled axis, misplaced distinguished axis
    """
    factors = tuple(factors)
    if not factors:
        raise GridError("A grid needs at least one factor")
    for factor in factors:
        for n in _sample_counts(factor):
            if n < MIN_SAMPLES:
                raise GridError(f"Every axis needs at least {MIN_SAMPLES} samples", samples=n)
    axes = tuple(axis for factor in factors for axis in _factor_axes(factor))
    if distinguished_circle is not None:
        if distinguished_circle != len(axes) - 1:
            raise GridError("The distinguished circle must be the last axis", axis=distinguished_circle)
        if not isinstance(factors[-1], Circle):
            raise GridError("The distinguished axis must be a circle factor", axis=distinguished_circle)
    return Grid(factors=factors, distinguished_circle=distinguished_circle, axes=axes)


def torus(*counts: int, loop: Optional[int] = None) -> Grid:
    """T^d from sample counts; `loop` appends a distinguished circle with that many samples."""
    factors: list[Factor] = [Circle(n, label=f"x{i + 1}") for i, n in enumerate(counts)]
    if loop is None:
        return make_grid(factors)
    factors.append(Circle(loop))
    return make_grid(factors, len(factors) - 1)
