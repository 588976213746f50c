"""
Deterministic test-data generation for CaloronKit.
Band-limited random Lie-algebra fields, connection pairs and homotopies,
reproducible from (grid, rank, seed, band limit).
"""

from typing import Optional

import numpy as np
import structlog
from scipy.linalg import expm

from ..config import settings
from ..errors import ConfigError
from ..models.connection import ConnectionPair
from ..models.forms import MatrixForm
from ..models.grid import Grid, Interval, make_grid

logger = structlog.get_logger(__name__)


def check_band_limit(grid: Grid, band_limit: int) -> None:
    """Reject band limits at or above the Nyquist frequency of any circle axis."""
    if band_limit < 0:
        raise ConfigError("band_limit must be non-negative", band_limit=band_limit)
    for axis in grid.axes:
        if axis.kind == "circle" and band_limit >= axis.n // 2:
            raise ConfigError(
                "band_limit must stay below the Nyquist frequency",
                band_limit=band_limit, samples=axis.n,
            )


def _axis_basis(grid: Grid, axis_index: int, band_limit: int) -> np.ndarray:
    axis = grid.axes[axis_index]
    if axis.kind == "circle":
        freqs = np.arange(-band_limit, band_limit + 1)
        return np.exp(2j * np.pi * np.outer(axis.coords, freqs) / axis.length)
    s = (axis.coords - axis.start) / axis.length
    return np.cos(np.pi * np.outer(s, np.arange(band_limit + 1))).astype(complex)


def random_algebra_field(
    grid: Grid,
    rank: int,
    rng: np.random.Generator,
    band_limit: int,
    amplitude: float,
    anti_hermitian: bool = False,
    traceless: bool = False,
) -> np.ndarray:
    """
    Band-limited random matrix field of shape grid.shape + (n, n).

    Circle axes get Fourier modes |k| ≤ band_limit, interval axes cosine modes
    of the same count; the entrywise sup is scaled to `amplitude`.
    """
    check_band_limit(grid, band_limit)
    bases = [_axis_basis(grid, i, band_limit) for i in range(grid.dim)]
    modes = tuple(basis.shape[1] for basis in bases) + (rank, rank)
    values = rng.standard_normal(modes) + 1j * rng.standard_normal(modes)
    for axis, basis in enumerate(bases):
        values = np.moveaxis(np.tensordot(basis, values, axes=([1], [axis])), 0, axis)
    if anti_hermitian:
        values = 0.5 * (values - np.conj(np.swapaxes(values, -1, -2)))
    if traceless:
        trace = np.trace(values, axis1=-2, axis2=-1)[..., None, None]
        values = values - trace * np.eye(rank) / rank
    peak = float(np.max(np.abs(values)))
    if peak > 0:
        values = values * (amplitude / peak)
    return values


def _make_based(grid: Grid, values: np.ndarray) -> np.ndarray:
    """Subtract the θ=0 slice so the field vanishes there exactly."""
    axis = grid.circle_axis
    return values - np.take(values, [0], axis=axis)


def random_pair(
    grid: Grid,
    rank: int,
    seed: Optional[int] = None,
    band_limit: Optional[int] = None,
    unitary: bool = True,
    traceless: bool = False,
    amplitude: Optional[float] = None,
) -> ConnectionPair:
    """
    Random based pair (A, Φ) on M×S¹.

    A has components along every M-axis and vanishes on θ=0; Φ is unrestricted.
    """
    seed = settings.SEED if seed is None else seed
    band_limit = settings.BAND_LIMIT if band_limit is None else band_limit
    amplitude = settings.AMPLITUDE if amplitude is None else amplitude
    rng = np.random.default_rng(seed)
    theta = grid.circle_axis
    components = {}
    for axis in range(grid.dim):
        if axis == theta:
            continue
        field = random_algebra_field(grid, rank, rng, band_limit, amplitude, unitary, traceless)
        components[(axis,)] = _make_based(grid, field)
    connection = MatrixForm.from_components(grid, 1, rank, components)
    higgs = MatrixForm.function(
        grid, random_algebra_field(grid, rank, rng, band_limit, amplitude, unitary, traceless)
    )
    logger.debug("generator.pair", seed=seed, rank=rank, shape=list(grid.shape))
    return ConnectionPair(connection, higgs, unitary)


def random_connection(
    grid: Grid,
    rank: int,
    seed: Optional[int] = None,
    band_limit: Optional[int] = None,
    unitary: bool = True,
    amplitude: Optional[float] = None,
) -> MatrixForm:
    """Random band-limited connection 1-form with every component populated."""
    seed = settings.SEED if seed is None else seed
    band_limit = settings.BAND_LIMIT if band_limit is None else band_limit
    amplitude = settings.AMPLITUDE if amplitude is None else amplitude
    rng = np.random.default_rng(seed)
    return MatrixForm.from_components(grid, 1, rank, {
        (axis,): random_algebra_field(grid, rank, rng, band_limit, amplitude, unitary)
        for axis in range(grid.dim)
    })


def homotopy_grid(base: Grid, samples: int) -> Grid:
    """M×[0,1] with the homotopy parameter as the last axis."""
    return make_grid(list(base.factors) + [Interval(samples, label="t")])


def random_homotopy_values(
    base: Grid,
    rank: int,
    samples: int,
    seed: Optional[int] = None,
    band_limit: Optional[int] = None,
    amplitude: Optional[float] = None,
) -> tuple[Grid, np.ndarray]:
    """
    Unitary homotopy G(x, t) = exp(X(x) + t·Y(x)) sampled on M×[0,1].

    Returns the homotopy grid and values of shape (*M, samples, n, n).
    """
    seed = settings.SEED if seed is None else seed
    band_limit = settings.BAND_LIMIT if band_limit is None else band_limit
    amplitude = settings.AMPLITUDE if amplitude is None else amplitude
    rng = np.random.default_rng(seed)
    start = random_algebra_field(base, rank, rng, band_limit, amplitude, anti_hermitian=True)
    direction = random_algebra_field(base, rank, rng, band_limit, amplitude, anti_hermitian=True)
    grid = homotopy_grid(base, samples)
    ts = grid.axes[-1].coords
    exponent = start[..., None, :, :] + ts[:, None, None] * direction[..., None, :, :]
    return grid, expm(exponent)
