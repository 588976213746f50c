"""
Lie-group service for CaloronKit.
Maurer-Cartan forms, block sums and inverses of group maps, the rotation
homotopy, matrix exponentials, random smooth maps and holonomy of Higgs loops.
"""

import math
from typing import Optional

import numpy as np
import structlog
from scipy.linalg import expm
from scipy.signal import resample

from ..config import settings
from ..errors import ConfigError, GridError, ShapeMismatchError
from ..models.forms import MatrixForm
from ..models.grid import EulerSphere3, Grid
from ..models.group import GroupMap
from .calculus import block_diagonal
from .generator import homotopy_grid, random_algebra_field

logger = structlog.get_logger(__name__)

MIN_ODE_STEPS = 8


def maurer_cartan(g: GroupMap) -> MatrixForm:
    """
    g⁻¹dg, using analytic tangents where the map carries them.

    For unitary maps each component is projected onto u(n): exp of a
    band-limited field is not band-limited, so the differentiated values
    are anti-Hermitian only to the spectral truncation error.
    """
    inverse = np.linalg.inv(g.values)
    components = {}
    for axis in range(g.grid.dim):
        tangent = g.tangents.get(axis)
        if tangent is None:
            tangent = g.grid.differentiate(g.values, axis)
        component = inverse @ tangent
        if g.unitary:
            component = 0.5 * (component - np.conj(np.swapaxes(component, -1, -2)))
        components[(axis,)] = component
    return MatrixForm.from_components(g.grid, 1, g.rank, components)


def identity_map(grid: Grid, rank: int) -> GroupMap:
    values = np.broadcast_to(np.eye(rank, dtype=complex), grid.shape + (rank, rank)).copy()
    return GroupMap(grid, rank, values, unitary=True, based=grid.distinguished_circle is not None)


def block_sum(g: GroupMap, h: GroupMap) -> GroupMap:
    """Pointwise g ⊕ h."""
    if g.grid != h.grid:
        raise ShapeMismatchError("Block sums need maps on the same grid")
    tangents = {}
    for axis in set(g.tangents) & set(h.tangents):
        tangents[axis] = block_diagonal(g.tangents[axis], h.tangents[axis])
    return GroupMap(
        g.grid, g.rank + h.rank, block_diagonal(g.values, h.values),
        unitary=g.unitary and h.unitary, based=g.based and h.based, tangents=tangents,
    )


def pointwise_inverse(g: GroupMap) -> GroupMap:
    inverse = np.linalg.inv(g.values)
    tangents = {axis: -inverse @ tangent @ inverse for axis, tangent in g.tangents.items()}
    return GroupMap(g.grid, g.rank, inverse, unitary=g.unitary, based=g.based, tangents=tangents)


def matrix_exp(X: np.ndarray) -> np.ndarray:
    """Matrix exponential (scaling and squaring with Padé), batched over leading axes."""
    return expm(np.asarray(X, dtype=complex))


def _rotation(n: int, t: float) -> tuple[np.ndarray, np.ndarray]:
    """R_t and J = dR/dt at 0 for the 2×2-block rotation of C^{2n}."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    generator = np.block([[zero, -eye], [eye, zero]])
    rotation = np.block([[math.cos(t) * eye, -math.sin(t) * eye], [math.sin(t) * eye, math.cos(t) * eye]])
    return rotation, generator


def _rotation_parts(g: GroupMap, t: float) -> tuple[np.ndarray, np.ndarray]:
    """X_t = diag(g,1)·R_t·diag(1,g⁻¹)·R_{−t} and its t-derivative."""
    n = g.rank
    inverse = np.linalg.inv(g.values)
    ones = np.broadcast_to(np.eye(n, dtype=complex), g.values.shape)
    left = block_diagonal(g.values, ones)
    right = block_diagonal(ones, inverse)
    rotation, generator = _rotation(n, t)
    back, _ = _rotation(n, -t)
    values = left @ rotation @ right @ back
    derivative = left @ generator @ rotation @ right @ back - left @ rotation @ right @ generator @ back
    return values, derivative


def rotation_homotopy(g: GroupMap, t: float) -> GroupMap:
    """
    The rotation homotopy from g⊕g⁻¹ (t = 0) to the identity (t = π/2).

    Both endpoints are produced in closed form.
    """
    if not 0.0 <= t <= math.pi / 2:
        raise ConfigError("Rotation parameter must lie in [0, π/2]", t=t)
    if t == 0.0:
        return block_sum(g, pointwise_inverse(g))
    if t == math.pi / 2:
        return identity_map(g.grid, 2 * g.rank)
    values, _ = _rotation_parts(g, t)
    return GroupMap(g.grid, 2 * g.rank, values, unitary=g.unitary)


def rotation_homotopy_map(g: GroupMap, samples: int = 33) -> GroupMap:
    """
    Rotation homotopy as a map on M×[0,1] with t = (π/2)s.

    The s-derivative is attached analytically as a tangent so that the
    Maurer-Cartan form along s is exact to rounding.
    """
    if g.grid.distinguished_circle is not None:
        raise GridError("Homotopies are built over base grids without a distinguished circle")
    grid = homotopy_grid(g.grid, samples)
    s_axis = grid.dim - 1
    n = 2 * g.rank
    values = np.empty(g.grid.shape + (samples, n, n), dtype=complex)
    tangent = np.empty_like(values)
    for k, s in enumerate(grid.axes[s_axis].coords):
        t = 0.5 * math.pi * float(s)
        if k == 0:
            values[..., k, :, :] = rotation_homotopy(g, 0.0).values
        elif k == samples - 1:
            values[..., k, :, :] = np.eye(n)
        else:
            values[..., k, :, :] = _rotation_parts(g, t)[0]
        tangent[..., k, :, :] = 0.5 * math.pi * _rotation_parts(g, t)[1]
    return GroupMap(grid, n, values, unitary=g.unitary, tangents={s_axis: tangent})


def holonomy(
    phi_loop: np.ndarray,
    steps: Optional[int] = None,
    unitary: bool = False,
    period: float = 2 * math.pi,
) -> np.ndarray:
    """
    Solve ∂_θ g = g·Φ(θ), g(0) = I around the loop and return g(period).

    Args:
        phi_loop: Samples of shape (..., N, n, n), θ uniform on [0, period)
        steps: RK4 steps (default: max(ODE_STEPS, N)); at least 8 and 2·steps ≥ N
        unitary: Project onto U(n) by polar decomposition after each step
        period: Loop length

    Returns:
        Array of shape (..., n, n)
    """
    phi_loop = np.asarray(phi_loop, dtype=complex)
    samples = phi_loop.shape[-3]
    steps = max(settings.ODE_STEPS, samples) if steps is None else steps
    if steps < MIN_ODE_STEPS:
        raise ConfigError(f"Holonomy needs at least {MIN_ODE_STEPS} steps", steps=steps)
    if 2 * steps < samples:
        raise ConfigError("Step count does not resolve the sampled loop", steps=steps, samples=samples)
    # values at every full and half step by trigonometric interpolation
    fine = phi_loop if 2 * steps == samples else resample(phi_loop, 2 * steps, axis=-3)
    n = phi_loop.shape[-1]
    g = np.broadcast_to(np.eye(n, dtype=complex), phi_loop.shape[:-3] + (n, n)).copy()
    h = period / steps
    for step in range(steps):
        start = fine[..., 2 * step, :, :]
        middle = fine[..., 2 * step + 1, :, :]
        end = fine[..., (2 * step + 2) % (2 * steps), :, :]
        k1 = g @ start
        k2 = (g + 0.5 * h * k1) @ middle
        k3 = (g + 0.5 * h * k2) @ middle
        k4 = (g + h * k3) @ end
        g = g + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if unitary:
            u, _, vh = np.linalg.svd(g)
            g = u @ vh
    return g


def random_smooth_map(
    grid: Grid,
    rank: int,
    seed: Optional[int] = None,
    band_limit: Optional[int] = None,
    unitary: bool = True,
    based: bool = False,
    amplitude: Optional[float] = None,
    traceless: bool = False,
) -> GroupMap:
    """
    g = exp(X) for a band-limited random X, deterministic in the seed.

    The based variant removes the θ=0 slice of X so that g is the identity
    on that slice.
    """
    seed = settings.SEED if seed is None else seed
    band_limit = settings.BAND_LIMIT if band_limit is None else band_limit
    amplitude = settings.AMPLITUDE if amplitude is None else amplitude
    rng = np.random.default_rng(seed)
    X = random_algebra_field(grid, rank, rng, band_limit, amplitude, anti_hermitian=unitary, traceless=traceless)
    if based:
        axis = grid.circle_axis
        X = X - np.take(X, [0], axis=axis)
    values = matrix_exp(X)
    if based:
        index = [slice(None)] * grid.dim
        index[grid.circle_axis] = 0
        values[tuple(index)] = np.eye(rank)
    logger.debug("lie.random_map", seed=seed, rank=rank, unitary=unitary, based=based)
    return GroupMap(grid, rank, values, unitary=unitary, based=based)


def winding_map(grid: Grid, winding: int, axis: Optional[int] = None) -> GroupMap:
    """Rank-1 map e^{i·k·x} along one circle axis (the distinguished one by default)."""
    if axis is None:
        axis = grid.distinguished_circle if grid.distinguished_circle is not None else 0
    coords = grid.mesh()[axis]
    values = np.exp(1j * winding * coords * (2 * math.pi / grid.axes[axis].length))[..., None, None]
    based = grid.distinguished_circle is not None
    return GroupMap(grid, 1, values, unitary=True, based=based)


def sphere_identity_map(grid: Grid) -> GroupMap:
    """The identity map of SU(2) in the chart coordinates of an EulerSphere3 grid."""
    if len(grid.factors) != 1 or not isinstance(grid.factors[0], EulerSphere3):
        raise GridError("The sphere identity map needs a grid made of one EulerSphere3 factor")
    psi, theta, phi = grid.mesh()
    a = np.cos(theta / 2) * np.exp(0.5j * psi)
    b = np.sin(theta / 2) * np.exp(1j * phi)
    values = np.empty(grid.shape + (2, 2), dtype=complex)
    values[..., 0, 0] = a
    values[..., 0, 1] = -np.conj(b)
    values[..., 1, 0] = b
    values[..., 1, 1] = np.conj(a)
    return GroupMap(grid, 2, values, unitary=True)

