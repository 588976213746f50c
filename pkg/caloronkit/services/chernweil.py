"""
Chern-Weil service for CaloronKit.
Even and odd Chern character forms, Chern-Simons forms of paths of
connections (direct and slice algorithms) and total Chern-Simons forms.
"""

import math
from typing import Optional, Union

import numpy as np
import structlog
from numpy.polynomial.legendre import leggauss

from ..config import settings
from ..errors import GridError, PathError
from ..models.coefficients import StringCoefficients, odd_chern_coefficient
from ..models.connection import FormPath, path_grid
from ..models.forms import GradedScalarForm, MatrixForm
from ..models.grid import Grid
from ..models.group import GroupMap
from .calculus import contract, integrate_fiberwise, sym_trace, wedge
from .geometry import curvature, extrude_forms
from .lie import maurer_cartan

logger = structlog.get_logger(__name__)

TWO_PI_I = 2j * math.pi


def default_cutoff(grid: Grid) -> int:
    return (grid.dim + 1) // 2


def chern_character(a: MatrixForm, cutoff: Optional[int] = None) -> GradedScalarForm:
    """Σ_j (1/j!)(1/2πi)^j tr(F^j); the degree-0 term is the rank."""
    grid = a.grid
    cutoff = default_cutoff(grid) if cutoff is None else cutoff
    terms = {0: MatrixForm.scalar(grid, 0, {(): np.full(grid.shape, float(a.rank))})}
    F = curvature(a)
    power = None
    for j in range(1, cutoff + 1):
        if 2 * j > grid.dim:
            break
        power = F if power is None else wedge(power, F)
        terms[2 * j] = power.trace() * (1.0 / (math.factorial(j) * TWO_PI_I ** j))
    return GradedScalarForm(grid, "even", terms)


def odd_chern_from_form(theta: MatrixForm, cutoff: Optional[int] = None) -> GradedScalarForm:
    """Σ_j −j!/(2j+1)!·(−1/2πi)^{j+1} tr(Θ^{2j+1}) for a flat Lie-algebra valued Θ."""
    grid = theta.grid
    cutoff = default_cutoff(grid) if cutoff is None else cutoff
    square = wedge(theta, theta)
    power = theta
    terms = {}
    for j in range(cutoff + 1):
        if 2 * j + 1 > grid.dim:
            break
        if j > 0:
            power = wedge(power, square)
        terms[2 * j + 1] = power.trace() * (float(odd_chern_coefficient(j)) * (-1.0 / TWO_PI_I) ** (j + 1))
    return GradedScalarForm(grid, "odd", terms)


def odd_chern_character(g: GroupMap, cutoff: Optional[int] = None) -> GradedScalarForm:
    """Odd Chern character of a map into GL(n), built from g⁻¹dg."""
    return odd_chern_from_form(maurer_cartan(g), cutoff)


def _cs_integrand(a_t: MatrixForm, velocity: MatrixForm, cutoff: int) -> dict[int, MatrixForm]:
    """Σ_j 1/(j−1)!·(1/2πi)^j tr(a′ ∧ F_t^{j−1}), by degree."""
    grid = a_t.grid
    F = curvature(a_t)
    terms = {}
    product = velocity
    for j in range(1, cutoff + 1):
        if 2 * j - 1 > grid.dim:
            break
        if j > 1:
            product = wedge(product, F)
        terms[2 * j - 1] = product.trace() * (1.0 / (math.factorial(j - 1) * TWO_PI_I ** j))
    return terms


def _accumulate(total: dict[int, MatrixForm], terms: dict[int, MatrixForm], weight: float) -> None:
    for degree, term in terms.items():
        total[degree] = term * weight if degree not in total else total[degree] + term * weight


def sampled_velocities(forms: list[MatrixForm]) -> list[MatrixForm]:
    """t-derivatives of uniformly sampled forms by the interval stencil."""
    t_grid = path_grid(len(forms))
    first = forms[0]
    derivatives = {
        index: t_grid.differentiate(np.stack([form.coeffs[index] for form in forms]), 0)
        for index in first.coeffs
    }
    return [
        MatrixForm(first.grid, first.degree, first.rank, {index: values[k] for index, values in derivatives.items()})
        for k in range(len(forms))
    ]


def t_quadrature(path_kind: str, count: int, cutoff: int) -> tuple[np.ndarray, np.ndarray]:
    """
    Nodes and weights on [0, 1].

    Straight paths use Gauss-Legendre with cutoff+1 nodes (exact for their
    polynomial integrands); sampled paths use the interval weights of their samples.
    """
    if path_kind == "straight":
        nodes, weights = leggauss(cutoff + 1)
        return 0.5 * (nodes + 1.0), 0.5 * weights
    t_grid = path_grid(count)
    return t_grid.axes[0].coords, t_grid.axes[0].weights


def chern_simons(path: FormPath, cutoff: Optional[int] = None) -> GradedScalarForm:
    """
    Σ_j 1/(j−1)!·(1/2πi)^j ∫₀¹ tr(∇′_t ∧ F_t^{j−1}) dt.

    Satisfies dCS = Ch(∇₁) − Ch(∇₀).
    """
    grid = path.grid
    cutoff = default_cutoff(grid) if cutoff is None else cutoff
    total: dict[int, MatrixForm] = {}
    if path.kind == "straight":
        nodes, weights = t_quadrature("straight", 2, cutoff)
        velocity = path.velocity()
        for t, w in zip(nodes, weights):
            _accumulate(total, _cs_integrand(path.at(float(t)), velocity, cutoff), float(w))
    else:
        _, weights = t_quadrature("sampled", len(path.forms), cutoff)
        for form, velocity, w in zip(path.forms, sampled_velocities(list(path.forms)), weights):
            _accumulate(total, _cs_integrand(form, velocity, cutoff), float(w))
    logger.debug("chernweil.chern_simons", kind=path.kind, degrees=sorted(total))
    return GradedScalarForm(grid, "odd", total)


def chern_simons_via_slices(
    path: Union[FormPath, MatrixForm],
    cutoff: Optional[int] = None,
    t_axis: Optional[int] = None,
) -> GradedScalarForm:
    """
    ∫₀¹ ς_t^* ι_{∂t} Ch(∇^γ) dt for the connection ∇^γ on M×[0,1].

    Accepts a FormPath (straight paths are first sampled with SLICE_SAMPLES
    intervals) or the extruded connection form with its t-axis.
    """
    if isinstance(path, FormPath):
        if path.kind == "straight":
            path = path.sample(settings.SLICE_SAMPLES)
        base = path.grid
        t_axis = base.dim if base.distinguished_circle is None else base.circle_axis
        connection = extrude_forms(path, t_axis)
    else:
        connection = path
        if t_axis is None:
            raise PathError("The t-axis of the extruded connection must be given")
    grid = connection.grid
    grid.check_axis(t_axis)
    if grid.axes[t_axis].kind != "interval":
        raise GridError("The t-axis must be an interval axis", axis=t_axis)
    cutoff = (grid.dim // 2) if cutoff is None else cutoff
    ch = chern_character(connection, cutoff)
    terms = {}
    for degree, term in ch:
        if degree == 0:
            continue
        terms[degree - 1] = integrate_fiberwise(contract(term, t_axis), t_axis)
    return GradedScalarForm(grid.without_axis(t_axis), "odd", terms)


def total_chern_simons(a: MatrixForm, cutoff: Optional[int] = None) -> GradedScalarForm:
    """
    Σ_j Σ_{i<j} c_{i,j} tr̄_j(a, [a,a]^{(i)}, F^{(j−i−1)}), the Chern-Simons form
    of the straight line from the trivial connection to a.
    """
    grid = a.grid
    cutoff = default_cutoff(grid) if cutoff is None else cutoff
    coefficients = StringCoefficients(max(cutoff, 1))
    F = curvature(a)
    bracket = wedge(a, a) * 2.0
    terms: dict[int, MatrixForm] = {}
    for j in range(1, cutoff + 1):
        if 2 * j - 1 > grid.dim:
            break
        term = MatrixForm.zeros(grid, 2 * j - 1, 1)
        for i in range(j):
            args = [a] + [bracket] * i + [F] * (j - i - 1)
            term = term + sym_trace(j, *args) * coefficients[(i, j)]
        terms[2 * j - 1] = term
    return GradedScalarForm(grid, "odd", terms)
