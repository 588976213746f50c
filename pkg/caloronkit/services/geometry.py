"""
Caloron correspondence service for CaloronKit.
Transforms between (connection, Higgs field) pairs and framed connections,
curvature, the Higgs covariant derivative, Higgs holonomy, gauge action and
paths of pairs.
"""

from typing import Optional, Union

import numpy as np
import structlog

from ..config import settings
from ..errors import InvariantError, PathError, ShapeMismatchError
from ..models.connection import ConnectionPair, FormPath, FramedConnection, PairPath, anti_hermitian_defect
from ..models.forms import MatrixForm
from ..models.grid import Grid
from ..models.group import GroupMap
from .calculus import commutator, conjugate, d, wedge
from .lie import holonomy, maurer_cartan

logger = structlog.get_logger(__name__)


def trivial_pair(grid: Grid, rank: int, unitary: bool = True) -> ConnectionPair:
    """The pair (0, 0), i.e. the trivial connection with the trivial Higgs field."""
    return ConnectionPair(MatrixForm.zeros(grid, 1, rank), MatrixForm.zeros(grid, 0, rank), unitary)


def caloron_transform(p: ConnectionPair) -> FramedConnection:
    """a = A + Φ dθ; a pure reshuffle of the coefficient arrays."""
    theta = p.grid.circle_axis
    coeffs = dict(p.connection.coeffs)
    coeffs[(theta,)] = p.higgs.coeffs[()]
    return FramedConnection(MatrixForm(p.grid, 1, p.rank, coeffs), p.unitary)


def inverse_caloron(a: FramedConnection) -> ConnectionPair:
    """A = M-components of a, Φ = dθ-component of a."""
    theta = a.grid.circle_axis
    coeffs = dict(a.form.coeffs)
    higgs = coeffs[(theta,)]
    coeffs[(theta,)] = np.zeros_like(higgs)
    return ConnectionPair(MatrixForm(a.grid, 1, a.rank, coeffs), MatrixForm(a.grid, 0, a.rank, {(): higgs}), a.unitary)


def curvature(a: Union[FramedConnection, MatrixForm]) -> MatrixForm:
    """F = da + a∧a."""
    form = a.form if isinstance(a, FramedConnection) else a
    if form.degree != 1:
        raise ShapeMismatchError("Curvature is defined for 1-forms", degree=form.degree)
    return d(form) + wedge(form, form)


def horizontal_curvature(p: ConnectionPair) -> MatrixForm:
    """F_M(A) = d_M A + A∧A, the components of the curvature along M only."""
    return curvature(p.connection).horizontal(p.grid.circle_axis)


def theta_derivative(form: MatrixForm) -> MatrixForm:
    """Coefficientwise ∂_θ."""
    grid = form.grid
    theta = grid.circle_axis
    return form.map_coeffs(lambda array: grid.differentiate(array, theta))


def higgs_covariant_derivative(p: ConnectionPair) -> MatrixForm:
    """∇Φ = dΦ + [A, Φ] − ∂_θ A along the M-axes."""
    theta = p.grid.circle_axis
    phi = p.higgs.coeffs[()]
    return (d(p.higgs).horizontal(theta)
            + commutator(p.connection, phi)
            - theta_derivative(p.connection))


def higgs_holonomy_map(p: ConnectionPair, steps: Optional[int] = None) -> GroupMap:
    """Holonomy of θ ↦ Φ(m, θ) at every base point m."""
    grid = p.grid
    values = holonomy(p.higgs.coeffs[()], steps=steps, unitary=p.unitary,
                      period=grid.axes[grid.circle_axis].length)
    logger.debug("geometry.holonomy_map", points=grid.base().size, unitary=p.unitary)
    return GroupMap(grid.base(), p.rank, values, unitary=p.unitary)


def gauge_transform(p: ConnectionPair, G: GroupMap) -> ConnectionPair:
    """(A, Φ) ↦ (g⁻¹Ag + g⁻¹d_M g, g⁻¹Φg + g⁻¹∂_θ g) for a based map g on M×S¹."""
    if G.grid != p.grid or G.rank != p.rank:
        raise ShapeMismatchError("Gauge map must match the pair's grid and rank")
    if not G.based:
        raise InvariantError("Gauge transformations of pairs need a based map")
    theta = p.grid.circle_axis
    g = G.values
    g_inverse = np.linalg.inv(g)
    theta_form = maurer_cartan(G)
    connection = conjugate(p.connection, g, g_inverse) + theta_form.horizontal(theta)
    higgs_values = g_inverse @ p.higgs.coeffs[()] @ g + theta_form.coeffs[(theta,)]
    unitary = p.unitary and G.unitary
    return ConnectionPair(connection, MatrixForm.function(p.grid, higgs_values), unitary)


def flat_pair(G: GroupMap) -> ConnectionPair:
    """(g⁻¹d_M g, g⁻¹∂_θ g): the pair whose caloron transform is pure gauge."""
    return gauge_transform(trivial_pair(G.grid, G.rank, unitary=G.unitary), G)


def is_hermitian_compatible(p: ConnectionPair, tol: Optional[float] = None) -> bool:
    """A and Φ anti-Hermitian to tolerance."""
    tol = settings.UNITARY_TOL if tol is None else tol
    return max(anti_hermitian_defect(p.connection), anti_hermitian_defect(p.higgs)) <= tol


def straight_line(p0: ConnectionPair, p1: ConnectionPair) -> PairPath:
    if p0.grid != p1.grid or p0.rank != p1.rank:
        raise PathError("Straight lines need endpoints with the same grid and rank")
    return PairPath("straight", (p0, p1))


def sample_path(path: PairPath, intervals: int) -> PairPath:
    """Materialize intervals+1 uniform samples of a straight path."""
    if path.kind == "sampled":
        return path
    ts = np.linspace(0.0, 1.0, intervals + 1)
    return PairPath("sampled", tuple(path.at(float(t)) for t in ts))


def caloron_path(path: PairPath) -> FormPath:
    """Path of framed connection forms; the caloron transform is linear so lines map to lines."""
    forms = tuple(caloron_transform(pair).form for pair in path.pairs)
    return FormPath(path.kind, forms)


def _stack_forms(forms: list[MatrixForm], grid: Grid, position: int) -> MatrixForm:
    """One form on a grid with an inserted t-axis from per-sample forms (no dt component)."""
    first = forms[0]
    components = {}
    for index in first.coeffs:
        target = tuple(i + (i >= position) for i in index)
        components[target] = np.stack([form.coeffs[index] for form in forms], axis=position)
    return MatrixForm.from_components(grid, first.degree, first.rank, components)


def extrude_pairs(path: PairPath) -> ConnectionPair:
    """
    The pair (△^γ, φ^γ) over (M×[0,1])×S¹ carried by a sampled path.

    The t-axis is inserted just before the distinguished circle.
    """
    if path.kind != "sampled":
        raise PathError("Extrusion needs a sampled path")
    grid = path.grid
    position = grid.circle_axis
    extruded = grid.with_interval(position, len(path.pairs))
    connection = _stack_forms([pair.connection for pair in path.pairs], extruded, position)
    higgs = _stack_forms([pair.higgs for pair in path.pairs], extruded, position)
    return ConnectionPair(connection, higgs, path.unitary)


def extrude_forms(path: FormPath, position: Optional[int] = None) -> MatrixForm:
    """
    The connection ∇^γ on M×[0,1] carried by a sampled path of 1-forms.

    By default the t-axis is appended last (before a distinguished circle if present).
    """
    if path.kind != "sampled":
        raise PathError("Extrusion needs a sampled path")
    grid = path.grid
    if position is None:
        position = grid.dim if grid.distinguished_circle is None else grid.circle_axis
    extruded = grid.with_interval(position, len(path.forms))
    return _stack_forms(list(path.forms), extruded, position)
