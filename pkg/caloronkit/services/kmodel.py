"""
Equivalence service for CaloronKit.
Transgression of homotopies of maps, CS-equivalence of maps, string-datum
equivalence of pairs, direct sums and the explicit inverse witness.
"""

from typing import Any, Optional

import numpy as np
import structlog

from ..config import settings
from ..errors import PathError, ShapeMismatchError, UnsupportedDomainError
from ..models.coefficients import transgression_coefficient
from ..models.connection import ConnectionPair
from ..models.forms import GradedScalarForm, MatrixForm, graded_defect
from ..models.group import GroupMap
from ..models.report import EquivalenceReport, ExactnessVerdict
from .calculus import block_sum_forms, d_graded, integrate_fiberwise, is_exact_graded, wedge
from .chernweil import TWO_PI_I, odd_chern_character
from .geometry import trivial_pair
from .lie import block_sum, identity_map, maurer_cartan, pointwise_inverse, rotation_homotopy_map
from .stringforms import string_datum_defect, string_form

logger = structlog.get_logger(__name__)


def _homotopy_axis(G: GroupMap) -> int:
    """The t-axis of a homotopy grid: an interval appended after M."""
    grid = G.grid
    axis = grid.dim - 1
    if grid.distinguished_circle is not None or grid.dim < 2 or grid.axes[axis].kind != "interval":
        raise PathError("Homotopies live on M×[0,1] with t as the last (interval) axis")
    return axis


def twz_transgression(G: GroupMap, cutoff: Optional[int] = None) -> GradedScalarForm:
    """
    Σ_j −j!/(2j)!·(−1/2πi)^{j+1} ∫₀¹ tr((g_t⁻¹∂_t g_t)·(g_t⁻¹d_M g_t)^{2j}) dt.

    Satisfies d(transgression) = Ch_odd(g₁) − Ch_odd(g₀).
    """
    t_axis = _homotopy_axis(G)
    base = G.grid.without_axis(t_axis)
    cutoff = base.dim // 2 if cutoff is None else cutoff
    mc = maurer_cartan(G)
    vertical = MatrixForm.function(G.grid, mc.coeffs[(t_axis,)])
    horizontal = mc.horizontal(t_axis)
    square = wedge(horizontal, horizontal)
    product = vertical
    terms: dict[int, MatrixForm] = {}
    for j in range(cutoff + 1):
        if 2 * j > base.dim:
            break
        if j > 0:
            product = wedge(product, square)
        factor = float(transgression_coefficient(j)) * (-1.0 / TWO_PI_I) ** (j + 1)
        terms[2 * j] = integrate_fiberwise(product.trace(), t_axis) * factor
    return GradedScalarForm(base, "even", terms)


def _verdicts(defect: GradedScalarForm, tol: Optional[float]) -> tuple[str, list[ExactnessVerdict]]:
    try:
        per_degree = is_exact_graded(defect, tol)
    except UnsupportedDomainError:
        per_degree = [ExactnessVerdict("unsupported_domain", k) for k in defect.degree_range()]
        return "unsupported-domain", per_degree
    verdict = "equivalent" if all(v.exact for v in per_degree) else "inequivalent"
    return verdict, per_degree


def _params(grid_shape: tuple[int, ...], cutoff: Optional[int], tol: Optional[float], **extra: Any) -> dict[str, Any]:
    return {
        "grid": list(grid_shape),
        "cutoff": cutoff,
        "exact_tol": settings.EXACT_TOL if tol is None else tol,
        **extra,
    }


def cs_equivalent(
    g0: GroupMap,
    g1: GroupMap,
    G: GroupMap,
    cutoff: Optional[int] = None,
    tol: Optional[float] = None,
) -> EquivalenceReport:
    """
    Decide whether the given homotopy G from g0 to g1 has an exact transgression.

    An inequivalent verdict refers to this homotopy only. The report also carries
    the consistency defect ‖d(transgression) − (Ch_odd(g₁) − Ch_odd(g₀))‖ per degree.

    Raises:
        PathError: G does not start at g0 or end at g1
    """
    t_axis = _homotopy_axis(G)
    base = G.grid.without_axis(t_axis)
    if g0.grid != base or g1.grid != base or g0.rank != G.rank or g1.rank != G.rank:
        raise ShapeMismatchError("Endpoint maps must live on the homotopy's base with its rank")
    for label, g, index in (("start", g0, 0), ("end", g1, -1)):
        mismatch = float(np.max(np.abs(G.slice_values(t_axis, index) - g.values)))
        if mismatch > settings.ENDPOINT_TOL:
            raise PathError(f"Homotopy {label} does not match its endpoint map", defect=mismatch)
    cutoff = base.dim // 2 if cutoff is None else cutoff
    defect = twz_transgression(G, cutoff)
    verdict, per_degree = _verdicts(defect, tol)
    delta = odd_chern_character(g1, cutoff) - odd_chern_character(g0, cutoff)
    consistency = graded_defect(d_graded(defect), delta)
    logger.info("kmodel.cs_equivalent", verdict=verdict, degrees=defect.degrees)
    return EquivalenceReport(verdict, defect, per_degree, _params(base.shape, cutoff, tol), consistency)


def direct_sum(p0: ConnectionPair, p1: ConnectionPair) -> ConnectionPair:
    """Block-diagonal A and Φ; ranks add."""
    if p0.grid != p1.grid:
        raise ShapeMismatchError("Direct sums need pairs on the same grid")
    return ConnectionPair(
        block_sum_forms(p0.connection, p1.connection),
        block_sum_forms(p0.higgs, p1.higgs),
        p0.unitary and p1.unitary,
    )


def stabilize(p: ConnectionPair, rank: int) -> ConnectionPair:
    """p ⊕ (0, 0) up to the given total rank."""
    if rank < p.rank:
        raise ShapeMismatchError("Stabilization cannot lower the rank", rank=rank, current=p.rank)
    if rank == p.rank:
        return p
    return direct_sum(p, trivial_pair(p.grid, rank - p.rank, unitary=p.unitary))


def string_data_equivalent(
    p0: ConnectionPair,
    p1: ConnectionPair,
    cutoff: Optional[int] = None,
    tol: Optional[float] = None,
) -> EquivalenceReport:
    """
    Decide whether S(p0 → p1) along the straight line is exact.

    Pairs of different rank are first stabilized by trivial summands to a
    common rank. Non-torus bases give the unsupported-domain verdict.
    """
    if p0.grid != p1.grid:
        raise ShapeMismatchError("String data must live on the same grid")
    rank = max(p0.rank, p1.rank)
    p0, p1 = stabilize(p0, rank), stabilize(p1, rank)
    defect, per_degree = string_datum_defect(p0, p1, cutoff, tol)
    if any(v.status == "unsupported_domain" for v in per_degree):
        verdict = "unsupported-domain"
    else:
        verdict = "equivalent" if all(v.exact for v in per_degree) else "inequivalent"
    form_cutoff = (defect.grid.dim + 1) // 2
    delta = string_form(p1, form_cutoff) - string_form(p0, form_cutoff)
    consistency = graded_defect(d_graded(defect), delta)
    logger.info("kmodel.string_data_equivalent", verdict=verdict, rank=rank)
    return EquivalenceReport(
        verdict, defect, per_degree, _params(defect.grid.shape, cutoff, tol, aligned_rank=rank), consistency,
    )


def inverse_witness(
    g: GroupMap,
    cutoff: Optional[int] = None,
    samples: int = 33,
) -> tuple[GroupMap, GroupMap, EquivalenceReport]:
    """
    Pointwise inverse of g, the rotation homotopy from g⊕g⁻¹ to the identity
    on M×[0,1], and the CS-equivalence report along it.
    """
    inverse = pointwise_inverse(g)
    homotopy = rotation_homotopy_map(g, samples)
    report = cs_equivalent(block_sum(g, inverse), identity_map(g.grid, 2 * g.rank), homotopy, cutoff)
    return inverse, homotopy, report
