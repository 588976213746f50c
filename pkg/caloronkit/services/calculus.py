"""
Exterior calculus service for CaloronKit.
Wedge products, exterior derivative, contraction, slicing, fibre integration,
normalised symmetrised traces, periods and the exactness test.
"""

import math
from collections import defaultdict
from itertools import permutations
from typing import Optional, Sequence

import numpy as np
import structlog

from ..config import settings
from ..errors import DegreeError, GridError, NotClosedError, ShapeMismatchError, UnsupportedDomainError
from ..models.forms import GradedScalarForm, MatrixForm, MultiIndex, multi_indices
from ..models.grid import Grid
from ..models.report import ExactnessVerdict

logger = structlog.get_logger(__name__)


def _merge_sign(first: MultiIndex, second: MultiIndex) -> int:
    """Sign of the permutation sorting first+second (indices assumed disjoint)."""
    inversions = sum(1 for i in first for j in second if i > j)
    return -1 if inversions % 2 else 1


def _check_pair(a: MatrixForm, b: MatrixForm) -> None:
    if a.grid != b.grid:
        raise ShapeMismatchError("Forms live on different grids")
    if a.rank != b.rank:
        raise ShapeMismatchError("Forms have different ranks", ranks=[a.rank, b.rank])


def wedge(a: MatrixForm, b: MatrixForm) -> MatrixForm:
    """
    Wedge product with matrix-product coefficients.

    Coefficient of K is Σ over K = I ⊔ J of sign(I, J)·(a_I @ b_J), accumulated
    in lexicographic (I, J) order.
    """
    _check_pair(a, b)
    grid = a.grid
    degree = a.degree + b.degree
    result = MatrixForm.zeros(grid, degree, a.rank)
    if degree > grid.dim:
        return result
    coeffs = dict(result.coeffs)
    for first, left in a.coeffs.items():
        for second, right in b.coeffs.items():
            if set(first) & set(second):
                continue
            target = tuple(sorted(first + second))
            product = left @ right
            if _merge_sign(first, second) < 0:
                coeffs[target] = coeffs[target] - product
            else:
                coeffs[target] = coeffs[target] + product
    return MatrixForm(grid, degree, a.rank, coeffs)


def d(a: MatrixForm) -> MatrixForm:
    """Exterior derivative; d(f dx^I) = Σ_j ∂_j f dx^j ∧ dx^I."""
    grid = a.grid
    degree = a.degree + 1
    result = MatrixForm.zeros(grid, degree, a.rank)
    if degree > grid.dim:
        return result
    coeffs = dict(result.coeffs)
    for index, array in a.coeffs.items():
        for axis in range(grid.dim):
            if axis in index:
                continue
            target = tuple(sorted(index + (axis,)))
            derivative = grid.differentiate(array, axis)
            if target.index(axis) % 2:
                coeffs[target] = coeffs[target] - derivative
            else:
                coeffs[target] = coeffs[target] + derivative
    return MatrixForm(grid, degree, a.rank, coeffs)


def d_graded(a: GradedScalarForm) -> GradedScalarForm:
    """Degree-by-degree exterior derivative; degrees above the dimension drop out."""
    parity = "odd" if a.parity == "even" else "even"
    terms = {k + 1: d(term) for k, term in a if k + 1 <= a.grid.dim}
    return GradedScalarForm(a.grid, parity, terms)


def contract(a: MatrixForm, axis: int) -> MatrixForm:
    """Interior product with the coordinate field ∂_axis."""
    if a.degree < 1:
        raise DegreeError("Cannot contract a 0-form")
    a.grid.check_axis(axis)
    result = MatrixForm.zeros(a.grid, a.degree - 1, a.rank)
    coeffs = dict(result.coeffs)
    for index, array in a.coeffs.items():
        if axis not in index:
            continue
        target = tuple(i for i in index if i != axis)
        coeffs[target] = -array if index.index(axis) % 2 else array
    return MatrixForm(a.grid, a.degree - 1, a.rank, coeffs)


def _reindex_without(index: MultiIndex, axis: int) -> MultiIndex:
    return tuple(i - (i > axis) for i in index)


def slice_form(a: MatrixForm, axis: int, sample_index: int) -> MatrixForm:
    """Pullback by the slice embedding at one sample of the axis."""
    grid = a.grid
    grid.check_axis(axis)
    if not 0 <= sample_index < grid.shape[axis]:
        raise GridError(f"Sample index {sample_index} out of range on axis {axis}")
    sub = grid.without_axis(axis)
    coeffs = {
        _reindex_without(index, axis): np.take(array, sample_index, axis=axis)
        for index, array in a.coeffs.items() if axis not in index
    }
    return MatrixForm(sub, a.degree, a.rank, coeffs)


def integrate_fiberwise(a: MatrixForm, axis: int) -> MatrixForm:
    """∫ a d(axis) of the components free of the axis, as a form on the remaining grid."""
    grid = a.grid
    grid.check_axis(axis)
    weights = grid.axes[axis].weights
    sub = grid.without_axis(axis)
    coeffs = {
        _reindex_without(index, axis): np.tensordot(weights, array, axes=([0], [axis]))
        for index, array in a.coeffs.items() if axis not in index
    }
    return MatrixForm(sub, a.degree, a.rank, coeffs)


def fiber_integrate(a: MatrixForm) -> MatrixForm:
    """
    Integrate over the distinguished circle.

    With θ the last axis write a = b + c∧dθ; the result is ∫ c dθ. In this
    convention fibre integration commutes with d on periodic fibres.
    """
    grid = a.grid
    axis = grid.circle_axis
    if a.degree < 1:
        raise DegreeError("Fibre integration needs a form of degree at least 1")
    weights = grid.axes[axis].weights
    coeffs = {
        index[:-1]: np.tensordot(weights, array, axes=([0], [axis]))
        for index, array in a.coeffs.items() if index and index[-1] == axis
    }
    return MatrixForm.from_components(grid.base(), a.degree - 1, a.rank, coeffs)


def loop_integrate(a: MatrixForm) -> MatrixForm:
    """∫_{S¹} a dθ of a horizontal form on M×S¹, as a form on M."""
    return integrate_fiberwise(a, a.grid.circle_axis)


def integrate(a: MatrixForm) -> np.ndarray:
    """Integral of a top-degree form; orientation is the coordinate order."""
    if a.degree != a.grid.dim:
        raise DegreeError("Only top-degree forms can be integrated", degree=a.degree, dim=a.grid.dim)
    return a.grid.integrate_values(a.coeffs[tuple(range(a.grid.dim))])


# Pointwise matrix actions

def left_multiply(values: np.ndarray, a: MatrixForm) -> MatrixForm:
    return a.map_coeffs(lambda array: values @ array)


def right_multiply(a: MatrixForm, values: np.ndarray) -> MatrixForm:
    return a.map_coeffs(lambda array: array @ values)


def commutator(a: MatrixForm, values: np.ndarray) -> MatrixForm:
    """[a, Φ] = aΦ − Φa for a 0-form Φ given by its values."""
    return a.map_coeffs(lambda array: array @ values - values @ array)


def conjugate(a: MatrixForm, g: np.ndarray, g_inverse: np.ndarray) -> MatrixForm:
    """Pointwise g⁻¹ a g."""
    return a.map_coeffs(lambda array: g_inverse @ array @ g)


def block_diagonal(first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Per-point block-diagonal matrices."""
    n, m = first.shape[-1], second.shape[-1]
    out = np.zeros(first.shape[:-2] + (n + m, n + m), dtype=complex)
    out[..., :n, :n] = first
    out[..., n:, n:] = second
    return out


def block_sum_forms(a: MatrixForm, b: MatrixForm) -> MatrixForm:
    if a.grid != b.grid or a.degree != b.degree:
        raise ShapeMismatchError("Block sums need forms of equal grid and degree")
    return MatrixForm(a.grid, a.degree, a.rank + b.rank,
                      {index: block_diagonal(array, b.coeffs[index]) for index, array in a.coeffs.items()})


# Invariant polynomials

def _koszul_sign(order: Sequence[int], degrees: Sequence[int]) -> int:
    sign = 1
    for i in range(len(order)):
        for j in range(i + 1, len(order)):
            if order[i] > order[j] and degrees[order[i]] % 2 and degrees[order[j]] % 2:
                sign = -sign
    return sign


def sym_trace(k: int, *forms: MatrixForm) -> MatrixForm:
    """
    Normalised symmetrised trace (1/(k!)²(2πi)^k) Σ_σ ±tr(ω_σ1 ∧ ⋯ ∧ ω_σk).

    Each permutation carries its Koszul sign, so the polynomial is graded
    symmetric in its arguments. Repeated arguments (the same object) are
    multiplied once per distinct ordering, with prefix products memoized.
    """
    if k < 1:
        raise DegreeError("sym_trace needs k ≥ 1")
    if len(forms) != k:
        raise ShapeMismatchError(f"sym_trace expected {k} forms, got {len(forms)}")
    for form in forms[1:]:
        _check_pair(forms[0], form)
    degrees = [form.degree for form in forms]
    grid = forms[0].grid
    total_degree = sum(degrees)
    if total_degree > grid.dim:
        return MatrixForm.zeros(grid, total_degree, 1)

    ids = [id(form) for form in forms]
    weight: dict[tuple[int, ...], int] = defaultdict(int)
    representative: dict[tuple[int, ...], tuple[int, ...]] = {}
    for order in permutations(range(k)):
        key = tuple(ids[i] for i in order)
        weight[key] += _koszul_sign(order, degrees)
        representative.setdefault(key, order)

    prefixes: dict[tuple[int, ...], MatrixForm] = {}

    def product(order: tuple[int, ...]) -> MatrixForm:
        key = tuple(ids[i] for i in order)
        if key not in prefixes:
            prefixes[key] = forms[order[0]] if len(order) == 1 else wedge(product(order[:-1]), forms[order[-1]])
        return prefixes[key]

    result = MatrixForm.zeros(grid, total_degree, 1)
    for key in sorted(weight, key=lambda key: representative[key]):
        count = weight[key]
        if count == 0:
            continue
        result = result + product(representative[key]).trace() * count
    norm = 1.0 / (math.factorial(k) ** 2 * (2j * math.pi) ** k)
    return result * norm


# Periods and exactness

def _require_torus(grid: Grid) -> None:
    if not grid.is_torus:
        raise UnsupportedDomainError("Periods are only defined on torus grids", shape=list(grid.shape))


def _scalar(a: MatrixForm) -> None:
    if a.rank != 1:
        raise ShapeMismatchError("Expected a scalar form", rank=a.rank)


def periods(a: MatrixForm, tol: Optional[float] = None) -> list[tuple[MultiIndex, complex]]:
    """
    Integrals over the coordinate subtori through the base point.

    Raises:
        UnsupportedDomainError: Grid is not a torus
        NotClosedError: d(a) exceeds tol·max(1, ‖a‖∞)
    """
    _scalar(a)
    grid = a.grid
    _require_torus(grid)
    tol = settings.EXACT_TOL if tol is None else tol
    scale = max(1.0, a.sup_norm())
    closedness = d(a).sup_norm()
    if closedness > tol * scale:
        raise NotClosedError("Form is not closed", closedness=closedness, scale=scale)
    return _raw_periods(a)


def _raw_periods(a: MatrixForm) -> list[tuple[MultiIndex, complex]]:
    grid = a.grid
    result = []
    for cycle in multi_indices(grid.dim, a.degree):
        values = a.coeffs[cycle][..., 0, 0]
        for axis in reversed(range(grid.dim)):
            if axis in cycle:
                values = np.tensordot(grid.axes[axis].weights, values, axes=([0], [axis]))
            else:
                values = np.take(values, 0, axis=axis)
        result.append((cycle, complex(values)))
    return result


def is_exact(a: MatrixForm, tol: Optional[float] = None) -> ExactnessVerdict:
    """
    Decide exactness of a homogeneous scalar form on a torus.

    Exact iff ‖da‖∞ and every period are at most tol·scale, scale = max(1, ‖a‖∞).
    """
    _scalar(a)
    _require_torus(a.grid)
    tol = settings.EXACT_TOL if tol is None else tol
    scale = max(1.0, a.sup_norm())
    closedness = d(a).sup_norm()
    if closedness > tol * scale:
        return ExactnessVerdict("not_closed", a.degree, closedness=closedness, scale=scale)
    worst, cycle = 0.0, None
    for index, value in _raw_periods(a):
        if abs(value) >= worst:
            worst, cycle = abs(value), index
    status = "exact" if worst <= tol * scale else "not_exact"
    return ExactnessVerdict(status, a.degree, closedness=closedness, worst_period=worst, cycle=cycle, scale=scale)


def is_exact_graded(a: GradedScalarForm, tol: Optional[float] = None) -> list[ExactnessVerdict]:
    """is_exact degree by degree over every representable degree of the parity."""
    verdicts = [is_exact(a.term(k), tol) for k in a.degree_range()]
    logger.debug("exactness.checked", statuses=[v.status for v in verdicts])
    return verdicts
