"""Tests for matrix-valued forms and exterior calculus."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from caloronkit.errors import DegreeError, NotClosedError, ShapeMismatchError, UnsupportedDomainError
from caloronkit.models.forms import GradedScalarForm, MatrixForm, multi_indices
from caloronkit.models.grid import Interval, make_grid, torus
from caloronkit.services.calculus import (
    contract, d, d_graded, fiber_integrate, integrate, is_exact, is_exact_graded, periods,
    slice_form, sym_trace, wedge,
)
from caloronkit.services.generator import random_connection


@pytest.fixture
def grid3():
    return torus(8, 8, 8)


@pytest.fixture
def forms(grid3):
    a = random_connection(grid3, 2, seed=1, unitary=False)
    b = random_connection(grid3, 2, seed=2, unitary=False)
    return a, b


def test_multi_indices():
    assert multi_indices(3, 2) == [(0, 1), (0, 2), (1, 2)]
    assert multi_indices(2, 3) == []


def test_coefficient_table_validated(grid3):
    with pytest.raises(ShapeMismatchError):
        MatrixForm(grid3, 1, 1, {(0,): np.zeros(grid3.shape + (1, 1))})


def test_d_squared_vanishes(forms):
    a, _ = forms
    assert d(d(a)).sup_norm() < 1e-10


def test_leibniz_rule(forms):
    a, b = forms
    lhs = d(wedge(a, b))
    rhs = wedge(d(a), b) - wedge(a, d(b))
    assert (lhs - rhs).sup_norm() < 1e-10


def test_wedge_of_scalar_one_forms_anticommutes(grid3):
    a = random_connection(grid3, 1, seed=3).trace()
    b = random_connection(grid3, 1, seed=4).trace()
    assert (wedge(a, b) + wedge(b, a)).sup_norm() < 1e-14


def test_degrees_beyond_dimension_are_empty(forms):
    a, b = forms
    top = wedge(wedge(a, b), a)
    assert top.degree == 3
    assert d(top).coeffs == {}
    assert wedge(top, a).coeffs == {}


def test_contract_signs(grid3):
    volume = wedge(MatrixForm.differential(grid3, 0), MatrixForm.differential(grid3, 1))
    assert_allclose(contract(volume, 0).coeffs[(1,)], 1.0)
    assert_allclose(contract(volume, 1).coeffs[(0,)], -1.0)
    with pytest.raises(DegreeError):
        contract(MatrixForm.zeros(grid3, 0, 1), 0)


def test_slice_form_drops_the_axis(grid3):
    x = grid3.mesh()[2]
    f = MatrixForm.scalar(grid3, 1, {(0,): np.sin(x), (2,): np.ones(grid3.shape)})
    sliced = slice_form(f, 2, 3)
    assert sliced.grid.shape == (8, 8)
    assert_allclose(sliced.coeffs[(0,)][..., 0, 0], np.sin(grid3.axes[2].coords[3]))


def test_fiber_integrate(loop_grid):
    x1 = loop_grid.mesh()[0]
    form = MatrixForm.scalar(loop_grid, 2, {(0, 2): np.cos(x1)})
    result = fiber_integrate(form)
    assert result.degree == 1
    assert_allclose(result.coeffs[(0,)][..., 0, 0], 2 * math.pi * np.cos(loop_grid.base().mesh()[0]), atol=1e-12)
    with pytest.raises(DegreeError):
        fiber_integrate(MatrixForm.zeros(loop_grid, 0, 1))


def test_fiber_integration_commutes_with_d(pair):
    a = pair.connection + MatrixForm.from_components(pair.grid, 1, pair.rank, {(2,): pair.higgs.coeffs[()]})
    assert (fiber_integrate(d(a)) - d(fiber_integrate(a))).sup_norm() < 1e-12


def test_sym_trace_is_graded_symmetric(forms):
    a, b = forms
    assert (sym_trace(2, a, b) + sym_trace(2, b, a)).sup_norm() < 1e-14
    G = d(b)
    assert (sym_trace(2, a, G) - sym_trace(2, G, a)).sup_norm() < 1e-14


def test_sym_trace_normalisation(forms):
    a, _ = forms
    expected = a.trace() * (1 / (2j * math.pi))
    assert (sym_trace(1, a) - expected).sup_norm() < 1e-15
    with pytest.raises(ShapeMismatchError):
        sym_trace(2, a)


def test_sym_trace_of_repeated_argument():
    grid = torus(8, 8, 8, 8)
    a = random_connection(grid, 2, seed=3, unitary=False)
    F = d(a) + wedge(a, a)
    square = wedge(F, F).trace() * (1 / (2j * math.pi) ** 2)
    # four orderings of (F, F) collapse to one product, over (2!)²
    assert (sym_trace(2, F, F) - square * 0.5).sup_norm() < 1e-14


def test_integrate_top_degree():
    grid = torus(8, 8)
    volume = wedge(MatrixForm.differential(grid, 0), MatrixForm.differential(grid, 1))
    assert complex(integrate(volume)[0, 0]) == pytest.approx(4 * math.pi ** 2)
    with pytest.raises(DegreeError):
        integrate(MatrixForm.differential(grid, 0))


def test_exactness_of_differentials():
    grid = torus(16, 16)
    x1, x2 = grid.mesh()
    f = MatrixForm.scalar(grid, 0, {(): np.sin(x1) * np.cos(x2)})
    assert is_exact(d(f)).exact


def test_constant_form_has_period():
    grid = torus(16, 16)
    verdict = is_exact(MatrixForm.differential(grid, 1))
    assert verdict.status == "not_exact"
    assert verdict.worst_period == pytest.approx(2 * math.pi)
    assert verdict.cycle == (1,)


def test_degree_zero_exactness_is_vanishing():
    grid = torus(8, 8)
    assert not is_exact(MatrixForm.scalar(grid, 0, {(): 0.5})).exact
    assert is_exact(MatrixForm.zeros(grid, 0, 1)).exact


def test_non_closed_form():
    grid = torus(16, 16)
    x1 = grid.mesh()[0]
    form = MatrixForm.scalar(grid, 1, {(1,): np.sin(x1)})
    assert is_exact(form).status == "not_closed"
    with pytest.raises(NotClosedError):
        periods(form)


def test_exactness_needs_a_torus():
    grid = make_grid([Interval(9), Interval(9)])
    with pytest.raises(UnsupportedDomainError):
        is_exact(MatrixForm.differential(grid, 0))


def test_graded_exactness_covers_every_degree():
    grid = torus(8, 8)
    form = GradedScalarForm(grid, "even", {0: MatrixForm.zeros(grid, 0, 1)})
    verdicts = is_exact_graded(form)
    assert [v.degree for v in verdicts] == [0, 2]
    assert all(v.exact for v in verdicts)


def test_graded_form_rejects_wrong_parity(base_grid):
    with pytest.raises(DegreeError):
        GradedScalarForm(base_grid, "odd", {2: MatrixForm.zeros(base_grid, 2, 1)})


def test_d_graded_shifts_parity(base_grid):
    x1 = base_grid.mesh()[0]
    f = GradedScalarForm(base_grid, "even", {0: MatrixForm.scalar(base_grid, 0, {(): np.cos(x1)})})
    df = d_graded(f)
    assert df.parity == "odd"
    assert_allclose(df.term(1).coeffs[(0,)][..., 0, 0], -np.sin(x1), atol=1e-12)
