"""Tests for string forms, string potentials, transgressed loop forms and the witnesses."""

from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose

from caloronkit.errors import ConfigError, GridError, InvariantError
from caloronkit.models.coefficients import (
    StringCoefficients, odd_chern_coefficient, string_coefficient, transgression_coefficient,
)
from caloronkit.models.connection import ConnectionPair, PairPath
from caloronkit.models.forms import MatrixForm, graded_defect
from caloronkit.models.grid import Circle, Interval, make_grid, torus
from caloronkit.services.calculus import d_graded, is_exact_graded
from caloronkit.services.chernweil import odd_chern_character
from caloronkit.services.generator import random_pair
from caloronkit.services.geometry import flat_pair, gauge_transform, sample_path, straight_line, trivial_pair
from caloronkit.services.kmodel import direct_sum
from caloronkit.services.lie import block_sum, random_smooth_map, winding_map
from caloronkit.services.stringforms import (
    default_profile, gerbe_curving_check, string_form, string_form_cutoff, string_potential,
    string_potential_cutoff, surjectivity_witness, tau_hat_pullback, total_string_potential,
    total_string_potential_via_caloron, universal_string_pullback,
)


def worst(defects):
    return max(defects.values(), default=0.0)


@pytest.fixture
def loop3():
    """T³×S¹; ten points per axis resolve the band-4 products of the degree-2 potential."""
    return torus(10, 10, 10, loop=16)


@pytest.fixture
def witness_grid():
    return make_grid([Interval(9, label="x1"), Interval(9, label="x2"), Circle(16, label="x3"), Circle(32)], 3)


def test_cutoffs():
    base = torus(8, 8, 8)
    assert string_form_cutoff(base) == 2
    assert string_potential_cutoff(base) == 2
    assert string_potential_cutoff(torus(8, 8)) == 2


def test_coefficient_table():
    table = StringCoefficients(3)
    assert table.table[(0, 1)] == 1
    assert table.table[(0, 2)] == 1
    assert table.table[(1, 2)] == Fraction(-1, 6)
    assert table[(1, 2)] == pytest.approx(-1 / 6)
    for j in range(2, 4):
        assert 2 * (2 * j - 1) * string_coefficient(j - 1, j) == -string_coefficient(j - 2, j)
    assert transgression_coefficient(1) == Fraction(-1, 2)
    assert odd_chern_coefficient(1) == Fraction(-1, 6)


def test_coefficient_table_bounds():
    with pytest.raises(ConfigError):
        string_coefficient(2, 2)
    with pytest.raises(ConfigError):
        StringCoefficients(0)


def test_string_form_algorithms_agree(pair):
    s = string_form(pair, 2, "direct")
    assert s.degrees == [1]
    assert worst(graded_defect(s, string_form(pair, 2, "via_caloron"))) < 1e-10


def test_string_form_algorithms_agree_in_degree_three():
    p = random_pair(torus(8, 8, 8, loop=16), 2, seed=5)
    s = string_form(p, 2, "direct")
    assert s.degrees == [1, 3]
    assert worst(graded_defect(s, string_form(p, 2, "via_caloron"))) < 1e-10


def test_string_form_unknown_algorithm(pair):
    with pytest.raises(ConfigError):
        string_form(pair, 2, "fourier")


def test_string_form_is_closed(loop3):
    s = string_form(random_pair(loop3, 2, seed=3))
    assert worst(d_graded(s).sup_norms()) < 1e-10


def test_string_potential_algorithms_agree(pair, other_pair):
    line = straight_line(pair, other_pair)
    explicit = string_potential(line, 2, "explicit")
    assert explicit.degrees == [0, 2]
    assert worst(graded_defect(explicit, string_potential(line, 2, "slice"))) < 1e-10
    assert worst(graded_defect(explicit, string_potential(line, 2, "cs_fiber"))) < 1e-10


def test_string_potential_transgresses(loop3):
    p0 = random_pair(loop3, 2, seed=1)
    p1 = random_pair(loop3, 2, seed=2)
    S = string_potential(straight_line(p0, p1))
    delta = string_form(p1) - string_form(p0)
    assert worst(graded_defect(d_graded(S), delta)) < 1e-10


def test_sampled_path_potential_matches_straight(pair, other_pair):
    line = straight_line(pair, other_pair)
    sampled = sample_path(line, 16)
    assert worst(graded_defect(string_potential(line, 2), string_potential(sampled, 2))) < 1e-10


def test_curved_path_changes_string_potential_by_exact_form(pair, other_pair):
    line = straight_line(pair, other_pair)
    curved = PairPath("sampled", tuple(line.at(float(s**2)) for s in np.linspace(0.0, 1.0, 33)))
    verdicts = is_exact_graded(string_potential(line, 2) - string_potential(curved, 2))
    assert [v.degree for v in verdicts] == [0, 2]
    assert all(v.status == "exact" for v in verdicts)
    assert all(v.worst_period <= 1e-7 for v in verdicts)


def test_total_string_potential_is_line_from_trivial(pair):
    line = straight_line(trivial_pair(pair.grid, 2), pair)
    total = total_string_potential(pair, 2)
    assert worst(graded_defect(total, string_potential(line, 2))) < 1e-10
    assert worst(graded_defect(total, total_string_potential_via_caloron(pair, 2))) < 1e-10


def test_total_string_potential_derivative(pair):
    S = total_string_potential(pair)
    assert worst(graded_defect(d_graded(S), string_form(pair))) < 1e-10


def test_string_form_is_additive_under_direct_sums(pair, other_pair):
    total = string_form(direct_sum(pair, other_pair))
    assert worst(graded_defect(total, string_form(pair) + string_form(other_pair))) < 1e-12


def test_degree_zero_witness(loop_grid):
    base = loop_grid.base()
    f = np.sin(base.mesh()[0]) + 0.5 * np.cos(base.mesh()[1])
    witness = surjectivity_witness(loop_grid, f)
    S = string_potential(straight_line(trivial_pair(loop_grid, 1), witness))
    assert_allclose(S.term(0).coeffs[()][..., 0, 0], f, atol=1e-12)
    assert S.term(2).sup_norm() < 1e-12


def test_constant_witness(loop_grid):
    witness = surjectivity_witness(loop_grid, 0.3)
    S = string_potential(straight_line(trivial_pair(loop_grid, 1), witness))
    assert_allclose(S.term(0).coeffs[()][..., 0, 0], 0.3, atol=1e-12)


def test_profile_normalization(witness_grid):
    rho = default_profile(witness_grid, 2)
    weights = witness_grid.axes[3].weights
    assert rho[0] == 0.0
    assert_allclose(np.dot(weights, rho ** 2), (2 * np.pi) ** 3, rtol=1e-12)


def test_degree_three_witness(witness_grid):
    base = witness_grid.base()
    f = np.cos(base.mesh()[2])
    witness = surjectivity_witness(witness_grid, f, k=1)
    s = string_form(witness)
    assert s.degrees == [1, 3]
    # s = df + df∧dx1∧dx2
    assert_allclose(s.term(1).coeffs[(2,)][..., 0, 0], -np.sin(base.mesh()[2]), atol=1e-10)
    assert np.abs(s.term(1).coeffs[(0,)]).max() < 1e-10
    assert_allclose(s.term(3).coeffs[(0, 1, 2)][..., 0, 0], -np.sin(base.mesh()[2]), atol=1e-10)
    S = string_potential(straight_line(trivial_pair(witness_grid, 1), witness))
    assert worst(graded_defect(d_graded(S), s)) < 1e-9


def test_witness_needs_interval_axes(loop_grid):
    with pytest.raises(GridError):
        surjectivity_witness(loop_grid, 0.0, k=1)


def test_witness_rejects_unbased_profile(witness_grid):
    rho = np.full(32, 2 * np.pi)
    with pytest.raises(InvariantError):
        surjectivity_witness(witness_grid, 0.0, k=1, rho=rho)


def test_witness_rejects_unnormalized_profile(witness_grid):
    rho = 0.5 * default_profile(witness_grid, 1)
    with pytest.raises(InvariantError):
        surjectivity_witness(witness_grid, 0.0, k=1, rho=rho)


def test_gerbe_identity(pair):
    curving, defect = gerbe_curving_check(pair)
    assert curving.degree == 2
    assert defect < 1e-10


def test_gerbe_curving_vanishes_without_connection(loop_grid):
    p = random_pair(loop_grid, 2, seed=4)
    higgs_only = ConnectionPair(MatrixForm.zeros(loop_grid, 1, 2), p.higgs, unitary=True)
    curving, defect = gerbe_curving_check(higgs_only)
    assert curving.sup_norm() == 0.0
    assert defect < 1e-12


def test_gerbe_needs_unitary_pair(loop_grid):
    with pytest.raises(InvariantError):
        gerbe_curving_check(random_pair(loop_grid, 2, seed=4, unitary=False))


def test_gerbe_needs_two_dimensional_base():
    with pytest.raises(GridError):
        gerbe_curving_check(random_pair(torus(8, loop=16), 2, seed=4))


@pytest.mark.parametrize("k", [-1, 1, 2])
def test_tau_hat_of_winding_loop(k):
    g = winding_map(torus(8, loop=16), k)
    tau = tau_hat_pullback(g)
    assert_allclose(tau.term(0).coeffs[()][..., 0, 0], k, atol=1e-10)


def test_tau_hat_algorithms_agree(based_map):
    direct = tau_hat_pullback(based_map)
    assert direct.degrees == [0, 2]
    assert worst(graded_defect(direct, tau_hat_pullback(based_map, algorithm="fiber"))) < 1e-10


def test_tau_hat_is_total_potential_of_flat_pair(based_map):
    direct = tau_hat_pullback(based_map)
    assert worst(graded_defect(direct, total_string_potential(flat_pair(based_map)))) < 1e-9


def test_tau_hat_needs_based_map(loop_grid):
    with pytest.raises(InvariantError):
        tau_hat_pullback(random_smooth_map(loop_grid, 2, seed=1))


def test_universal_string_form_is_odd_chern(based_map):
    universal = universal_string_pullback(based_map, 2)
    assert universal.degrees == [1, 3]
    assert worst(graded_defect(universal, odd_chern_character(based_map, 1))) < 1e-12


def test_tau_hat_is_additive_under_block_sums(based_map):
    other = random_smooth_map(based_map.grid, 1, seed=10, based=True, amplitude=0.1)
    total = tau_hat_pullback(block_sum(based_map, other))
    assert worst(graded_defect(total, tau_hat_pullback(based_map) + tau_hat_pullback(other))) < 1e-12


def test_string_form_is_gauge_invariant(based_map):
    p = random_pair(based_map.grid, 2, seed=6)
    transformed = gauge_transform(p, based_map)
    assert worst(graded_defect(string_form(transformed), string_form(p))) < 1e-8
