"""Tests for the caloron transform, curvature, gauge action and paths of pairs."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from caloronkit.errors import DegreeError, InvariantError, PathError, ShapeMismatchError
from caloronkit.models.connection import ConnectionPair, FormPath, FramedConnection
from caloronkit.models.forms import MatrixForm
from caloronkit.models.grid import torus
from caloronkit.services.generator import random_connection, random_pair
from caloronkit.services.geometry import (
    caloron_transform, curvature, extrude_forms, extrude_pairs, flat_pair, gauge_transform,
    higgs_covariant_derivative, higgs_holonomy_map, horizontal_curvature, inverse_caloron,
    is_hermitian_compatible, sample_path, straight_line, trivial_pair,
)
from caloronkit.services.lie import random_smooth_map


def test_caloron_roundtrip_is_exact(pair):
    back = inverse_caloron(caloron_transform(pair))
    for index, array in pair.connection.coeffs.items():
        assert np.array_equal(back.connection.coeffs[index], array)
    assert np.array_equal(back.higgs.coeffs[()], pair.higgs.coeffs[()])


def test_caloron_transform_places_higgs_on_loop_axis(pair):
    a = caloron_transform(pair)
    theta = pair.grid.circle_axis
    assert np.array_equal(a.form.coeffs[(theta,)], pair.higgs.coeffs[()])
    assert a.unitary


def test_curvature_splits_into_horizontal_and_higgs_parts(pair):
    theta = pair.grid.circle_axis
    F = curvature(caloron_transform(pair))
    F_M = horizontal_curvature(pair)
    nabla_phi = higgs_covariant_derivative(pair)
    for index, array in F.coeffs.items():
        expected = nabla_phi.coeffs[index[:1]] if index[-1] == theta else F_M.coeffs[index]
        assert_allclose(array, expected, atol=1e-10)


def test_curvature_needs_one_form(pair):
    with pytest.raises(ShapeMismatchError):
        curvature(pair.higgs)


def test_pair_rejects_loop_component(loop_grid):
    theta = loop_grid.circle_axis
    values = np.zeros(loop_grid.shape + (1, 1), dtype=complex)
    values[..., 1:, :, :] = 0.1j
    A = MatrixForm.from_components(loop_grid, 1, 1, {(theta,): values})
    with pytest.raises(InvariantError):
        ConnectionPair(A, MatrixForm.zeros(loop_grid, 0, 1))


def test_pair_rejects_unbased_connection(loop_grid):
    A = MatrixForm.from_components(loop_grid, 1, 1, {(0,): np.full(loop_grid.shape + (1, 1), 0.1j)})
    with pytest.raises(InvariantError):
        ConnectionPair(A, MatrixForm.zeros(loop_grid, 0, 1))


def test_unitary_pair_rejects_hermitian_higgs(loop_grid):
    higgs = MatrixForm.function(loop_grid, np.broadcast_to(np.eye(2), loop_grid.shape + (2, 2)))
    with pytest.raises(InvariantError):
        ConnectionPair(MatrixForm.zeros(loop_grid, 1, 2), higgs, unitary=True)
    assert not ConnectionPair(MatrixForm.zeros(loop_grid, 1, 2), higgs).unitary


def test_pair_degree_and_grid_checks(loop_grid, base_grid):
    with pytest.raises(DegreeError):
        ConnectionPair(MatrixForm.zeros(loop_grid, 0, 1), MatrixForm.zeros(loop_grid, 0, 1))
    with pytest.raises(InvariantError):
        ConnectionPair(MatrixForm.zeros(base_grid, 1, 1), MatrixForm.zeros(base_grid, 0, 1))


def test_framed_connection_checks_framing(loop_grid):
    form = MatrixForm.from_components(loop_grid, 1, 1, {(0,): np.full(loop_grid.shape + (1, 1), 0.1j)})
    with pytest.raises(InvariantError):
        FramedConnection(form)


def test_hermitian_compatibility(pair, loop_grid):
    assert is_hermitian_compatible(pair)
    assert not is_hermitian_compatible(random_pair(loop_grid, 2, seed=3, unitary=False))


def test_flat_pair_has_flat_caloron_transform(based_map):
    p = flat_pair(based_map)
    assert p.unitary
    assert curvature(caloron_transform(p)).sup_norm() < 1e-9


def test_flat_pair_from_default_map_on_coarse_grid():
    G = random_smooth_map(torus(16, 16, loop=32), 2, seed=7, based=True)
    p = flat_pair(G)
    assert p.unitary
    assert is_hermitian_compatible(p)
    assert curvature(caloron_transform(p)).sup_norm() < 1e-5


def test_gauge_transform_on_coarse_grid_stays_unitary():
    grid = torus(16, 16, loop=32)
    G = random_smooth_map(grid, 2, seed=7, based=True, amplitude=0.3)
    shifted = gauge_transform(random_pair(grid, 2, seed=1), G)
    assert shifted.unitary
    assert is_hermitian_compatible(shifted)


def test_horizontal_curvature_is_gauge_covariant(based_map):
    p = random_pair(based_map.grid, 2, seed=4)
    transformed = gauge_transform(p, based_map)
    g, g_inverse = based_map.values, np.linalg.inv(based_map.values)
    expected = horizontal_curvature(p)
    for index, array in horizontal_curvature(transformed).coeffs.items():
        assert_allclose(array, g_inverse @ expected.coeffs[index] @ g, atol=1e-9)


def test_higgs_holonomy_is_invariant_under_based_gauge(based_map):
    p = random_pair(based_map.grid, 2, seed=4)
    before = higgs_holonomy_map(p).values
    after = higgs_holonomy_map(gauge_transform(p, based_map)).values
    assert_allclose(after, before, atol=1e-7)


def test_gauge_transform_needs_based_map(pair, loop_grid):
    g = random_smooth_map(loop_grid, 2, seed=1)
    with pytest.raises(InvariantError):
        gauge_transform(pair, g)


def test_trivial_pair_has_identity_holonomy(loop_grid):
    values = higgs_holonomy_map(trivial_pair(loop_grid, 2)).values
    assert values.shape == (8, 8, 2, 2)
    assert_allclose(values, np.broadcast_to(np.eye(2), values.shape), atol=1e-14)


def test_straight_line_endpoints(pair, other_pair):
    line = straight_line(pair, other_pair)
    assert np.array_equal(line.at(0.0).higgs.coeffs[()], pair.higgs.coeffs[()])
    assert np.array_equal(line.at(1.0).higgs.coeffs[()], other_pair.higgs.coeffs[()])
    assert_allclose(line.velocity().higgs.coeffs[()], other_pair.higgs.coeffs[()] - pair.higgs.coeffs[()])


def test_straight_line_needs_matching_rank(pair, loop_grid):
    with pytest.raises(PathError):
        straight_line(pair, trivial_pair(loop_grid, 3))


def test_extruded_pair_carries_samples(pair, other_pair):
    sampled = sample_path(straight_line(pair, other_pair), 8)
    extruded = extrude_pairs(sampled)
    assert extruded.grid.shape == (8, 8, 9, 16)
    assert extruded.grid.circle_axis == 3
    assert extruded.grid.axes[2].kind == "interval"
    assert not np.any(extruded.connection.coeffs[(2,)])
    for k, sample in enumerate(sampled.pairs):
        assert np.array_equal(extruded.higgs.coeffs[()][:, :, k], sample.higgs.coeffs[()])
        assert np.array_equal(extruded.connection.coeffs[(1,)][:, :, k], sample.connection.coeffs[(1,)])


def test_short_sampled_paths_rejected(pair, other_pair):
    with pytest.raises(PathError):
        sample_path(straight_line(pair, other_pair), 4)


def test_extrusion_needs_sampled_path(pair, other_pair):
    with pytest.raises(PathError):
        extrude_pairs(straight_line(pair, other_pair))


def test_extruded_forms_append_t_axis(base_grid):
    a0 = random_connection(base_grid, 2, seed=1)
    a1 = random_connection(base_grid, 2, seed=2)
    connection = extrude_forms(FormPath.straight(a0, a1).sample(8))
    assert connection.grid.shape == (8, 8, 9)
    assert not np.any(connection.coeffs[(2,)])
    assert_allclose(connection.coeffs[(0,)][:, :, 8], a1.coeffs[(0,)])
