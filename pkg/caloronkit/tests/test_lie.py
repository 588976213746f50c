"""Tests for group maps, Maurer-Cartan forms and holonomy."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import solve_ivp

from caloronkit.errors import ConfigError, GridError, InvariantError
from caloronkit.models.connection import anti_hermitian_defect
from caloronkit.models.forms import graded_defect
from caloronkit.models.grid import Circle, EulerSphere3, make_grid, torus
from caloronkit.models.group import GroupMap
from caloronkit.services.calculus import d, integrate, wedge
from caloronkit.services.chernweil import odd_chern_character
from caloronkit.services.lie import (
    block_sum, holonomy, identity_map, matrix_exp, maurer_cartan, pointwise_inverse, random_smooth_map,
    rotation_homotopy, rotation_homotopy_map, sphere_identity_map, winding_map,
)

C = np.array([[0.2j, 0.3], [-0.3, -0.1j]])
A = np.array([[0.4j, 0.1 + 0.2j], [-0.1 + 0.2j, 0.0]])
B = np.array([[-0.1j, 0.25j], [0.25j, 0.3j]])


def loop_field(theta):
    return C + A * np.cos(theta) + B * np.sin(theta)


def test_maurer_cartan_is_flat(smooth_map):
    theta = maurer_cartan(smooth_map)
    assert (d(theta) + wedge(theta, theta)).sup_norm() < 1e-9


def test_maurer_cartan_of_unitary_map_is_anti_hermitian():
    theta = maurer_cartan(random_smooth_map(torus(16, 16, loop=32), 2, seed=7, based=True))
    assert anti_hermitian_defect(theta) < 1e-14


def test_random_map_is_deterministic_and_unitary():
    grid = torus(16, 16)
    g = random_smooth_map(grid, 2, seed=3)
    h = random_smooth_map(grid, 2, seed=3)
    assert g.unitary
    assert np.array_equal(g.values, h.values)


def test_based_map_is_identity_on_first_slice(based_map):
    at_zero = based_map.slice_values(based_map.grid.circle_axis, 0)
    assert np.array_equal(at_zero, np.broadcast_to(np.eye(2), at_zero.shape))


def test_based_flag_checked():
    grid = torus(8, loop=8)
    with pytest.raises(InvariantError):
        GroupMap(grid, 1, np.full(grid.shape + (1, 1), 1j), unitary=True, based=True)


def test_matrix_exp_of_anti_hermitian_is_unitary():
    rng = np.random.default_rng(0)
    X = rng.standard_normal((5, 3, 3)) + 1j * rng.standard_normal((5, 3, 3))
    X = X - np.conj(np.swapaxes(X, -1, -2))
    U = matrix_exp(X)
    assert_allclose(np.conj(np.swapaxes(U, -1, -2)) @ U, np.broadcast_to(np.eye(3), U.shape), atol=1e-12)


def test_block_sum_and_inverse(smooth_map):
    inverse = pointwise_inverse(smooth_map)
    total = block_sum(smooth_map, inverse)
    assert total.rank == 4
    assert_allclose(total.values[..., :2, :2], smooth_map.values)
    assert_allclose(total.values[..., 2:, 2:], inverse.values)
    assert np.all(total.values[..., :2, 2:] == 0)
    assert_allclose(smooth_map.values @ inverse.values, np.broadcast_to(np.eye(2), inverse.values.shape), atol=1e-12)


def test_maurer_cartan_of_block_sum_is_block_diagonal(smooth_map):
    inverse = pointwise_inverse(smooth_map)
    theta = maurer_cartan(block_sum(smooth_map, inverse))
    upper, lower = maurer_cartan(smooth_map), maurer_cartan(inverse)
    for index, array in theta.coeffs.items():
        assert_allclose(array[..., :2, :2], upper.coeffs[index], atol=1e-12)
        assert_allclose(array[..., 2:, 2:], lower.coeffs[index], atol=1e-12)


def test_rotation_homotopy_endpoints(smooth_map):
    start = rotation_homotopy(smooth_map, 0.0)
    end = rotation_homotopy(smooth_map, math.pi / 2)
    assert np.array_equal(start.values, block_sum(smooth_map, pointwise_inverse(smooth_map)).values)
    assert np.array_equal(end.values, identity_map(smooth_map.grid, 4).values)
    middle = rotation_homotopy(smooth_map, 0.7)
    assert middle.unitary and middle.rank == 4


def test_rotation_homotopy_parameter_range(smooth_map):
    with pytest.raises(ConfigError):
        rotation_homotopy(smooth_map, 2.0)


def test_rotation_homotopy_map_tangent_matches_difference(smooth_map):
    G = rotation_homotopy_map(smooth_map, 33)
    s_axis = G.grid.dim - 1
    assert G.grid.shape == (32, 32, 33)
    h = 1e-5
    t = math.pi / 4
    difference = (rotation_homotopy(smooth_map, t + h).values - rotation_homotopy(smooth_map, t - h).values) / (2 * h)
    tangent = np.take(G.tangents[s_axis], 16, axis=s_axis)
    assert_allclose(tangent, 0.5 * math.pi * difference, atol=1e-7)


def test_rotation_homotopy_map_needs_base_grid(based_map):
    with pytest.raises(GridError):
        rotation_homotopy_map(based_map)


def test_holonomy_of_constant_half_turn():
    loop = np.broadcast_to(0.5j * np.eye(2), (16, 2, 2))
    assert_allclose(holonomy(loop), -np.eye(2), atol=1e-9)


def test_holonomy_matches_ode_solver():
    thetas = 2 * math.pi * np.arange(16) / 16
    loop = np.stack([loop_field(t) for t in thetas])

    def rhs(theta, y):
        return (y.reshape(2, 2) @ loop_field(theta)).ravel()

    solution = solve_ivp(rhs, (0.0, 2 * math.pi), np.eye(2, dtype=complex).ravel(),
                         method="DOP853", rtol=1e-12, atol=1e-12)
    reference = solution.y[:, -1].reshape(2, 2)
    assert_allclose(holonomy(loop, steps=1024), reference, atol=1e-8)


def test_holonomy_fourth_order():
    phi = np.array([[0.3j, 1.0], [-1.0, -0.2j]])
    exact = matrix_exp(2 * math.pi * phi)
    errors = [float(np.max(np.abs(holonomy(np.broadcast_to(phi, (n, 2, 2)), steps=n) - exact)))
              for n in (16, 32, 64)]
    assert math.log2(errors[1] / errors[2]) > 3.7


def test_holonomy_unitary_projection():
    thetas = 2 * math.pi * np.arange(16) / 16
    loop = np.stack([loop_field(t) for t in thetas])
    g = holonomy(loop, steps=16, unitary=True)
    assert_allclose(np.conj(g.T) @ g, np.eye(2), atol=1e-12)


def test_holonomy_step_validation():
    loop = np.zeros((32, 1, 1), dtype=complex)
    with pytest.raises(ConfigError):
        holonomy(loop, steps=4)
    with pytest.raises(ConfigError):
        holonomy(loop, steps=8)


@pytest.mark.parametrize("k", [-2, 0, 1, 3])
def test_winding_map_degree(k):
    circle = make_grid([Circle(16)])
    term = odd_chern_character(winding_map(circle, k), 0).term(1)
    assert abs(complex(integrate(term)[0, 0]) - k) < 1e-10


def test_sphere_identity_has_degree_one():
    grid = make_grid([EulerSphere3(24, 24, 48)])
    term = odd_chern_character(sphere_identity_map(grid), 1).term(3)
    assert abs(complex(integrate(term)[0, 0]) - 1.0) < 1e-3


def test_sphere_identity_needs_sphere_grid():
    with pytest.raises(GridError):
        sphere_identity_map(torus(8, 8, 8))


def test_odd_chern_character_of_inverse_changes_sign(based_map):
    forward = odd_chern_character(based_map, 1)
    backward = odd_chern_character(pointwise_inverse(based_map), 1)
    assert max(graded_defect(backward, -forward).values()) < 1e-9


def test_odd_chern_character_is_additive_under_block_sums(based_map):
    other = random_smooth_map(based_map.grid, 1, seed=10, based=True, amplitude=0.1)
    total = odd_chern_character(block_sum(based_map, other), 1)
    parts = odd_chern_character(based_map, 1) + odd_chern_character(other, 1)
    assert max(graded_defect(total, parts).values()) < 1e-12
