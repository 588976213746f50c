"""Tests for grids, stencils, quadrature and grid descriptors."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from caloronkit.errors import GridError, ShapeMismatchError
from caloronkit.models.grid import Circle, EulerSphere3, Interval, make_grid, torus
from caloronkit.schemas.grid import GridSpec


def test_circle_derivative_is_spectral():
    """Band-limited functions are differentiated to rounding."""
    grid = torus(16)
    x = grid.axes[0].coords
    assert_allclose(grid.differentiate(np.sin(3 * x), 0), 3 * np.cos(3 * x), atol=1e-12)


def test_circle_with_custom_period():
    grid = make_grid([Circle(16, period=4 * math.pi)])
    x = grid.axes[0].coords
    assert_allclose(grid.differentiate(np.cos(x / 2), 0), -0.5 * np.sin(x / 2), atol=1e-12)
    assert grid.axes[0].weights.sum() == pytest.approx(4 * math.pi)


def test_interval_derivative_exact_on_quartics():
    grid = make_grid([Interval(11, 0.0, 2.0)])
    t = grid.axes[0].coords
    assert_allclose(grid.differentiate(t ** 4 - t ** 3, 0), 4 * t ** 3 - 3 * t ** 2, atol=1e-10)


def test_romberg_weights_for_power_of_two_intervals():
    grid = make_grid([Interval(9)])
    t = grid.axes[0].coords
    assert np.dot(grid.axes[0].weights, t ** 7) == pytest.approx(1 / 8, abs=1e-13)


def test_gregory_weights_exact_on_cubics():
    grid = make_grid([Interval(10, -1.0, 2.0)])
    t = grid.axes[0].coords
    assert np.dot(grid.axes[0].weights, t ** 3) == pytest.approx((16 - 1) / 4, abs=1e-12)
    assert grid.axes[0].weights.sum() == pytest.approx(3.0, abs=1e-13)


def test_torus_layout():
    grid = torus(8, 12, loop=16)
    assert grid.dim == 3
    assert grid.shape == (8, 12, 16)
    assert grid.circle_axis == 2
    assert grid.base().shape == (8, 12)
    assert grid.base().distinguished_circle is None
    assert grid.is_torus


def test_integrate_values():
    grid = torus(8, 8)
    assert_allclose(grid.integrate_values(np.ones(grid.shape)), 4 * math.pi ** 2)


def test_sphere_volume_and_chart_axes():
    grid = make_grid([EulerSphere3(8, 9, 8)])
    assert grid.dim == 3
    assert [axis.kind for axis in grid.axes] == ["circle", "interval", "circle"]
    assert grid.axes[0].length == pytest.approx(4 * math.pi)
    assert grid.volume == pytest.approx(2 * math.pi ** 2, rel=1e-12)
    assert grid.has_sphere and not grid.is_torus


def test_with_interval_keeps_loop_last():
    grid = torus(8, 8, loop=16)
    extruded = grid.with_interval(grid.circle_axis, 9)
    assert extruded.shape == (8, 8, 9, 16)
    assert extruded.circle_axis == 3
    assert extruded.axes[2].kind == "interval"
    assert extruded.without_axis(2) == grid


@pytest.mark.parametrize("factors, distinguished", [
    ([Circle(4)], None),
    ([Circle(8), Circle(8)], 0),
    ([Circle(8), Interval(8)], 1),
    ([], None),
])
def test_make_grid_rejects_bad_descriptors(factors, distinguished):
    with pytest.raises(GridError):
        make_grid(factors, distinguished)


def test_check_field_rejects_wrong_shape():
    with pytest.raises(ShapeMismatchError):
        torus(8, 8).check_field(np.zeros((8, 9)))


def test_sphere_axis_cannot_be_removed():
    with pytest.raises(GridError):
        make_grid([EulerSphere3(8, 8, 8)]).without_axis(1)


def test_grid_tokens():
    assert GridSpec.from_tokens("16x16x32s1").to_grid() == torus(16, 16, loop=32)
    grid = GridSpec.from_tokens("8x9i").to_grid()
    assert [axis.kind for axis in grid.axes] == ["circle", "interval"]
    assert grid.distinguished_circle is None


@pytest.mark.parametrize("text", ["8s1x8", "abc", "4x8", ""])
def test_grid_tokens_rejected(text):
    with pytest.raises(GridError):
        GridSpec.from_tokens(text).to_grid()


def test_grid_spec_round_trip_preserves_sphere():
    grid = make_grid([EulerSphere3(8, 9, 10)])
    assert GridSpec.from_grid(grid).to_grid() == grid
