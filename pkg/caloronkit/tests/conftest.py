"""Shared fixtures for the CaloronKit test suite."""

import pytest

from caloronkit.models.grid import torus
from caloronkit.services.generator import random_pair
from caloronkit.services.lie import random_smooth_map


@pytest.fixture
def loop_grid():
    """T²×S¹, coarse enough for fast tests; band-limit-1 data is resolved exactly."""
    return torus(8, 8, loop=16)


@pytest.fixture
def base_grid():
    return torus(8, 8)


@pytest.fixture
def pair(loop_grid):
    return random_pair(loop_grid, 2, seed=11, band_limit=1)


@pytest.fixture
def other_pair(loop_grid):
    return random_pair(loop_grid, 2, seed=12, band_limit=1)


@pytest.fixture
def smooth_map():
    """Unitary map on T²; expm output needs finer sampling than band-limited fields."""
    return random_smooth_map(torus(32, 32), 2, seed=5, band_limit=1, amplitude=0.5)


@pytest.fixture
def based_map():
    return random_smooth_map(torus(32, 32, loop=32), 2, seed=9, band_limit=1, based=True, amplitude=0.1)
