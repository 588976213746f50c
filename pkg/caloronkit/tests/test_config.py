"""Tests for environment settings and the run configuration schema."""

import pytest
from pydantic import ValidationError

from caloronkit.config import Settings
from caloronkit.schemas.config import RunConfig


def test_settings_read_prefixed_environment(monkeypatch):
    monkeypatch.setenv("CALORONKIT_EXACT_TOL", "1e-5")
    monkeypatch.setenv("CALORONKIT_ODE_STEPS", "1024")
    monkeypatch.setenv("EXACT_TOL", "0.5")
    config = Settings()
    assert config.EXACT_TOL == 1e-5
    assert config.ODE_STEPS == 1024


def test_settings_defaults():
    config = Settings(_env_file=None)
    assert config.IDENTITY_TOL > 0
    assert config.THREADS >= 1
    assert config.SLICE_SAMPLES >= 7


@pytest.mark.parametrize("field, value", [
    ("EXACT_TOL", 0.0),
    ("IDENTITY_TOL", -1e-8),
    ("THREADS", 0),
    ("ODE_STEPS", 4),
    ("SLICE_SAMPLES", 3),
    ("LOG_LEVEL", "chatty"),
])
def test_settings_reject_bad_values(field, value):
    with pytest.raises(ValidationError):
        Settings(**{field: value})


def test_log_level_is_normalized():
    assert Settings(LOG_LEVEL="debug").LOG_LEVEL == "DEBUG"


def test_run_config_defaults():
    config = RunConfig(command="generate")
    assert config.rank == 2
    assert config.unitary
    assert config.quantity is None


@pytest.mark.parametrize("overrides", [
    {"rank": 0},
    {"samples": 0},
    {"seed": -1},
    {"tol": 0.0},
    {"amplitude": -0.5},
    {"ode_steps": 4},
    {"quantity": "betti"},
    {"kind": "bundle"},
])
def test_run_config_validation(overrides):
    with pytest.raises(ValidationError):
        RunConfig(command="compute", **overrides)


def test_run_config_accepts_equivalence_quantities():
    for quantity in ("cs-equivalence", "string-equivalence"):
        assert RunConfig(command="compute", quantity=quantity).quantity == quantity
