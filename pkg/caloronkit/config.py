"""
Configuration module for CaloronKit.
Loads environment variables and defines numerical settings.
"""

import os

from dotenv import load_dotenv
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# Load environment variables from .env file
load_dotenv()


class Settings(BaseSettings):
    """Toolkit settings loaded from CALORONKIT_* environment variables."""

    model_config = SettingsConfigDict(env_prefix="CALORONKIT_", extra="ignore")

    # Application
    APP_NAME: str = "CaloronKit"
    APP_VERSION: str = "1.0.0"
    REPORT_SCHEMA_VERSION: str = "1"

    # Workers for suite rows (default: machine parallelism)
    THREADS: int = os.cpu_count() or 1

    # Identity and exactness tolerances
    IDENTITY_TOL: float = 1e-8
    EXACT_TOL: float = 1e-7
    CLOSED_TOL: float = 1e-9

    # Data-validation tolerances
    BASEDNESS_TOL: float = 1e-12
    FRAMING_TOL: float = 1e-12
    UNITARY_TOL: float = 1e-10
    ENDPOINT_TOL: float = 1e-10

    # Holonomy ODE
    ODE_STEPS: int = 512

    # Test-data generation
    SEED: int = 7
    BAND_LIMIT: int = 1
    AMPLITUDE: float = 0.5

    # t-intervals used by the slice algorithms
    SLICE_SAMPLES: int = 32

    # Logging
    LOG_LEVEL: str = "INFO"
    LOG_JSON: bool = False
    DEBUG: bool = False

    @field_validator(
        "IDENTITY_TOL", "EXACT_TOL", "CLOSED_TOL", "BASEDNESS_TOL",
        "FRAMING_TOL", "UNITARY_TOL", "ENDPOINT_TOL", "AMPLITUDE",
    )
    @classmethod
    def validate_positive(cls, v: float) -> float:
        """Tolerances and amplitudes must be strictly positive."""
        if v <= 0:
            raise ValueError("Value must be strictly positive")
        return v

    @field_validator("THREADS")
    @classmethod
    def validate_threads(cls, v: int) -> int:
        """At least one worker."""
        if v < 1:
            raise ValueError("THREADS must be at least 1")
        return v

    @field_validator("ODE_STEPS")
    @classmethod
    def validate_ode_steps(cls, v: int) -> int:
        """RK4 needs a minimal number of steps per loop."""
        if v < 8:
            raise ValueError("ODE_STEPS must be at least 8")
        return v

    @field_validator("SLICE_SAMPLES")
    @classmethod
    def validate_slice_samples(cls, v: int) -> int:
        """Sampled t-axes become Interval factors (at least 8 points)."""
        if v < 7:
            raise ValueError("SLICE_SAMPLES must be at least 7")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalize the log level name."""
        level = v.upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level


# Global settings instance
settings = Settings()
