"""
Weak Tomography - Configuration
Environment variables and settings using Pydantic
"""
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings loaded from environment variables"""

    model_config = SettingsConfigDict(
        env_prefix="WEAKTOMO_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # -------------------------------------------
    # Application
    # -------------------------------------------
    LOG_LEVEL: str = Field(default="INFO", description="Logging level")
    RESULTS_DIR: str = Field(default="results", description="Default output directory")

    # -------------------------------------------
    # Experiment defaults
    # -------------------------------------------
    DEFAULT_SEED: int = Field(default=20150415, description="Master seed when --seed is not given")
    DEFAULT_WORKERS: int = Field(default=1, ge=1, description="Worker processes for sweeps")
    DEFAULT_ENGINE: str = Field(
        default="multinomial",
        description="Simulation engine (trajectory, multinomial)"
    )
    DEFAULT_ESTIMATOR: str = Field(
        default="calibrated",
        description="Weak-stage estimator (calibrated, kept)"
    )
    EPS_WARN_THRESHOLD: float = Field(
        default=2.0,
        description="Coupling strengths above this produce a validity warning"
    )

    # -------------------------------------------
    # Validation suite
    # -------------------------------------------
    VALIDATE_RUNS: int = Field(default=10_000, ge=100, description="Runs per statistical check")
    VALIDATE_LARGE_N: int = Field(
        default=1_000_000,
        ge=1000,
        description="Ensemble size for estimator consistency checks"
    )


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()


# Global settings instance
settings = get_settings()
