# src/config/settings.py
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict
from functools import lru_cache


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables (prefix RIS_)"""

    model_config = SettingsConfigDict(
        env_prefix="RIS_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Worker pool
    workers: int = Field(default=1, ge=1)

    # Reproducibility
    seed: int = Field(default=20240101, ge=0)

    # Monte Carlo defaults (10,000 realizations per data point)
    mc_samples: int = Field(default=10_000, ge=100)
    mc_confidence: float = Field(default=0.99, gt=0.0, lt=1.0)
    mc_chunk_size: int = Field(default=16_384, ge=256)  # fixes the sample set per seed

    # Output
    output_dir: str = Field(default="./results")
    cache_enabled: bool = Field(default=True)

    # Logging
    log_level: str = Field(default="INFO")
    log_file: str = Field(default="")


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance"""
    return Settings()
