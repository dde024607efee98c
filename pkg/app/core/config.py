"""
Application Configuration

Loads settings from environment variables with sensible defaults.
"""

from pydantic import field_validator
from pydantic_settings import BaseSettings
from functools import lru_cache


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Application
    APP_NAME: str = "False Theta Reciprocal Workbench"
    APP_VERSION: str = "0.1.0"
    LOG_LEVEL: str = "INFO"

    # Parallelism (verification jobs, scans, acceptance criteria)
    FALSETHETA_THREADS: int = 4

    # Series defaults
    DEFAULT_TRUNC: int = 2000
    SCAN_MIN_HITS: int = 50

    # Asymptotics
    ROOT_TOL: float = 1e-9
    RATIO_DIGITS: int = 12

    # Data registry
    REGISTRY_CACHE_TTL_SECONDS: int = 300

    @field_validator("FALSETHETA_THREADS")
    @classmethod
    def _at_least_one_thread(cls, v: int) -> int:
        if v < 1:
            raise ValueError("FALSETHETA_THREADS must be >= 1")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def _upper_level(cls, v: str) -> str:
        return v.upper()

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        case_sensitive = True
        extra = "ignore"  # Allow extra env vars


@lru_cache()
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


# Convenience access
settings = get_settings()
