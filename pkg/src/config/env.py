"""Environment configuration and validation."""

from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process-wide settings loaded from environment variables (prefix ``AQUAKERN_``)."""

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix="AQUAKERN_",
        case_sensitive=False,
        extra="ignore"
    )

    # Reproducibility
    seed: Optional[int] = Field(
        default=None,
        description="Root seed used when neither --seed nor the experiment config sets one"
    )

    # Runner Configuration
    output_dir: str = Field(default="runs", description="Default directory for run outputs")
    workers: int = Field(default=1, ge=1, description="Thread pool size for Gram matrices and sweeps")
    log_level: str = Field(default="INFO", description="Logging level name")

    # Labeling Configuration
    ecoli_threshold: float = Field(
        default=235.0,
        ge=0.0,
        description="E.coli count (MPN/100mL) at or below which water is acceptable"
    )
    ecoli_column: str = Field(
        default="E.coli - (MPN/100mL)",
        description="CSV header of the E.coli column"
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Normalize and check the logging level name."""
        level = v.strip().upper()
        if level not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"Unknown log level: {v}")
        return level

    def get_output_dir(self) -> Path:
        """Get output directory as Path object."""
        return Path(self.output_dir)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get or create settings instance.

    Returns:
        Settings instance loaded from environment
    """
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def reload_settings() -> Settings:
    """Drop the cached settings and read the environment again.

    Returns:
        Fresh settings instance
    """
    global _settings
    _settings = None
    return get_settings()
