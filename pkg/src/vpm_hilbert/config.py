"""Configuration settings for vpm-hilbert."""

from typing import Any, Literal, Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Numerical defaults loaded from environment variables (prefix ``VPM_``)."""

    model_config = SettingsConfigDict(env_prefix="VPM_")

    tolerance: float = Field(default=1e-10, gt=0)
    margin: float = Field(default=1e-12, gt=0, lt=0.5)
    bisect_tol: float = Field(default=1e-9, gt=0)
    geodesic_tol: float = Field(default=1e-10, gt=0)
    geodesic_max_iter: int = Field(default=200, gt=0)
    workers: int = Field(default=1, ge=1)
    suite_profile: Literal["quick", "standard", "full"] = "full"


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get application settings from environment (read once, then reused)."""
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings


def override_settings(**values: Any) -> Settings:
    """Replace the active settings; explicit values take precedence over the environment."""
    global _settings
    _settings = Settings(**values)
    return _settings


def reset_settings() -> None:
    """Drop the active settings so the next access re-reads the environment."""
    global _settings
    _settings = None


def resolve_tol(tol: float | None) -> float:
    """Return ``tol`` or the configured default tolerance."""
    return get_settings().tolerance if tol is None else tol
