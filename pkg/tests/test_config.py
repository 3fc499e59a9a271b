"""Tests for configuration settings."""

import os
from unittest.mock import patch

import pytest
from pydantic import ValidationError

from vpm_hilbert.config import Settings, get_settings, override_settings, reset_settings, resolve_tol


class TestSettings:
    """Tests for Settings."""

    def test_defaults(self) -> None:
        """Test the numerical defaults."""
        with patch.dict(os.environ, {}, clear=True):
            settings = Settings()
        assert settings.tolerance == 1e-10
        assert settings.margin == 1e-12
        assert settings.bisect_tol == 1e-9
        assert settings.workers == 1
        assert settings.suite_profile == "full"

    def test_env_override(self) -> None:
        """Test VPM_-prefixed environment variables are read."""
        with patch.dict(os.environ, {"VPM_TOLERANCE": "1e-8", "VPM_WORKERS": "4"}):
            settings = get_settings()
        assert settings.tolerance == 1e-8
        assert settings.workers == 4

    def test_invalid_env_value(self) -> None:
        """Test out-of-range values are rejected."""
        with patch.dict(os.environ, {"VPM_MARGIN": "0.7"}):
            with pytest.raises(ValidationError):
                Settings()


class TestSettingsCache:
    """Tests for get_settings, override_settings and reset_settings."""

    def test_cached(self) -> None:
        """Test get_settings returns the same instance until reset."""
        first = get_settings()
        assert get_settings() is first
        reset_settings()
        assert get_settings() is not first

    def test_override(self) -> None:
        """Test override_settings replaces the active settings."""
        override_settings(tolerance=1e-6)
        assert get_settings().tolerance == 1e-6
        reset_settings()
        assert get_settings().tolerance == 1e-10

    def test_resolve_tol(self) -> None:
        """Test resolve_tol falls back to the configured tolerance."""
        override_settings(tolerance=1e-7)
        assert resolve_tol(None) == 1e-7
        assert resolve_tol(1e-3) == 1e-3
