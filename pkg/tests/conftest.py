"""Pytest fixtures for vpm-hilbert tests."""

import numpy as np
import pytest

from vpm_hilbert.config import reset_settings
from vpm_hilbert.domains import sample_vpm
from vpm_hilbert.models import SymMat, VpmPoint


@pytest.fixture(autouse=True)
def clear_settings():
    """Reset settings before each test so environment patches take effect."""
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator for reproducible property checks."""
    return np.random.default_rng(20240611)


def scalar_point(value: float, margin: float = 0.01) -> VpmPoint:
    """A 1x1 bicone point."""
    return VpmPoint(mat=SymMat(entries=value), margin=margin)


@pytest.fixture
def quarter() -> VpmPoint:
    """The 1x1 point 0.25."""
    return scalar_point(0.25)


@pytest.fixture
def three_quarters() -> VpmPoint:
    """The 1x1 point 0.75."""
    return scalar_point(0.75)


@pytest.fixture
def vpm_pair() -> tuple[VpmPoint, VpmPoint]:
    """Two sampled 3x3 points with margin 0.05."""
    return sample_vpm(3, 1, 0.05), sample_vpm(3, 2, 0.05)


@pytest.fixture
def vpm_triple() -> tuple[VpmPoint, VpmPoint, VpmPoint]:
    """Three sampled 3x3 points with margin 0.05."""
    return sample_vpm(3, 11, 0.05), sample_vpm(3, 12, 0.05), sample_vpm(3, 13, 0.05)
