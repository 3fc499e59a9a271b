"""Hilbert geometry of the variance-precision bicone VPM(n) = {X : 0 < X < I}."""

__version__ = "0.1.0"
