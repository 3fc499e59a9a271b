"""Tests for vpm-hilbert."""
