"""Tests for the verification suites."""

import pytest

from vpm_hilbert.config import override_settings
from vpm_hilbert.profiles import QUICK_SUITES
from vpm_hilbert.suites import DEFAULT_TRIALS, SUITES, run_profile, run_suite

# Small trial counts keep each suite fast; fixed-size suites ignore them.
FAST_TRIALS = {
    "oracle": 20,
    "birkhoff": 5,
    "interval": 1,
    "isometry": 20,
    "metric": 20,
    "eps": 20,
    "iota": 20,
    "airm": 20,
    "seb": 1,
    "lorentz": 50,
    "dual": 300,
    "domain": 50,
}


class TestSuiteRegistry:
    """Tests for the suite registry."""

    def test_every_suite_has_default_trials(self) -> None:
        """Test each registered suite declares a default trial count."""
        assert set(DEFAULT_TRIALS) == set(SUITES)
        assert DEFAULT_TRIALS["dual"] == 100_000

    def test_unknown_suite(self) -> None:
        """Test an unknown name is rejected."""
        with pytest.raises(ValueError, match="unknown suite"):
            run_suite("nope")

    def test_invalid_parameters(self) -> None:
        """Test bad n, trials and seed are rejected."""
        with pytest.raises(ValueError, match="n must be"):
            run_suite("oracle", n=0)
        with pytest.raises(ValueError, match="trials must be"):
            run_suite("oracle", trials=0)
        with pytest.raises(ValueError, match="seed must be"):
            run_suite("oracle", seed=-1)


class TestSuitesPass:
    """Every suite passes on a small seeded run."""

    @pytest.mark.parametrize("name", sorted(FAST_TRIALS))
    def test_suite_passes(self, name: str) -> None:
        """Test the suite passes with every check inside its tolerance."""
        result = run_suite(name, n=3, trials=FAST_TRIALS[name], seed=1)
        assert result.name == name
        assert result.passed, result.details
        for check in result.details["checks"].values():
            assert check["max_deviation"] <= check["tolerance"]
        if name == "seb":
            assert result.details["raw_radius_rise"] >= 0.0

    @pytest.mark.parametrize(("n", "trials"), [(1, 20), (2, 20), (5, 20), (10, 5)])
    def test_oracle_other_dimensions(self, n: int, trials: int) -> None:
        """Test the cross-ratio agreement holds in other dimensions."""
        assert run_suite("oracle", n=n, trials=trials, seed=3).passed

    @pytest.mark.parametrize(("n", "trials"), [(1, 3), (2, 3), (5, 2), (10, 2)])
    def test_birkhoff_other_dimensions(self, n: int, trials: int) -> None:
        """Test the Birkhoff bisection agrees with the closed form in other dimensions."""
        result = run_suite("birkhoff", n=n, trials=trials, seed=3)
        assert result.passed, result.details

    def test_interval_grid_size(self) -> None:
        """Test the interval suite reports its 100 grid pairs."""
        assert run_suite("interval").trials == 100

    def test_isometry_reports_gl_gap(self) -> None:
        """Test the GL witness gap exceeds 0.1."""
        result = run_suite("isometry", trials=5)
        assert result.details["gl_witness_gap"] > 0.1

    def test_dual_records_mismatch_example(self) -> None:
        """Test a dual-cone member whose rescaling leaves VPM(n) is recorded."""
        result = run_suite("dual", n=3, trials=300, seed=0)
        assert result.details["mismatch_example"] is not None


class TestDeterminism:
    """Tests for seeding and worker independence."""

    def test_same_seed_same_result(self) -> None:
        """Test identical seeds give identical results."""
        first = run_suite("metric", trials=10, seed=5)
        second = run_suite("metric", trials=10, seed=5)
        assert first.model_dump() == second.model_dump()

    def test_workers_do_not_change_result(self) -> None:
        """Test a thread pool gives the same result as the serial run."""
        serial = run_suite("metric", trials=12, seed=2, workers=1)
        pooled = run_suite("metric", trials=12, seed=2, workers=4)
        assert serial.model_dump() == pooled.model_dump()

    def test_workers_from_settings(self) -> None:
        """Test the worker count falls back to VPM_WORKERS."""
        override_settings(workers=3)
        assert run_suite("domain", trials=6, seed=2).passed


class TestRunProfile:
    """Tests for run_profile."""

    def test_quick_profile(self) -> None:
        """Test the quick profile runs its suites in registry order."""
        results = run_profile("quick", n=2, trials=5)
        assert {r.name for r in results} == QUICK_SUITES
        assert [r.name for r in results] == [name for name in SUITES if name in QUICK_SUITES]
        assert all(r.passed for r in results)

    def test_profile_from_settings(self) -> None:
        """Test the configured profile is used when none is given."""
        override_settings(suite_profile="quick")
        results = run_profile(n=2, trials=3)
        assert len(results) == len(QUICK_SUITES)
