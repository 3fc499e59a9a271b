"""Seeded verification suites run by ``vpm-hilbert verify``.

Each suite draws its trials from ``numpy.random.default_rng([seed, n, i])`` so
results do not depend on the worker count, evaluates one or more checks per
trial and reports the worst deviation of every check against its tolerance.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional

import numpy as np

from vpm_hilbert.ballgeo import radius_rise, radius_rise_excess, seb_trace
from vpm_hilbert.config import get_settings
from vpm_hilbert.domains import (
    dual_cone_contains,
    dual_cone_witness,
    lift,
    negative_part_mass,
    random_orthonormal,
    sample_vpm,
    vpm_contains,
)
from vpm_hilbert.metrics import (
    airm,
    gl_congruence_witness,
    hilbert_interval,
    hilbert_vpm,
    hilbert_vpm_eps,
    hilbert_vpm_mobius,
)
from vpm_hilbert.models import ConeElement, EpsilonDomain, LorentzPoint, SquareMat, SuiteResult, SymMat, VpmPoint
from vpm_hilbert.oracle import birkhoff_bounds, hilbert_cross_ratio, hilbert_cross_ratio_eps
from vpm_hilbert.profiles import get_enabled_suites
from vpm_hilbert.symmat import eigvals, extreme_eigvals, spectral_map
from vpm_hilbert.transforms import (
    complement,
    conjugate,
    congruence,
    d_iota,
    d_iota_inv,
    iota,
    iota_inv,
    t1_covariance,
    t2_precision,
    vpm_isometry,
)
from vpm_hilbert.viz import bicone_sheet, from_lorentz, in_lorentz_bicone, radial_extent, to_lorentz

logger = logging.getLogger(__name__)

Checks = dict[str, float]
TrialFn = Callable[[np.random.Generator, int], Checks]
SuiteFn = Callable[[int, int, int, int], SuiteResult]

SAMPLE_DELTA = 0.05
EPS_LEVELS = (0.01, 0.1, 1.0)
SEB_ITERATIONS = 1000
SEB_POINTS = 10
SEB_TAIL = 0.1
DUAL_PRIMAL_SAMPLES = 1000
DUAL_MARGIN = 1e-8


def _sample(rng: np.random.Generator, n: int, delta: float = SAMPLE_DELTA) -> VpmPoint:
    return sample_vpm(n, int(rng.integers(2**62)), delta)


def _orthonormal(rng: np.random.Generator, n: int) -> SquareMat:
    return SquareMat(entries=random_orthonormal(n, rng))


def _invertible(rng: np.random.Generator, n: int) -> SquareMat:
    """U diag(s) V with singular values in [0.5, 2]."""
    s = rng.uniform(0.5, 2.0, size=n)
    return SquareMat(entries=(random_orthonormal(n, rng) * s) @ random_orthonormal(n, rng))


def _max_abs(x: np.ndarray) -> float:
    return float(np.max(np.abs(x)))


def _run_trials(fn: TrialFn, n: int, trials: int, seed: int, workers: int) -> Checks:
    """Run ``trials`` seeded trials and keep the worst value of every check."""

    def one(i: int) -> Checks:
        return fn(np.random.default_rng([seed, n, i]), n)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(i) for i in range(trials)]

    worst: Checks = {}
    for checks in results:
        for key, value in checks.items():
            worst[key] = max(worst.get(key, 0.0), value)
    return worst


def _excess(deviation: float, tolerance: float) -> float:
    """Deviation relative to its tolerance; a zero tolerance counts any deviation as infinite."""
    if tolerance > 0:
        return deviation / tolerance
    return math.inf if deviation > 0 else 0.0


def _result(
    name: str,
    trials: int,
    worst: Checks,
    tolerances: dict[str, float],
    details: Optional[dict] = None,
) -> SuiteResult:
    checks = {
        key: {"max_deviation": worst.get(key, 0.0), "tolerance": tol, "passed": worst.get(key, 0.0) <= tol}
        for key, tol in tolerances.items()
    }
    headline = max(tolerances, key=lambda k: _excess(worst.get(k, 0.0), tolerances[k]))
    result = SuiteResult(
        name=name,
        passed=all(c["passed"] for c in checks.values()),
        trials=trials,
        max_deviation=worst.get(headline, 0.0),
        tolerance=tolerances[headline],
        details={"checks": checks, **(details or {})},
    )
    logger.info(
        "suite %-9s %s  trials=%d  max_deviation=%.3e  tolerance=%.1e",
        name,
        "PASS" if result.passed else "FAIL",
        trials,
        result.max_deviation,
        result.tolerance,
    )
    return result


# --- oracle agreement ---


def _oracle_trial(rng: np.random.Generator, n: int) -> Checks:
    a, b = _sample(rng, n), _sample(rng, n)
    d = hilbert_vpm(a, b).value
    return {"cross_ratio": abs(d - hilbert_cross_ratio(a, b)) / (1.0 + d)}


def suite_oracle(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Closed form against the cross-ratio oracle, relative to 1 + d."""
    worst = _run_trials(_oracle_trial, n, trials, seed, workers)
    return _result("oracle", trials, worst, {"cross_ratio": 1e-8}, {"n": n})


def _birkhoff_trial(rng: np.random.Generator, n: int) -> Checks:
    a, b = _sample(rng, n), _sample(rng, n)
    report = hilbert_vpm(a, b)
    big_m, small_m = birkhoff_bounds(lift(a), lift(b))
    # M of (A, B) against the largest eigenvalues of B^{-1} A and (I - B)^{-1} (I - A)
    expected_m = max(report.lambda_max, report.mu_max)
    return {
        "bisection": abs(report.value - math.log(big_m / small_m)),
        "upper_scaling": abs(big_m - expected_m) / max(1.0, expected_m),
    }


def suite_birkhoff(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Closed form against the Birkhoff bisection on the lifted cone."""
    worst = _run_trials(_birkhoff_trial, n, trials, seed, workers)
    return _result("birkhoff", trials, worst, {"bisection": 1e-6, "upper_scaling": 1e-6}, {"n": n})


def suite_interval(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """1x1 reduction against |log((1 - x) y / (x (1 - y)))| on a 10 x 10 grid."""
    grid = np.linspace(0.05, 0.95, 10)
    worst = 0.0
    for x in grid:
        for y in grid:
            a = VpmPoint(mat=SymMat(entries=x), margin=0.01)
            b = VpmPoint(mat=SymMat(entries=y), margin=0.01)
            worst = max(worst, abs(hilbert_vpm(a, b).value - hilbert_interval(float(x), float(y))))
    return _result("interval", grid.size**2, {"interval": worst}, {"interval": 1e-12})


# --- isometries and metric axioms ---


def _isometry_trial(rng: np.random.Generator, n: int) -> Checks:
    a, b = _sample(rng, n), _sample(rng, n)
    u = _orthonormal(rng, n)
    d = hilbert_vpm(a, b).value
    flipped = hilbert_vpm(vpm_isometry(a, flip=True), vpm_isometry(b, flip=True)).value
    turned = hilbert_vpm(vpm_isometry(a, u), vpm_isometry(b, u)).value
    return {"complement": abs(flipped - d), "conjugation": abs(turned - d)}


def suite_isometry(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Complement and orthonormal conjugation preserve the distance; a GL(2) congruence does not."""
    worst = _run_trials(_isometry_trial, n, trials, seed, workers)
    a, b, m = gl_congruence_witness()
    moved_a = VpmPoint(mat=congruence(a.mat, m), margin=0.01)
    moved_b = VpmPoint(mat=congruence(b.mat, m), margin=0.01)
    gap = abs(hilbert_vpm(moved_a, moved_b).value - hilbert_vpm(a, b).value)
    # the witness must move the distance by more than 0.1; report the shortfall
    worst["gl_witness_shortfall"] = max(0.0, 0.1 - gap)
    tolerances = {"complement": 1e-10, "conjugation": 1e-10, "gl_witness_shortfall": 0.0}
    return _result("isometry", trials, worst, tolerances, {"n": n, "gl_witness_gap": gap})


def _metric_trial(rng: np.random.Generator, n: int) -> Checks:
    a, b, c = _sample(rng, n), _sample(rng, n), _sample(rng, n)
    ab, ba = hilbert_vpm(a, b).value, hilbert_vpm(b, a).value
    ac, bc = hilbert_vpm(a, c).value, hilbert_vpm(b, c).value
    return {
        "symmetry": abs(ab - ba),
        "triangle": max(0.0, ac - ab - bc),
        "nonnegative": max(0.0, -min(ab, ac, bc)),
        "mobius_formula": abs(hilbert_vpm_mobius(a, b) - ab),
    }


def suite_metric(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Metric axioms on sampled triples and the equivalent Moebius formula."""
    worst = _run_trials(_metric_trial, n, trials, seed, workers)
    tolerances = {"symmetry": 1e-10, "triangle": 1e-9, "nonnegative": 0.0, "mobius_formula": 1e-10}
    return _result("metric", trials, worst, tolerances, {"n": n})


# --- enlarged bicone ---


def _eps_trial(rng: np.random.Generator, n: int) -> Checks:
    a, b = _sample(rng, n), _sample(rng, n)
    d = hilbert_vpm(a, b).value
    checks: Checks = {"monotone": 0.0, "oracle": 0.0, "boundary_finite": 0.0}
    for e in EPS_LEVELS:
        eps = EpsilonDomain(epsilon=e)
        de = hilbert_vpm_eps(a.mat, b.mat, eps)
        checks["monotone"] = max(checks["monotone"], de - d)
        checks["oracle"] = max(checks["oracle"], abs(de - hilbert_cross_ratio_eps(a.mat, b.mat, eps)) / (1.0 + de))
    # rank-deficient boundary matrix of VPM(n)
    singular = spectral_map(a.mat, lambda lam: np.where(lam == lam.min(), 0.0, lam))
    far = hilbert_vpm_eps(singular, b.mat, EpsilonDomain(epsilon=0.1))
    checks["boundary_finite"] = 0.0 if math.isfinite(far) else 1.0
    return checks


def suite_eps(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """d_eps <= d for eps in {0.01, 0.1, 1}; finite at the boundary; agrees with its own cross-ratio."""
    worst = _run_trials(_eps_trial, n, trials, seed, workers)
    tolerances = {"monotone": 1e-12, "oracle": 1e-8, "boundary_finite": 0.0}
    return _result("eps", trials, worst, tolerances, {"n": n, "eps": list(EPS_LEVELS)})


# --- transforms ---


def _central_difference(f: Callable[[SymMat], SymMat], x: SymMat, h: SymMat, step: float) -> np.ndarray:
    return (f(x + h * step).entries - f(x - h * step).entries) / (2.0 * step)


def _iota_trial(rng: np.random.Generator, n: int) -> Checks:
    a = _sample(rng, n, delta=0.1)
    x = iota_inv(a)
    u = _orthonormal(rng, n)
    raw = rng.standard_normal((n, n))
    h = SymMat(entries=raw + raw.T)
    h = h / float(np.linalg.norm(h.entries))
    step = 1e-5
    x_inv = spectral_map(x, lambda lam: 1.0 / lam)
    lam_cov = eigvals(x)
    lam_prec = eigvals(x_inv)
    return {
        "round_trip_pd": _max_abs(iota_inv(iota(x)).entries - x.entries),
        "round_trip_vpm": _max_abs(iota(iota_inv(a)).entries - a.entries),
        "complement_pullback": _max_abs(iota_inv(complement(iota(x).mat)).entries - x_inv.entries),
        "conjugation": _max_abs(conjugate(iota(x).mat, u).entries - iota(conjugate(x, u)).entries),
        "duality": max(
            _max_abs(t1_covariance(x_inv).entries - t2_precision(x).entries),
            _max_abs(t2_precision(x_inv).entries - t1_covariance(x).entries),
        ),
        "reciprocity": _max_abs(lam_cov * lam_prec[::-1] - 1.0),
        "d_iota": _max_abs(_central_difference(lambda y: iota(y).mat, x, h, step) - d_iota(x, h).entries),
        "d_iota_inv": _max_abs(_central_difference(iota_inv, a.mat, h, step) - d_iota_inv(a, h).entries),
    }


def suite_iota(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Round trips, pullback identities and differentials of iota."""
    worst = _run_trials(_iota_trial, n, trials, seed, workers)
    tolerances = {
        "round_trip_pd": 1e-10,
        "round_trip_vpm": 1e-10,
        "complement_pullback": 1e-10,
        "conjugation": 1e-10,
        "duality": 1e-10,
        "reciprocity": 1e-10,
        "d_iota": 1e-5,
        "d_iota_inv": 1e-5,
    }
    return _result("iota", trials, worst, tolerances, {"n": n})


def _airm_trial(rng: np.random.Generator, n: int) -> Checks:
    q1, q2 = iota_inv(_sample(rng, n)), iota_inv(_sample(rng, n))
    m = _invertible(rng, n)
    rho = airm(q1, q2)
    inverse = airm(spectral_map(q1, lambda lam: 1.0 / lam), spectral_map(q2, lambda lam: 1.0 / lam))
    moved = airm(congruence(q1, m), congruence(q2, m))
    return {"inversion": abs(inverse - rho), "congruence": abs(moved - rho)}


def suite_airm(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """AIRM is invariant under inversion and GL(n) congruence."""
    worst = _run_trials(_airm_trial, n, trials, seed, workers)
    return _result("airm", trials, worst, {"inversion": 1e-9, "congruence": 1e-9}, {"n": n})


# --- smallest enclosing ball ---


def _seb_trial(rng: np.random.Generator, n: int) -> Checks:
    points = [_sample(rng, 2) for _ in range(SEB_POINTS)]
    run = seb_trace(points, SEB_ITERATIONS, seed=0)
    pairwise = max(hilbert_vpm(p, q).value for i, p in enumerate(points) for q in points[i + 1 :])
    return {
        "lower_bound": max(0.0, pairwise / 2.0 - run.ball.radius),
        "step_bounded_rise": radius_rise_excess(run.radius_trace, SEB_TAIL),
        "raw_rise": radius_rise(run.radius_trace, SEB_TAIL),
    }


def suite_seb(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Two-point 1D convergence and random VPM(2) sets (the dimension flag is not used).

    The raw covering radius oscillates by O(1/k), so its largest rise over the
    tail is reported in ``raw_radius_rise`` while the gated check bounds each
    rise by the step length r_k / (k + 2).
    """
    pair = [VpmPoint(mat=SymMat(entries=0.25), margin=0.1), VpmPoint(mat=SymMat(entries=0.75), margin=0.1)]
    ball = seb_trace(pair, 2000, seed=seed).ball
    worst = _run_trials(_seb_trial, 2, trials, seed, workers)
    worst["two_point_center"] = abs(float(ball.center.entries[0, 0]) - 0.5)
    worst["two_point_radius"] = abs(ball.radius - math.log(3.0))
    tolerances = {
        "two_point_center": 1e-3,
        "two_point_radius": 1e-3,
        "lower_bound": 1e-9,
        "step_bounded_rise": 1e-6,
    }
    details = {"points": SEB_POINTS, "iterations": SEB_ITERATIONS, "raw_radius_rise": worst.get("raw_rise", 0.0)}
    return _result("seb", trials, worst, tolerances, details)


# --- Lorentz picture ---


def _lorentz_grid() -> list[SymMat]:
    """About 10^4 matrices with eigenvalues on a 0.1 grid of [0, 1] and 83 eigenvector angles."""
    values = np.linspace(0.0, 1.0, 11)
    out = []
    for theta in np.linspace(0.0, math.pi, 83, endpoint=False):
        v = np.array([math.cos(theta), math.sin(theta)])
        w = np.array([-v[1], v[0]])
        for l1 in values:
            for l2 in values:
                out.append(SymMat(entries=l1 * np.outer(v, v) + l2 * np.outer(w, w)))
    return out


def suite_lorentz(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Round trip, sheet correspondence and nesting of the eps = 0.1 export around eps = 0."""
    rng = np.random.default_rng([seed, 2])
    round_trip = 0.0
    for _ in range(trials):
        raw = rng.uniform(-1.0, 2.0, size=(2, 2))
        q = SymMat(entries=raw + raw.T)
        round_trip = max(round_trip, _max_abs(from_lorentz(to_lorentz(q)).entries - q.entries))

    grid = _lorentz_grid()
    mismatches = 0
    for q in grid:
        p = to_lorentz(q)
        rho = math.hypot(p.x, p.y)
        lam_min, lam_max = extreme_eigvals(q.entries)
        if (abs(lam_min) <= 1e-9) != (abs(p.t - rho) <= 1e-9):
            mismatches += 1
        if (abs(lam_max - 1.0) <= 1e-9) != (abs(1.0 - p.t - rho) <= 1e-9):
            mismatches += 1
        if not in_lorentz_bicone(p):
            mismatches += 1

    center = np.array([0.5, 0.0, 0.0])
    not_enclosed = 0
    off_sheet = 0.0
    for upper in (False, True):
        for p in bicone_sheet(EpsilonDomain(epsilon=0.0), 16, upper):
            u = np.array([p.t, p.x, p.y]) - center
            r = float(np.linalg.norm(u))
            direction = LorentzPoint(t=u[0] / r, x=u[1] / r, y=u[2] / r)
            off_sheet = max(off_sheet, abs(radial_extent(0.0, direction) - r))
            if radial_extent(0.1, direction) <= r:
                not_enclosed += 1

    worst = {
        "round_trip": round_trip,
        "sheet_mismatches": float(mismatches),
        "radial_on_sheet": off_sheet,
        "not_enclosed": float(not_enclosed),
    }
    tolerances = {"round_trip": 1e-14, "sheet_mismatches": 0.0, "radial_on_sheet": 1e-9, "not_enclosed": 0.0}
    return _result("lorentz", trials, worst, tolerances, {"grid_points": len(grid)})


# --- dual cone ---


def _primal_samples(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Flattened bicone points Z, read as primal cone elements (Z, 1)."""
    return np.stack([_sample(rng, n, delta=1e-3).entries.ravel() for _ in range(count)])


def suite_dual(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Dual-cone formula against inner-product positivity over sampled primal points.

    Members must pair positively with every sample; clear non-members (by more
    than the margin) must be refuted by a sample or by the constructed witness.
    """
    rng = np.random.default_rng([seed, n])
    primal = _primal_samples(rng, n, DUAL_PRIMAL_SAMPLES)
    disagreements = 0
    mismatch_example: Optional[dict] = None
    chunk = 1000
    for start in range(0, trials, chunk):
        size = min(chunk, trials - start)
        elements: list[ConeElement] = []
        for _ in range(size):
            raw = rng.standard_normal((n, n))
            y = SymMat(entries=raw + raw.T)
            mass = negative_part_mass(y)
            elements.append(ConeElement(mat=y, t=float(rng.uniform(0.0, 2.0)) * max(mass, 0.5)))
        ys = np.stack([e.mat.entries.ravel() for e in elements])
        s = np.array([e.t for e in elements])
        pairings = ys @ primal.T + s[:, None]
        for i, e in enumerate(elements):
            gap = e.t - negative_part_mass(e.mat)
            member = dual_cone_contains(e)
            if member and gap > DUAL_MARGIN and np.any(pairings[i] <= 0):
                disagreements += 1
            elif not member and gap < -DUAL_MARGIN:
                if not np.any(pairings[i] < 0) and dual_cone_witness(e) is None:
                    disagreements += 1
            if member and mismatch_example is None and not vpm_contains(SymMat(entries=e.mat.entries / e.t)):
                mismatch_example = {"Y": e.mat.entries.tolist(), "s": e.t}

    worst = {"disagreements": float(disagreements), "no_mismatch_example": 0.0 if mismatch_example else 1.0}
    tolerances = {"disagreements": 0.0, "no_mismatch_example": 0.0}
    details = {"n": n, "primal_samples": DUAL_PRIMAL_SAMPLES, "mismatch_example": mismatch_example}
    return _result("dual", trials, worst, tolerances, details)


# --- domain properties ---


def _domain_trial(rng: np.random.Generator, n: int) -> Checks:
    a, b = _sample(rng, n), _sample(rng, n)
    u = _orthonormal(rng, n)
    c = float(rng.uniform())
    tr = float(np.trace(a.entries))
    frob = float(np.sum(a.entries**2))
    raw = rng.standard_normal((n, n))
    upper = a.mat + SymMat(entries=raw.T @ raw)
    return {
        "frobenius_trace": max(0.0, frob - tr),
        "trace_dim": max(0.0, tr - n),
        "convexity": 0.0 if vpm_contains(a.mat * c + b.mat * (1.0 - c)) else 1.0,
        "automorphisms": 0.0 if vpm_contains(complement(a.mat)) and vpm_contains(conjugate(a.mat, u)) else 1.0,
        "loewner_eigen_order": max(0.0, float(np.max(eigvals(a.mat) - eigvals(upper)))),
    }


def suite_domain(n: int, trials: int, seed: int, workers: int = 1) -> SuiteResult:
    """Boundedness, convexity and automorphism closure of VPM(n); Loewner order implies eigenvalue order."""
    worst = _run_trials(_domain_trial, n, trials, seed, workers)
    tolerances = {
        "frobenius_trace": 1e-12,
        "trace_dim": 1e-12,
        "convexity": 0.0,
        "automorphisms": 0.0,
        "loewner_eigen_order": 1e-10,
    }
    return _result("domain", trials, worst, tolerances, {"n": n})


SUITES: dict[str, SuiteFn] = {
    "oracle": suite_oracle,
    "birkhoff": suite_birkhoff,
    "interval": suite_interval,
    "isometry": suite_isometry,
    "metric": suite_metric,
    "eps": suite_eps,
    "iota": suite_iota,
    "airm": suite_airm,
    "seb": suite_seb,
    "lorentz": suite_lorentz,
    "dual": suite_dual,
    "domain": suite_domain,
}

DEFAULT_TRIALS: dict[str, int] = {
    "oracle": 1000,
    "birkhoff": 1000,
    "interval": 100,
    "isometry": 1000,
    "metric": 1000,
    "eps": 1000,
    "iota": 1000,
    "airm": 500,
    "seb": 5,
    "lorentz": 1000,
    "dual": 100_000,
    "domain": 1000,
}


def run_suite(
    name: str, n: int = 3, trials: Optional[int] = None, seed: int = 0, workers: Optional[int] = None
) -> SuiteResult:
    """Run one suite by name.

    Raises:
        ValueError: If the suite name or a parameter is invalid.
    """
    if name not in SUITES:
        raise ValueError(f"unknown suite '{name}', expected one of: {', '.join(sorted(SUITES))}")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    count = DEFAULT_TRIALS[name] if trials is None else trials
    if count < 1:
        raise ValueError(f"trials must be at least 1, got {count}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")
    pool = get_settings().workers if workers is None else workers
    logger.debug("running suite %s n=%d trials=%d seed=%d workers=%d", name, n, count, seed, pool)
    return SUITES[name](n, count, seed, pool)


def run_profile(
    profile: Optional[str] = None,
    n: int = 3,
    trials: Optional[int] = None,
    seed: int = 0,
    workers: Optional[int] = None,
) -> list[SuiteResult]:
    """Run every suite enabled by ``profile`` in registry order."""
    enabled = get_enabled_suites(profile or get_settings().suite_profile)
    return [run_suite(name, n, trials, seed, workers) for name in SUITES if name in enabled]
