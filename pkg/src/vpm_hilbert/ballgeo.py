"""Hilbert geodesics on segments and the Badoiu-Clarkson smallest enclosing ball.

Straight segments are Hilbert geodesics, so the point at fraction ``s`` of the
way from A to B is found by bisecting the line parameter until
d(A, P(t)) = s d(A, B).
"""

import logging
from typing import Sequence

import numpy as np

from vpm_hilbert.config import get_settings
from vpm_hilbert.domains import certify, relaxed_margin
from vpm_hilbert.exceptions import SolverError
from vpm_hilbert.metrics import hilbert_distance_arrays, hilbert_vpm
from vpm_hilbert.models import Ball, SebRun, SymMat, VpmPoint
from vpm_hilbert.symmat import check_same_dim

logger = logging.getLogger(__name__)

# Relative slack under which two distances count as tied in ``farthest``.
TIE_TOLERANCE = 1e-12


def geodesic_point(a: VpmPoint, b: VpmPoint, s: float) -> VpmPoint:
    """Point on the segment [A, B] at Hilbert distance s d(A, B) from A.

    Raises:
        ValueError: If s is outside [0, 1].
        SolverError: If the bisection stops (step budget or float resolution) above the residual tolerance.
    """
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must satisfy 0 <= s <= 1, got {s}")
    check_same_dim(a.mat, b.mat)
    if s == 0.0:
        return a
    if s == 1.0:
        return b
    if a.mat == b.mat:
        return a

    settings = get_settings()
    target = s * hilbert_vpm(a, b).value
    diff = b.entries - a.entries
    lo, hi = 0.0, 1.0
    residual = float("inf")
    for _ in range(settings.geodesic_max_iter):
        t = 0.5 * (lo + hi)
        residual = hilbert_distance_arrays(a.entries, a.entries + t * diff) - target
        if abs(residual) <= settings.geodesic_tol or hi - lo <= np.finfo(float).eps:
            break
        if residual < 0:
            lo = t
        else:
            hi = t
    if abs(residual) > settings.geodesic_tol:
        raise SolverError(f"geodesic bisection stopped at residual {abs(residual):.3e} above {settings.geodesic_tol:g}")

    return certify(SymMat(entries=a.entries + t * diff), relaxed_margin(min(a.margin, b.margin)))


def farthest(points: Sequence[VpmPoint], c: VpmPoint) -> tuple[int, float]:
    """Index and distance of the point farthest from ``c``; ties go to the lowest index."""
    if not points:
        raise ValueError("points must be non-empty")
    dists = [hilbert_vpm(c, p).value for p in points]
    best = max(dists)
    cutoff = best - TIE_TOLERANCE * max(1.0, best)
    idx = next(i for i, d in enumerate(dists) if d >= cutoff)
    return idx, dists[idx]


def seb_trace(points: Sequence[VpmPoint], iterations: int, seed: int = 0) -> SebRun:
    """Badoiu-Clarkson geodesic cuts with the full radius history.

    Starting at points[0], step k moves the center 1 / (k + 2) of the way
    towards the current farthest point. ``radius_trace[k]`` is the covering
    radius at c_k (the last entry is the returned radius) and ``best_trace``
    its running minimum. ``seed`` is recorded only; the iteration is
    deterministic.
    """
    if not points:
        raise ValueError("points must be non-empty")
    if iterations < 1:
        raise ValueError(f"iterations must be at least 1, got {iterations}")
    check_same_dim(*(p.mat for p in points))

    center = points[0]
    radius_trace: list[float] = []
    best_trace: list[float] = []
    for k in range(iterations):
        idx, radius = farthest(points, center)
        radius_trace.append(radius)
        best_trace.append(min(radius, best_trace[-1]) if best_trace else radius)
        if radius == 0.0:
            logger.debug("seb: all points coincide with the center at k=%d", k)
            break
        center = geodesic_point(center, points[idx], 1.0 / (k + 2))
        if k % 500 == 0:
            logger.debug("seb: k=%d farthest=%d radius=%.12g", k, idx, radius)

    _, radius = farthest(points, center)
    radius_trace.append(radius)
    best_trace.append(min(radius, best_trace[-1]))
    logger.debug("seb: finished %d iterations, radius=%.12g", iterations, radius)
    return SebRun(
        ball=Ball(center=center, radius=radius),
        iterations=iterations,
        seed=seed,
        radius_trace=radius_trace,
        best_trace=best_trace,
    )


def seb_badoiu_clarkson(points: Sequence[VpmPoint], iterations: int, seed: int = 0) -> Ball:
    """Approximate smallest enclosing Hilbert ball."""
    return seb_trace(points, iterations, seed).ball


def _tail_steps(trace: Sequence[float], tail_fraction: float) -> range:
    if not 0.0 < tail_fraction <= 1.0:
        raise ValueError(f"tail_fraction must satisfy 0 < tail_fraction <= 1, got {tail_fraction}")
    steps = len(trace) - 1
    return range(steps - max(1, int(steps * tail_fraction)), steps) if steps > 0 else range(0)


def radius_rise(trace: Sequence[float], tail_fraction: float = 0.1) -> float:
    """Largest increase r_{k+1} - r_k of the covering radius over the last steps (0 if it never rises)."""
    rises = [trace[k + 1] - trace[k] for k in _tail_steps(trace, tail_fraction)]
    return max([0.0, *rises])


def radius_rise_excess(trace: Sequence[float], tail_fraction: float = 0.1) -> float:
    """Largest violation of r_{k+1} <= r_k (1 + 1/(k+2)) over the last steps.

    The covering radius is 1-Lipschitz in the center and step k moves the
    center a distance r_k / (k + 2), so a correct run stays at 0 up to the
    geodesic residual.
    """
    return max(
        (max(0.0, trace[k + 1] - trace[k] * (1.0 + 1.0 / (k + 2))) for k in _tail_steps(trace, tail_fraction)),
        default=0.0,
    )
