"""Lorentz-bicone picture of VPM(2) and CSV exporters for bicone and ball figures.

A 2x2 symmetric matrix [[a, c], [c, b]] maps linearly to (t, x, y) =
((a + b) / 2, (a - b) / 2, c). Its eigenvalues are t -/+ sqrt(x^2 + y^2), so
PSD(2) becomes the Lorentz cone t >= sqrt(x^2 + y^2) and the closed bicone
becomes that cone intersected with its mirror image about t = 1/2.
"""

import csv
import logging
import math
from pathlib import Path
from typing import Optional, Union

import numpy as np

from vpm_hilbert.config import get_settings
from vpm_hilbert.domains import certify_interior
from vpm_hilbert.exceptions import BoundaryError, DimensionMismatchError
from vpm_hilbert.metrics import hilbert_distance_arrays
from vpm_hilbert.models import Ball, EpsilonDomain, ExportReport, LorentzPoint, SymMat, VpmPoint
from vpm_hilbert.symmat import check_same_dim, pencil_roots
from vpm_hilbert.utils import format_float

logger = logging.getLogger(__name__)

CSV_HEADER = ("t", "x", "y", "label")
BICONE_CENTER = LorentzPoint(t=0.5, x=0.0, y=0.0)
MIN_RESOLUTION = 8

# Fraction of the distance to the boundary searched for a sphere point.
_BOUNDARY_BACKOFF = 1e-12


def to_lorentz(q: SymMat) -> LorentzPoint:
    """Lorentz coordinates of a 2x2 symmetric matrix."""
    if q.dim != 2:
        raise DimensionMismatchError(f"Lorentz coordinates need a 2x2 matrix, got {q.dim}x{q.dim}")
    a, b, c = q.entries[0, 0], q.entries[1, 1], q.entries[0, 1]
    return LorentzPoint(t=float((a + b) / 2), x=float((a - b) / 2), y=float(c))


def from_lorentz(p: LorentzPoint) -> SymMat:
    """The matrix [[t + x, y], [y, t - x]]."""
    return SymMat(entries=[[p.t + p.x, p.y], [p.y, p.t - p.x]])


def in_lorentz_bicone(p: LorentzPoint, eps: float = 0.0, tol: float = 1e-9) -> bool:
    """Closed membership of the (eps-enlarged) bicone: -eps <= t -/+ rho <= 1 + eps."""
    rho = math.hypot(p.x, p.y)
    return p.t - rho >= -eps - tol and p.t + rho <= 1.0 + eps + tol


def radial_extent(eps: float, direction: LorentzPoint) -> float:
    """Largest r with center + r * direction in the closed eps-bicone (center (1/2, 0, 0)).

    Along the ray the eigenvalues are 1/2 + r (u_t -/+ rho_u), so the binding
    constraint gives (1/2 + eps) / (rho_u + |u_t|).
    """
    rho = math.hypot(direction.x, direction.y)
    speed = rho + abs(direction.t)
    if speed == 0.0:
        raise ValueError("direction must be non-zero")
    return (0.5 + eps) / speed


def _write_rows(path: Union[str, Path], rows: list[tuple[LorentzPoint, str]]) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for p, label in rows:
            writer.writerow([format_float(p.t), format_float(p.x), format_float(p.y), label])


def bicone_sheet(eps: EpsilonDomain, resolution: int, upper: bool) -> list[LorentzPoint]:
    """Sample one boundary sheet of VPM_eps(2).

    The lower sheet pins the eigenvalue along angle theta to -eps, the upper
    sheet pins it to 1 + eps; the other eigenvalue runs over [-eps, 1 + eps].
    """
    e = eps.epsilon
    pinned = 1.0 + e if upper else -e
    points: list[LorentzPoint] = []
    for theta in np.linspace(0.0, math.pi, resolution, endpoint=False):
        v = np.array([math.cos(theta), math.sin(theta)])
        w = np.array([-v[1], v[0]])
        for lam in np.linspace(-e, 1.0 + e, resolution):
            q = SymMat(entries=pinned * np.outer(v, v) + lam * np.outer(w, w))
            points.append(to_lorentz(q))
    return points


def export_bicone(eps: EpsilonDomain, resolution: int, path: Union[str, Path]) -> ExportReport:
    """Write both boundary sheets of VPM_eps(2) as CSV rows (t, x, y, label).

    Raises:
        ValueError: If resolution < 8.
        OSError: If ``path`` cannot be written.
    """
    if resolution < MIN_RESOLUTION:
        raise ValueError(f"resolution must be at least {MIN_RESOLUTION}, got {resolution}")
    rows = [(p, "lower") for p in bicone_sheet(eps, resolution, upper=False)]
    rows += [(p, "upper") for p in bicone_sheet(eps, resolution, upper=True)]
    _write_rows(path, rows)
    logger.debug("export_bicone: wrote %d rows to %s", len(rows), path)
    return ExportReport(path=str(path), rows=len(rows))


def fibonacci_directions(count: int) -> list[LorentzPoint]:
    """Roughly uniform unit directions in (t, x, y) space."""
    golden = math.pi * (3.0 - math.sqrt(5.0))
    out = []
    for i in range(count):
        t = 1.0 - 2.0 * (i + 0.5) / count
        r = math.sqrt(max(0.0, 1.0 - t * t))
        phi = golden * i
        out.append(LorentzPoint(t=t, x=r * math.cos(phi), y=r * math.sin(phi)))
    return out


def _exit_parameter(center: SymMat, direction: SymMat) -> float:
    """Smallest r > 0 at which center + r * direction reaches the boundary of VPM(n)."""
    eye = SymMat.identity(center.dim)
    roots = pencil_roots(center, direction) + pencil_roots(eye - center, -direction)
    positive = [r for r in roots if r > 0]
    return min(positive) if positive else math.inf


def sphere_point(center: VpmPoint, direction: SymMat, radius: float) -> Optional[VpmPoint]:
    """Point center + r * direction at Hilbert distance ``radius`` from the center.

    Returns None when no such point is found before the boundary.
    """
    check_same_dim(center.mat, direction)
    if radius == 0.0:
        return center
    settings = get_settings()
    r_max = _exit_parameter(center.mat, direction)
    if not math.isfinite(r_max):
        return None
    c, h = center.entries, direction.entries

    def dist(r: float) -> float:
        try:
            return hilbert_distance_arrays(c, c + r * h)
        except BoundaryError:
            # numerically on the boundary
            return math.inf

    lo, hi = 0.0, r_max * (1.0 - _BOUNDARY_BACKOFF)
    if dist(hi) < radius:
        return None
    residual = math.inf
    for _ in range(settings.geodesic_max_iter):
        r = 0.5 * (lo + hi)
        residual = dist(r) - radius
        if abs(residual) <= settings.geodesic_tol or hi - lo <= np.finfo(float).eps * r_max:
            break
        if residual < 0:
            lo = r
        else:
            hi = r
    if abs(residual) > settings.geodesic_tol:
        logger.debug("sphere_point: bisection stopped at residual %.3e", abs(residual))
        return None

    try:
        return certify_interior(SymMat(entries=c + r * h))
    except BoundaryError:
        return None


def export_ball_boundary(b: Ball, resolution: int, path: Union[str, Path]) -> ExportReport:
    """Write Lorentz coordinates of the Hilbert sphere of ``b`` as CSV rows labelled ``sphere``.

    Directions whose sphere point cannot be reached inside VPM(2) are skipped
    and listed in the report.
    """
    if b.center.dim != 2:
        raise DimensionMismatchError(f"ball export needs a 2x2 center, got {b.center.dim}x{b.center.dim}")
    if resolution < 1:
        raise ValueError(f"resolution must be at least 1, got {resolution}")
    rows: list[tuple[LorentzPoint, str]] = []
    skipped: list[int] = []
    for i, u in enumerate(fibonacci_directions(resolution)):
        p = sphere_point(b.center, from_lorentz(u), b.radius)
        if p is None:
            logger.debug("export_ball_boundary: direction %d skipped (radius beyond boundary)", i)
            skipped.append(i)
            continue
        rows.append((to_lorentz(p.mat), "sphere"))
    _write_rows(path, rows)
    if skipped:
        logger.warning("export_ball_boundary: skipped %d of %d directions", len(skipped), resolution)
    return ExportReport(path=str(path), rows=len(rows), skipped=skipped)
