"""Closed-form distances: Hilbert VPM, Birkhoff PD, AIRM, the eps-enlarged family and 1D/simplex references.

Every product X^{-1} Y is evaluated as the symmetric-definite pencil (Y, X),
i.e. through the Cholesky similarity L^{-1} Y L^{-T}, so the spectra are real
by construction even near the boundary.

The eps-enlarged distance uses the affine map X -> (X + eps I) / (1 + 2 eps),
which carries VPM_eps(n) onto VPM(n). Hilbert distances are cross-ratios of
collinear points and affine isomorphisms preserve both collinearity and ratios
along a line, so the distance of VPM_eps is the VPM distance of the images.
"""

import math
from typing import Literal, Sequence

import numpy as np
import scipy.linalg

from vpm_hilbert.config import get_settings
from vpm_hilbert.domains import vpm_eps_contains
from vpm_hilbert.exceptions import BoundaryError, DomainError, NotPositiveDefiniteError
from vpm_hilbert.models import DistanceReport, EpsilonDomain, GaussianParams, SquareMat, SymMat, VpmPoint
from vpm_hilbert.symmat import check_same_dim, is_pd
from vpm_hilbert.transforms import calvo_oller, mobius_eigenvalues, t1_covariance, t2_precision


def _pencil_extremes(a: np.ndarray, b: np.ndarray) -> tuple[float, float]:
    """Extreme eigenvalues of B^{-1} A for symmetric A and positive-definite B."""
    try:
        lam = scipy.linalg.eigh(a, b, eigvals_only=True, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise BoundaryError(f"matrix pencil is not definite: {e}")
    return float(lam[0]), float(lam[-1])


def _hilbert_report(a: np.ndarray, b: np.ndarray) -> DistanceReport:
    eye = np.eye(a.shape[0])
    lam_min, lam_max = _pencil_extremes(a, b)
    mu_min, mu_max = _pencil_extremes(eye - a, eye - b)
    if min(lam_min, mu_min) <= 0:
        raise BoundaryError("points are not strictly inside VPM(n): a pencil eigenvalue is not positive")
    return DistanceReport.from_extremes(lam_min, lam_max, mu_min, mu_max)


def hilbert_distance_arrays(a: np.ndarray, b: np.ndarray) -> float:
    """Hilbert VPM distance of two raw interior arrays (no certification)."""
    if np.array_equal(a, b):
        return 0.0
    return _hilbert_report(a, b).value


def _check_certified(*points: VpmPoint) -> None:
    floor = get_settings().margin
    for p in points:
        if p.margin < floor:
            raise BoundaryError(f"certification margin {p.margin:g} is below {floor:g}; distance would be unbounded")


def hilbert_vpm(a: VpmPoint, b: VpmPoint) -> DistanceReport:
    """Hilbert distance on VPM(n).

    d(A, B) = log(max(lambda_max, mu_max) / min(lambda_min, mu_min)) with lambda the
    spectrum of B^{-1} A and mu the spectrum of (I - B)^{-1} (I - A).

    Raises:
        DimensionMismatchError: If A and B differ in size.
        BoundaryError: If a point is not certified with the configured margin.
    """
    check_same_dim(a.mat, b.mat)
    _check_certified(a, b)
    if a.mat == b.mat:
        return DistanceReport(value=0.0, lambda_min=1.0, lambda_max=1.0, mu_min=1.0, mu_max=1.0)
    return _hilbert_report(a.entries, b.entries)


def hilbert_vpm_mobius(a: VpmPoint, b: VpmPoint) -> float:
    """Same distance through A^{-1} B and the Moebius matrix (I - A)^{-1} (I - B)."""
    check_same_dim(a.mat, b.mat)
    _check_certified(a, b)
    lam_min, lam_max = _pencil_extremes(b.entries, a.entries)
    mu = mobius_eigenvalues(a.mat, b.mat)
    return max(math.log(max(lam_max, float(mu[-1])) / min(lam_min, float(mu[0]))), 0.0)


def eps_rescale(x: SymMat, eps: EpsilonDomain) -> np.ndarray:
    """The affine map (X + eps I) / (1 + 2 eps) from VPM_eps(n) onto VPM(n)."""
    e = eps.epsilon
    return (x.entries + e * np.eye(x.dim)) / (1.0 + 2.0 * e)


def hilbert_vpm_eps(a: SymMat, b: SymMat, eps: EpsilonDomain) -> float:
    """Hilbert distance of the enlarged bicone -eps I < X < (1 + eps) I.

    Finite for boundary points of VPM(n) when eps > 0, and never larger than the
    VPM(n) distance of interior points. eps = 0 reduces to ``hilbert_vpm``.

    Raises:
        BoundaryError: If A or B is not inside VPM_eps(n).
    """
    check_same_dim(a, b)
    for name, x in (("A", a), ("B", b)):
        if not vpm_eps_contains(x, eps):
            raise BoundaryError(f"{name} is not inside VPM_eps(n) for eps={eps.epsilon:g}")
    if a == b:
        return 0.0
    return _hilbert_report(eps_rescale(a, eps), eps_rescale(b, eps)).value


def _require_pd(**mats: SymMat) -> None:
    for name, m in mats.items():
        if not is_pd(m, tol=0.0):
            raise NotPositiveDefiniteError(f"{name} must be positive definite")


def birkhoff_pd(p: SymMat, q: SymMat) -> float:
    """Birkhoff projective distance on PD(n): log(lambda_max / lambda_min) of Q^{-1} P."""
    check_same_dim(p, q)
    _require_pd(P=p, Q=q)
    lam_min, lam_max = _pencil_extremes(p.entries, q.entries)
    return max(math.log(lam_max / lam_min), 0.0)


def airm(q1: SymMat, q2: SymMat) -> float:
    """Affine-invariant Riemannian distance sqrt(sum log^2 lambda_i(Q1 Q2^{-1}))."""
    check_same_dim(q1, q2)
    _require_pd(Q1=q1, Q2=q2)
    lam = scipy.linalg.eigh(q1.entries, q2.entries, eigvals_only=True)
    return float(np.sqrt(np.sum(np.log(lam) ** 2)))


def hilbert_interval(x: float, y: float) -> float:
    """Hilbert distance on the open unit interval: |log((1 - x) y / (x (1 - y)))|."""
    for name, v in (("x", x), ("y", y)):
        if not 0.0 < v < 1.0:
            raise BoundaryError(f"{name}={v} is not in the open interval (0, 1)")
    return abs(math.log((1.0 - x) * y / (x * (1.0 - y))))


def _positive_vector(name: str, v: Sequence[float]) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError(f"{name} must be a non-empty vector")
    if np.any(arr <= 0):
        raise DomainError(f"{name} must have strictly positive entries")
    return arr


def birkhoff_orthant(p: Sequence[float], q: Sequence[float]) -> float:
    """Birkhoff distance on the positive orthant: log max_{i,j} p_i q_j / (q_i p_j)."""
    pa, qa = _positive_vector("p", p), _positive_vector("q", q)
    if pa.shape != qa.shape:
        raise DomainError(f"p and q differ in length ({pa.size} vs {qa.size})")
    ratio = pa / qa
    return max(math.log(float(ratio.max()) / float(ratio.min())), 0.0)


def hilbert_simplex(p: Sequence[float], q: Sequence[float]) -> float:
    """Hilbert distance on the open probability simplex."""
    pa, qa = _positive_vector("p", p), _positive_vector("q", q)
    for name, v in (("p", pa), ("q", qa)):
        if abs(float(v.sum()) - 1.0) > 1e-9:
            raise DomainError(f"{name} must sum to 1, got {float(v.sum())}")
    return birkhoff_orthant(pa, qa)


def hilbert_pd(p: SymMat, q: SymMat, parameterization: Literal["covariance", "precision"] = "covariance") -> float:
    """Hilbert VPM distance between PD matrices read as covariances (T1) or precisions (T2)."""
    if parameterization == "covariance":
        return hilbert_vpm(t1_covariance(p), t1_covariance(q)).value
    if parameterization == "precision":
        return hilbert_vpm(t2_precision(p), t2_precision(q)).value
    raise ValueError(f"unknown parameterization: {parameterization}")


def hilbert_gaussian(g1: GaussianParams, g2: GaussianParams) -> float:
    """Distance of full Gaussians: Calvo-Oller embedding into PD(n+1), then T1 into VPM(n+1)."""
    return hilbert_vpm(t1_covariance(calvo_oller(g1)), t1_covariance(calvo_oller(g2))).value


def pairwise_hilbert(points: Sequence[VpmPoint]) -> np.ndarray:
    """Symmetric matrix of pairwise Hilbert VPM distances."""
    k = len(points)
    out = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1, k):
            out[i, j] = out[j, i] = hilbert_vpm(points[i], points[j]).value
    return out


def gl_congruence_witness() -> tuple[VpmPoint, VpmPoint, SquareMat]:
    """(A, B, M) with M^T A M, M^T B M in VPM(2) but a different Hilbert distance.

    A = I/2, B = 0.6 I give log(1.5); under M = 0.2 I the images 0.02 I and
    0.024 I are at log(1.2049...), so GL(n) congruence is not an isometry.
    """
    a = VpmPoint(mat=SymMat.identity(2) * 0.5, margin=0.1)
    b = VpmPoint(mat=SymMat.identity(2) * 0.6, margin=0.1)
    return a, b, SquareMat(entries=0.2 * np.eye(2))
