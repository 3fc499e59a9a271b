"""Maps between PD(n), the bicone and Gaussian parameter spaces.

The maps are evaluated spectrally (same eigenvectors, scalar function of the
eigenvalues) rather than by forming explicit inverses:

    iota(X)        = X (I + X)^{-1}   lambda -> lambda / (1 + lambda)   (T1, covariance)
    iota^{-1}(A)   = A (I - A)^{-1}   lambda -> lambda / (1 - lambda)
    T2(P)          = (I + P)^{-1}     lambda -> 1 / (1 + lambda)        (precision)
    T2^{-1}(L)     = L^{-1} - I       lambda -> 1 / lambda - 1
"""

from typing import Optional

import numpy as np
import scipy.linalg

from vpm_hilbert.domains import certify, certify_interior, relaxed_margin, vpm_contains
from vpm_hilbert.exceptions import BoundaryError, DomainError, NotOrthonormalError, NotPositiveDefiniteError
from vpm_hilbert.models import GaussianParams, SquareMat, SymMat, VpmPoint
from vpm_hilbert.symmat import check_same_dim, is_pd, spectral_map

ORTHONORMAL_TOL = 1e-8


def _require_pd(x: SymMat, what: str = "X") -> None:
    if not is_pd(x, tol=0.0):
        raise NotPositiveDefiniteError(f"{what} must be positive definite")


def _interior(a: SymMat | VpmPoint) -> SymMat:
    if isinstance(a, VpmPoint):
        return a.mat
    if not vpm_contains(a, 0.0):
        raise BoundaryError("A must lie strictly inside VPM(n) (0 < A < I)")
    return a


def _sandwich(r: SymMat, h: SymMat) -> SymMat:
    return SymMat(entries=r.entries @ h.entries @ r.entries)


def iota(x: SymMat) -> VpmPoint:
    """iota(X) = X (I + X)^{-1}, a diffeomorphism PD(n) -> VPM(n)."""
    _require_pd(x)
    return certify_interior(spectral_map(x, lambda lam: lam / (1.0 + lam)))


def iota_inv(a: SymMat | VpmPoint) -> SymMat:
    """iota^{-1}(A) = A (I - A)^{-1}, back to PD(n)."""
    return spectral_map(_interior(a), lambda lam: lam / (1.0 - lam))


def d_iota(x: SymMat, h: SymMat) -> SymMat:
    """Differential of iota at X: (I + X)^{-1} H (I + X)^{-1}."""
    check_same_dim(x, h)
    _require_pd(x)
    return _sandwich(spectral_map(x, lambda lam: 1.0 / (1.0 + lam)), h)


def d_iota_inv(a: SymMat | VpmPoint, h: SymMat) -> SymMat:
    """Differential of iota^{-1} at A: (I - A)^{-1} H (I - A)^{-1}."""
    mat = _interior(a)
    check_same_dim(mat, h)
    return _sandwich(spectral_map(mat, lambda lam: 1.0 / (1.0 - lam)), h)


def t1_covariance(sigma: SymMat) -> VpmPoint:
    """Covariance reading L(Sigma) = Sigma (I + Sigma)^{-1}."""
    return iota(sigma)


def t2_precision(p: SymMat) -> VpmPoint:
    """Precision reading L(P) = (I + P)^{-1}."""
    _require_pd(p, "P")
    return certify_interior(spectral_map(p, lambda lam: 1.0 / (1.0 + lam)))


def covariance_from_vpm(a: SymMat | VpmPoint) -> SymMat:
    """Sigma(L) = L (I - L)^{-1}."""
    return iota_inv(a)


def precision_from_vpm(a: SymMat | VpmPoint) -> SymMat:
    """P(L) = L^{-1} - I."""
    return spectral_map(_interior(a), lambda lam: 1.0 / lam - 1.0)


def mobius(a: SymMat, b: SymMat) -> SquareMat:
    """Matrix Moebius transformation Mob(A, B) = (I - A)^{-1} (I - B); generally nonsymmetric.

    Raises:
        DomainError: If I - A is singular.
    """
    n = check_same_dim(a, b)
    eye = np.eye(n)
    try:
        out = scipy.linalg.solve(eye - a.entries, eye - b.entries)
    except np.linalg.LinAlgError as e:
        raise DomainError(f"I - A must be invertible: {e}")
    return SquareMat(entries=out)


def mobius_eigenvalues(a: SymMat, b: SymMat) -> np.ndarray:
    """Ascending real spectrum of Mob(A, B) for A in VPM(n), via the pencil (I - B, I - A)."""
    n = check_same_dim(a, b)
    eye = np.eye(n)
    try:
        return scipy.linalg.eigh(eye - b.entries, eye - a.entries, eigvals_only=True)
    except np.linalg.LinAlgError as e:
        raise BoundaryError(f"I - A must be positive definite: {e}")


def complement(x: SymMat) -> SymMat:
    """I - X."""
    return SymMat(entries=np.eye(x.dim) - x.entries)


def _check_orthonormal(u: SquareMat) -> None:
    err = float(np.max(np.abs(u.entries.T @ u.entries - np.eye(u.dim))))
    if err > ORTHONORMAL_TOL:
        raise NotOrthonormalError(f"U must be orthonormal: max |U^T U - I| = {err:.3e} exceeds {ORTHONORMAL_TOL:g}")


def conjugate(x: SymMat, u: SquareMat) -> SymMat:
    """U^T X U for orthonormal U."""
    if x.dim != u.dim:
        check_same_dim(x, SymMat.identity(u.dim))
    _check_orthonormal(u)
    return SymMat(entries=u.entries.T @ x.entries @ u.entries)


def congruence(x: SymMat, m: SquareMat) -> SymMat:
    """M^T X M for any invertible M (not an isometry of VPM(n) in general)."""
    if x.dim != m.dim:
        check_same_dim(x, SymMat.identity(m.dim))
    if np.linalg.matrix_rank(m.entries) < m.dim:
        raise DomainError("M must be invertible")
    return SymMat(entries=m.entries.T @ x.entries @ m.entries)


def vpm_isometry(p: VpmPoint, u: Optional[SquareMat] = None, flip: bool = False) -> VpmPoint:
    """Apply U^T ((1 - e) X + e (I - X)) U with e = 1 if ``flip`` else 0.

    Compositions of the identity complement and orthonormal conjugation; the
    certification margin carries over.
    """
    x = complement(p.mat) if flip else p.mat
    if u is not None:
        x = conjugate(x, u)
    return certify(x, relaxed_margin(p.margin))


def calvo_oller(g: GaussianParams) -> SymMat:
    """Embed N(mu, Sigma) as [[Sigma + mu mu^T, mu], [mu^T, 1]] in PD(n + 1).

    Raises:
        NotPositiveDefiniteError: If the embedded matrix fails a Cholesky test.
    """
    n = g.dim
    mu = g.mean
    out = np.empty((n + 1, n + 1))
    out[:n, :n] = g.covariance.entries + np.outer(mu, mu)
    out[:n, n] = mu
    out[n, :n] = mu
    out[n, n] = 1.0
    embedded = SymMat(entries=out)
    _require_pd(embedded, "embedded Gaussian")
    return embedded
