"""Membership, sampling and projection for PD(n), VPM(n), VPM_eps(n) and the lifted cone C_n.

Membership tests are strict with an optional margin: the Hilbert distance blows
up at the boundary, so callers work with certified interior points
(``VpmPoint``) and opt into ``margin=0`` for raw checks.

The dual cone C_n* = {(Y, s) : tr(XY) + ts > 0 for all (X, t) in C_n} is
decided by s > sum of |lambda_i(Y)| over the negative eigenvalues of Y, since
inf over Z in VPM(n) of tr(ZY) equals the sum of the negative eigenvalues.
"""

from typing import Optional

import numpy as np
from pydantic import ValidationError

from vpm_hilbert.config import get_settings, resolve_tol
from vpm_hilbert.exceptions import BoundaryError
from vpm_hilbert.models import ConeElement, EpsilonDomain, SymMat, VpmPoint
from vpm_hilbert.symmat import eigvals, extreme_eigvals, is_psd, spectral_map
from vpm_hilbert.utils import format_validation_errors

# Relative shrink of a requested margin when certifying reconstructed matrices,
# whose computed eigenvalues may sit a rounding error below the clip level.
_ROUNDING_SHRINK = 1e-9


def relaxed_margin(margin: float) -> float:
    """Margin to certify a matrix whose eigenvalues are known to be >= margin up to rounding."""
    return margin * (1.0 - _ROUNDING_SHRINK)


def vpm_contains(x: SymMat, margin: float = 0.0) -> bool:
    """True iff margin < lambda_min(X) and lambda_max(X) < 1 - margin."""
    lam_min, lam_max = extreme_eigvals(x.entries)
    return margin < lam_min and lam_max < 1.0 - margin


def vpm_eps_contains(x: SymMat, eps: EpsilonDomain, margin: float = 0.0) -> bool:
    """True iff -eps + margin < lambda_min(X) and lambda_max(X) < 1 + eps - margin."""
    lam_min, lam_max = extreme_eigvals(x.entries)
    return -eps.epsilon + margin < lam_min and lam_max < 1.0 + eps.epsilon - margin


def certify(x: SymMat, margin: Optional[float] = None) -> VpmPoint:
    """Certify ``x`` as an interior bicone point.

    Args:
        x: Candidate matrix.
        margin: Required slack from the boundary (defaults to the configured margin).

    Raises:
        BoundaryError: If margin <= lambda(X) <= 1 - margin fails.
    """
    m = get_settings().margin if margin is None else margin
    try:
        return VpmPoint(mat=x, margin=m)
    except ValidationError as e:
        raise BoundaryError(f"point is not certified inside VPM(n): {format_validation_errors(e)}")


def certify_interior(x: SymMat) -> VpmPoint:
    """Certify ``x`` with half the slack its spectrum actually has from the boundary.

    Raises:
        BoundaryError: If ``x`` is not strictly inside VPM(n).
    """
    lam_min, lam_max = extreme_eigvals(x.entries)
    margin = 0.5 * min(lam_min, 1.0 - lam_max)
    if not margin > 0:
        raise BoundaryError(f"eigenvalues [{lam_min:g}, {lam_max:g}] are not strictly inside (0, 1)")
    return VpmPoint(mat=x, margin=margin)


def random_orthonormal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Orthonormalize a Gaussian matrix (QR with sign fix)."""
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


def sample_vpm(n: int, seed: int, delta: float) -> VpmPoint:
    """Deterministic sample Q^T diag(lambda) Q with lambda_i ~ U[delta, 1 - delta].

    Not uniform on VPM(n); only reproducible.
    """
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must satisfy 0 < delta < 0.5, got {delta}")
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    q = random_orthonormal(n, rng)
    lam = rng.uniform(delta, 1.0 - delta, size=n)
    return VpmPoint(mat=SymMat(entries=(q.T * lam) @ q), margin=relaxed_margin(delta))


def project_to_vpm(x: SymMat, delta: float) -> VpmPoint:
    """Clip the eigenvalues of ``x`` into [delta, 1 - delta], keeping its eigenvectors."""
    if not 0 < delta < 0.5:
        raise ValueError(f"delta must satisfy 0 < delta < 0.5, got {delta}")
    lam = eigvals(x)
    if lam[0] >= delta and lam[-1] <= 1.0 - delta:
        return VpmPoint(mat=x, margin=delta)
    clipped = spectral_map(x, lambda v: np.clip(v, delta, 1.0 - delta))
    return VpmPoint(mat=clipped, margin=relaxed_margin(delta))


def lift(x: SymMat | VpmPoint, t: float = 1.0) -> ConeElement:
    """The cone element (tX, t) over a bicone point."""
    mat = x.mat if isinstance(x, VpmPoint) else x
    return ConeElement(mat=SymMat(entries=t * mat.entries), t=t)


def cone_contains(e: ConeElement) -> bool:
    """True iff t > 0 and Y / t lies in VPM(n)."""
    if e.t <= 0:
        return False
    return vpm_contains(SymMat(entries=e.mat.entries / e.t), 0.0)


def lifted_closure_contains(e: ConeElement, slack: float | None = None) -> bool:
    """Closure membership of C_n: t >= 0, Y >= 0 and t I - Y >= 0.

    Uses Cholesky factorizations only, never an eigensolver.
    """
    s = resolve_tol(slack)
    if e.t < -s:
        return False
    eye = np.eye(e.dim)
    return is_psd(e.mat, s) and is_psd(SymMat(entries=e.t * eye - e.mat.entries), s)


def dual_pairing(x: ConeElement, y: ConeElement) -> float:
    """<(X, t), (Y, s)> = tr(XY) + ts."""
    return float(np.sum(x.mat.entries * y.mat.entries)) + x.t * y.t


def negative_part_mass(y: SymMat) -> float:
    """Sum of |lambda_i(Y)| over the negative eigenvalues of Y."""
    lam = eigvals(y)
    return float(-np.sum(lam[lam < 0]))


def dual_cone_contains(e: ConeElement) -> bool:
    """True iff s > sum_{lambda_i(Y) < 0} |lambda_i(Y)|."""
    return e.t > negative_part_mass(e.mat)


def dual_cone_witness(e: ConeElement, shrink: Optional[float] = None) -> Optional[ConeElement]:
    """A primal element (Z, 1) of C_n with negative pairing against a non-member of C_n*.

    Z shares the eigenvectors of Y and puts eigenvalue 1 - shrink on the negative
    eigenspace and ``shrink`` elsewhere, approaching the infimizing boundary
    projector from inside VPM(n). By default ``shrink`` is sized from the gap
    between s and the negative-part mass so the pairing is guaranteed negative.
    Returns None when ``e`` is in the dual cone, or when an explicit ``shrink``
    is too coarse to produce a negative pairing.
    """
    lam = eigvals(e.mat)
    mass = float(-np.sum(lam[lam < 0]))
    if e.t > mass:
        return None
    if shrink is None:
        total = float(np.sum(np.abs(lam)))
        shrink = min(0.25, 0.25 * (mass - e.t) / (total + 1.0))
        if shrink <= 0:
            return None
    z = spectral_map(e.mat, lambda v: np.where(v < 0, 1.0 - shrink, shrink))
    witness = ConeElement(mat=z, t=1.0)
    if dual_pairing(witness, e) >= 0:
        return None
    return witness
