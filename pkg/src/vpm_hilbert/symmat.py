"""Dense symmetric-matrix core: spectral decomposition, Loewner order and pencil roots.

All functions are pure and work on immutable ``SymMat`` values. The positive
definiteness test is a Cholesky attempt and never calls an eigensolver, so it
can serve as an independent check of eigenvalue-based code.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Callable, Union

import numpy as np
import scipy.linalg
from pydantic import ValidationError

from vpm_hilbert.config import resolve_tol
from vpm_hilbert.exceptions import DegeneratePencilError, DimensionMismatchError, MatrixFormatError, SolverError
from vpm_hilbert.models import MatrixPayload, SpectralDecomp, SymMat
from vpm_hilbert.utils import format_validation_errors

logger = logging.getLogger(__name__)

MatrixLike = Union[SymMat, np.ndarray, list, float]


def as_symmat(x: MatrixLike) -> SymMat:
    """Return ``x`` as a SymMat (symmetrizing array-like input)."""
    if isinstance(x, SymMat):
        return x
    return SymMat(entries=x)


def check_same_dim(*mats: SymMat) -> int:
    """Return the common dimension or raise DimensionMismatchError."""
    dims = {m.dim for m in mats}
    if len(dims) != 1:
        raise DimensionMismatchError(f"dimension mismatch: got dimensions {sorted(dims)}")
    return dims.pop()


def sym_eigen(x: SymMat) -> SpectralDecomp:
    """Spectral decomposition of a symmetric matrix.

    Returns:
        Ascending eigenvalues and orthonormal eigenvectors (as columns).

    Raises:
        SolverError: If the eigensolver does not converge.
    """
    try:
        lam, q = scipy.linalg.eigh(x.entries)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"symmetric eigensolver failed: {e}")
    return SpectralDecomp(eigenvalues=lam, eigenvectors=q)


def eigvals(x: SymMat) -> np.ndarray:
    """Ascending eigenvalues only."""
    try:
        return scipy.linalg.eigvalsh(x.entries)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"symmetric eigensolver failed: {e}")


def extreme_eigvals(arr: np.ndarray) -> tuple[float, float]:
    """(lambda_min, lambda_max) of a symmetric ndarray."""
    lam = scipy.linalg.eigvalsh(arr)
    return float(lam[0]), float(lam[-1])


def spectral_map(x: SymMat, func: Callable[[np.ndarray], np.ndarray]) -> SymMat:
    """Apply a scalar function to the eigenvalues: Q diag(f(lambda)) Q^T."""
    decomp = sym_eigen(x)
    q = decomp.eigenvectors
    return SymMat(entries=(q * func(decomp.eigenvalues)) @ q.T)


def loewner_leq(a: SymMat, b: SymMat, tol: float | None = None) -> bool:
    """A <= B in the Loewner order, i.e. lambda_min(B - A) >= -tol."""
    check_same_dim(a, b)
    lam_min, _ = extreme_eigvals(b.entries - a.entries)
    return lam_min >= -resolve_tol(tol)


def _cholesky_ok(arr: np.ndarray) -> bool:
    try:
        scipy.linalg.cholesky(arr, lower=True, check_finite=False)
        return True
    except np.linalg.LinAlgError:
        return False


def is_pd(x: SymMat, tol: float | None = None) -> bool:
    """True iff lambda_min(X) > tol, decided by a Cholesky attempt on X - tol I."""
    return _cholesky_ok(x.entries - resolve_tol(tol) * np.eye(x.dim))


def is_psd(x: SymMat, slack: float | None = None) -> bool:
    """Closure test lambda_min(X) >= -slack, by Cholesky of X + slack I."""
    s = resolve_tol(slack)
    return _cholesky_ok(x.entries + s * np.eye(x.dim))


def _definite_factor(arr: np.ndarray) -> tuple[float, np.ndarray] | None:
    """Return (sign, L) with arr = sign * L L^T if arr is definite, else None."""
    for sign in (1.0, -1.0):
        try:
            return sign, scipy.linalg.cholesky(sign * arr, lower=True, check_finite=False)
        except np.linalg.LinAlgError:
            continue
    return None


def _whiten(arr: np.ndarray, chol: np.ndarray) -> np.ndarray:
    """L^{-1} arr L^{-T}, symmetrized."""
    half = scipy.linalg.solve_triangular(chol, arr, lower=True, check_finite=False)
    full = scipy.linalg.solve_triangular(chol, half.T, lower=True, check_finite=False)
    return 0.5 * (full + full.T)


def pencil_roots(a: SymMat, d: SymMat, tol: float | None = None) -> list[float]:
    """Real roots t of det(A + t D) = 0, with multiplicity, ascending.

    Directions with D v = 0 and A v != 0 are reported as ``math.inf``. When D is
    definite the problem reduces to the symmetric eigenproblem of L^{-1} A L^{-T}
    (D = +-L L^T); when instead A is definite the reciprocal problem is solved.
    Otherwise a QZ generalized solve is used and complex-conjugate pairs (where
    det(A + tD) has no real zero) are not reported.

    Raises:
        DimensionMismatchError: If A and D differ in size.
        DegeneratePencilError: If det(A + t D) vanishes identically.
    """
    check_same_dim(a, d)
    eps = resolve_tol(tol)
    arr_a, arr_d = a.entries, d.entries

    factor = _definite_factor(arr_d)
    if factor is not None:
        sign, chol = factor
        lam = scipy.linalg.eigvalsh(_whiten(arr_a, chol))
        return sorted(float(-v / sign) for v in lam)

    factor = _definite_factor(arr_a)
    if factor is not None:
        sign, chol = factor
        mu = scipy.linalg.eigvalsh(_whiten(arr_d, chol))
        scale = max(1.0, float(np.max(np.abs(mu))))
        roots = [math.inf if abs(m) <= eps * scale else float(-sign / m) for m in mu]
        return sorted(roots)

    logger.debug("pencil_roots: neither operand definite, using QZ on n=%d", a.dim)
    try:
        (alpha, beta) = scipy.linalg.eig(arr_a, -arr_d, right=False, homogeneous_eigvals=True)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolverError(f"generalized eigensolver failed: {e}")
    scale = max(1.0, float(np.max(np.abs(arr_a))), float(np.max(np.abs(arr_d))))
    roots: list[float] = []
    for al, be in zip(alpha, beta):
        if abs(al) <= eps * scale and abs(be) <= eps * scale:
            raise DegeneratePencilError("singular pencil: det(A + tD) vanishes for every t")
        if abs(be) <= eps * scale:
            roots.append(math.inf)
            continue
        root = al / be
        if abs(root.imag) <= math.sqrt(eps) * max(1.0, abs(root.real)):
            roots.append(float(root.real))
    return sorted(roots)


def read_matrix(path: Union[str, Path]) -> SymMat:
    """Read a matrix in the repo-wide JSON format.

    Raises:
        MatrixFormatError: On malformed JSON, wrong shape or asymmetric input.
    """
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise MatrixFormatError(f"{path}: not valid JSON ({e})")
    return parse_matrix(raw, source=str(path))


def parse_matrix(raw: Any, source: str = "input") -> SymMat:
    """Validate a decoded JSON object as a matrix payload."""
    try:
        return MatrixPayload.model_validate(raw).to_symmat()
    except ValidationError as e:
        raise MatrixFormatError(f"{source}: {format_validation_errors(e)}")


def matrix_to_payload(x: SymMat) -> dict[str, Any]:
    """Serialize a SymMat to the repo-wide JSON format."""
    return MatrixPayload.from_symmat(x).model_dump()
