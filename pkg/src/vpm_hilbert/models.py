"""Pydantic value types shared across vpm-hilbert."""

import math
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

# Relative asymmetry absorbed by symmetrization; anything larger is a user error.
ASYMMETRY_THRESHOLD = 1e-8


def _frozen_array(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


def _square_array(v: Any) -> np.ndarray:
    """Coerce input to a finite, square float matrix (scalars become 1x1)."""
    if isinstance(v, (SymMat, SquareMat)):
        v = v.entries
    arr = np.array(v, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"matrix must be square, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError("matrix dimension must be at least 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix entries must be finite")
    return arr


def relative_asymmetry(arr: np.ndarray) -> float:
    """Max |M - M^T| relative to max(1, max |M|)."""
    scale = max(1.0, float(np.max(np.abs(arr))))
    return float(np.max(np.abs(arr - arr.T))) / scale


class SymMat(BaseModel):
    """Dense real symmetric matrix; stored symmetrized and read-only."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def validate_entries(cls, v: Any) -> np.ndarray:
        """Validate squareness and symmetry, then store (M + M^T) / 2."""
        arr = _square_array(v)
        asym = relative_asymmetry(arr)
        if asym > ASYMMETRY_THRESHOLD:
            raise ValueError(f"matrix is not symmetric: relative asymmetry {asym:.3e} exceeds {ASYMMETRY_THRESHOLD:g}")
        return _frozen_array(0.5 * (arr + arr.T))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    @classmethod
    def identity(cls, n: int) -> "SymMat":
        return cls(entries=np.eye(n))

    @classmethod
    def diag(cls, values: Any) -> "SymMat":
        return cls(entries=np.diag(np.atleast_1d(np.asarray(values, dtype=float))))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SymMat):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def __add__(self, other: "SymMat") -> "SymMat":
        return SymMat(entries=self.entries + other.entries)

    def __sub__(self, other: "SymMat") -> "SymMat":
        return SymMat(entries=self.entries - other.entries)

    def __mul__(self, c: float) -> "SymMat":
        return SymMat(entries=c * self.entries)

    __rmul__ = __mul__

    def __truediv__(self, c: float) -> "SymMat":
        return SymMat(entries=self.entries / c)

    def __neg__(self) -> "SymMat":
        return SymMat(entries=-self.entries)


class SquareMat(BaseModel):
    """Dense real square matrix, not necessarily symmetric."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def validate_entries(cls, v: Any) -> np.ndarray:
        """Validate squareness and finiteness."""
        return _frozen_array(_square_array(v))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SquareMat):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())


class SpectralDecomp(BaseModel):
    """Ascending eigenvalues with orthonormal eigenvectors (columns)."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @model_validator(mode="after")
    def validate_shapes(self) -> "SpectralDecomp":
        """Validate that eigenvalues are sorted and match the eigenvector basis."""
        n = self.eigenvalues.shape[0]
        if self.eigenvectors.shape != (n, n):
            raise ValueError("eigenvectors must form an n x n matrix")
        if n > 1 and np.any(np.diff(self.eigenvalues) < 0):
            raise ValueError("eigenvalues must be in ascending order")
        return self

    def reconstruct(self) -> np.ndarray:
        """Return Q diag(lambda) Q^T."""
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


class VpmPoint(BaseModel):
    """A symmetric matrix certified strictly inside the bicone: margin <= lambda <= 1 - margin."""

    model_config = ConfigDict(frozen=True)

    mat: SymMat
    margin: float = Field(gt=0, lt=0.5)

    @model_validator(mode="after")
    def validate_certified(self) -> "VpmPoint":
        """Validate the eigenvalue certificate."""
        lam = np.linalg.eigvalsh(self.mat.entries)
        if lam[0] < self.margin or lam[-1] > 1.0 - self.margin:
            raise ValueError(
                f"eigenvalues [{lam[0]:.6g}, {lam[-1]:.6g}] are not inside "
                f"[{self.margin:g}, {1.0 - self.margin:g}] (0 < X < I with margin)"
            )
        return self

    @property
    def entries(self) -> np.ndarray:
        return self.mat.entries

    @property
    def dim(self) -> int:
        return self.mat.dim


class EpsilonDomain(BaseModel):
    """The enlarged bicone -eps I <= X <= (1 + eps) I."""

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(default=0.0, ge=0)


class ConeElement(BaseModel):
    """An element (Y, t) of Sym(n) x R; membership in a cone is a query, not an invariant."""

    model_config = ConfigDict(frozen=True)

    mat: SymMat
    t: float

    @property
    def dim(self) -> int:
        return self.mat.dim


class DistanceReport(BaseModel):
    """Hilbert VPM distance with the four extreme eigenvalues that produced it."""

    model_config = ConfigDict(frozen=True)

    value: float = Field(ge=0)
    lambda_min: float = Field(gt=0)
    lambda_max: float = Field(gt=0)
    mu_min: float = Field(gt=0)
    mu_max: float = Field(gt=0)

    @model_validator(mode="after")
    def validate_ordering(self) -> "DistanceReport":
        """Validate the extreme eigenvalues are ordered."""
        if self.lambda_min > self.lambda_max or self.mu_min > self.mu_max:
            raise ValueError("extreme eigenvalues must satisfy min <= max")
        return self

    @classmethod
    def from_extremes(cls, lambda_min: float, lambda_max: float, mu_min: float, mu_max: float) -> "DistanceReport":
        """Build the report; value = log(max(lambda_max, mu_max) / min(lambda_min, mu_min))."""
        value = math.log(max(lambda_max, mu_max) / min(lambda_min, mu_min))
        return cls(
            value=max(value, 0.0),
            lambda_min=lambda_min,
            lambda_max=lambda_max,
            mu_min=mu_min,
            mu_max=mu_max,
        )


class GaussianParams(BaseModel):
    """Mean vector and positive-definite covariance of a full Gaussian."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    mean: np.ndarray
    covariance: SymMat

    @field_validator("mean", mode="before")
    @classmethod
    def validate_mean(cls, v: Any) -> np.ndarray:
        """Coerce the mean to a finite 1-D float vector."""
        arr = np.atleast_1d(np.array(v, dtype=float))
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError("mean must be a finite vector")
        return _frozen_array(arr)

    @model_validator(mode="after")
    def validate_covariance(self) -> "GaussianParams":
        """Validate dimensions and positive definiteness (margin 1e-12)."""
        from vpm_hilbert.symmat import is_pd

        if self.mean.shape[0] != self.covariance.dim:
            n = self.covariance.dim
            raise ValueError(f"mean has length {self.mean.shape[0]} but covariance is {n}x{n}")
        if not is_pd(self.covariance, tol=1e-12):
            raise ValueError("covariance must be positive definite")
        return self

    @property
    def dim(self) -> int:
        return self.covariance.dim


class Ball(BaseModel):
    """A Hilbert VPM ball: center and radius in nats."""

    model_config = ConfigDict(frozen=True)

    center: VpmPoint
    radius: float = Field(ge=0)


class SebRun(BaseModel):
    """Full record of a Badoiu-Clarkson run."""

    model_config = ConfigDict(frozen=True)

    ball: Ball
    iterations: int = Field(ge=1)
    seed: int
    radius_trace: list[float]
    best_trace: list[float]


class LorentzPoint(BaseModel):
    """Coordinates (t, x, y) of a 2x2 symmetric matrix in the Lorentz picture."""

    model_config = ConfigDict(frozen=True)

    t: float
    x: float
    y: float


class ExportReport(BaseModel):
    """Result of a CSV export."""

    path: str
    rows: int = Field(ge=0)
    skipped: list[int] = Field(default_factory=list)


class SuiteResult(BaseModel):
    """Outcome of one verification suite."""

    name: str
    passed: bool
    trials: int = Field(ge=0)
    max_deviation: float
    tolerance: float
    details: dict[str, Any] = Field(default_factory=dict)


# --- JSON payload models ---


class MatrixPayload(BaseModel):
    """Repo-wide JSON matrix format: {"dim": n, "rows": [[...], ...]} (row-major)."""

    dim: int = Field(gt=0)
    rows: list[list[float]]

    @model_validator(mode="after")
    def validate_rows(self) -> "MatrixPayload":
        """Validate shape and symmetry against the asymmetry threshold."""
        if len(self.rows) != self.dim:
            raise ValueError(f"expected {self.dim} rows, got {len(self.rows)}")
        for i, row in enumerate(self.rows):
            if len(row) != self.dim:
                raise ValueError(f"row {i} has {len(row)} entries, expected {self.dim}")
        arr = np.array(self.rows, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        asym = relative_asymmetry(arr)
        if asym > ASYMMETRY_THRESHOLD:
            raise ValueError(f"matrix is not symmetric: relative asymmetry {asym:.3e} exceeds {ASYMMETRY_THRESHOLD:g}")
        return self

    def to_symmat(self) -> SymMat:
        return SymMat(entries=self.rows)

    @classmethod
    def from_symmat(cls, x: SymMat) -> "MatrixPayload":
        return cls(dim=x.dim, rows=x.entries.tolist())


class GaussianPayload(BaseModel):
    """JSON format of a full Gaussian: {"mean": [...], "cov": {matrix}}."""

    mean: list[float]
    cov: MatrixPayload

    def to_params(self) -> GaussianParams:
        return GaussianParams(mean=self.mean, covariance=self.cov.to_symmat())


class BallPayload(BaseModel):
    """JSON format of a ball, as emitted by the ``seb`` subcommand."""

    center: MatrixPayload
    radius: float = Field(ge=0)
    iters: Optional[int] = None
    seed: Optional[int] = None
