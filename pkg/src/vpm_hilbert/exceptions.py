"""Custom exceptions for vpm-hilbert."""


class VPMError(Exception):
    """Base exception for vpm-hilbert errors."""

    pass


class DimensionMismatchError(VPMError):
    """Operands have different matrix dimensions."""

    pass


class DomainError(VPMError):
    """An input lies outside the domain an operation is defined on."""

    pass


class NotPositiveDefiniteError(DomainError):
    """Matrix is required to be positive definite."""

    pass


class BoundaryError(DomainError):
    """Point is outside (or too close to the boundary of) the bicone."""

    pass


class NotOrthonormalError(DomainError):
    """Matrix is required to be orthonormal."""

    pass


class SolverError(VPMError):
    """Eigensolver or bisection failed to converge."""

    pass


class DegeneratePencilError(VPMError):
    """Pencil det(A + tD) vanishes identically, or the line through two points is undefined."""

    pass


class MatrixFormatError(VPMError):
    """Matrix input could not be parsed or is not symmetric."""

    pass
