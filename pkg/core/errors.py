"""Error codes and typed exceptions for the numerics toolkit.

Every failure a kernel can report carries a stable string code, so callers
that only need to classify a failure (the sweep engine, the CLI) can switch
on ``error.code`` without importing every exception class. ``to_dict()``
is the ``{"error", "code"}`` failure dict the orchestrator returns.
"""

from typing import Any

# ---------------------------------------------------------------------------
# Error codes
# ---------------------------------------------------------------------------

ERROR_INTERNAL = "InternalError"
ERROR_INVALID_PARAMETER = "InvalidParameterError"
ERROR_DIMENSION_MISMATCH = "DimensionMismatchError"
ERROR_NOT_HERMITIAN = "NotHermitianError"
ERROR_SINGULAR_POINT = "SingularPointError"
ERROR_SINGULAR_MATRIX = "SingularFisherMatrixError"
ERROR_SUPPORT = "DerivativeLeavesSupportError"
ERROR_FI_DIVERGENCE = "FisherDivergenceError"
ERROR_CONVERGENCE = "ConvergenceError"
ERROR_BOUNDARY_FIT = "BoundaryFitError"
ERROR_INSUFFICIENT_ESTIMATES = "InsufficientEstimatesError"
ERROR_INVALID_CONFIG = "InvalidConfigError"
ERROR_OUTPUT_UNWRITABLE = "OutputUnwritableError"


# ---------------------------------------------------------------------------
# Exceptions
# ---------------------------------------------------------------------------


class NumericsError(Exception):
    """Base class for every failure raised by the toolkit."""

    code = ERROR_INTERNAL

    def __init__(self, message: str) -> None:
        super().__init__(message)
        self.message = message

    def to_dict(self) -> dict[str, Any]:
        """Return the error as an orchestrator failure dict."""
        return {"error": self.message, "code": self.code}


class InvalidParameterError(NumericsError, ValueError):
    """A parameter lies outside its documented domain."""

    code = ERROR_INVALID_PARAMETER


class DimensionMismatchError(NumericsError, ValueError):
    """Matrix shapes do not fit the operation."""

    code = ERROR_DIMENSION_MISMATCH


class NotHermitianError(NumericsError, ValueError):
    """A matrix expected to be Hermitian is not, beyond tolerance."""

    code = ERROR_NOT_HERMITIAN

    def __init__(self, max_asymmetry: float, tolerance: float) -> None:
        super().__init__(
            f"Matrix is not Hermitian: max|A - A^dagger| = {max_asymmetry:.3e} "
            f"exceeds tolerance {tolerance:.1e}"
        )
        self.max_asymmetry = max_asymmetry


class SingularPointError(NumericsError):
    """Joint-estimation quantities are undefined at this parameter point."""

    code = ERROR_SINGULAR_POINT


class SingularMatrixError(SingularPointError):
    """A 2x2 Fisher matrix has (near) zero determinant."""

    code = ERROR_SINGULAR_MATRIX


class SupportError(NumericsError):
    """A state derivative has weight on the kernel-to-kernel block of the state."""

    code = ERROR_SUPPORT


class FisherDivergenceError(NumericsError):
    """An outcome has vanishing probability but a non-vanishing derivative."""

    code = ERROR_FI_DIVERGENCE


class ConvergenceError(NumericsError):
    """An iterative routine did not converge."""

    code = ERROR_CONVERGENCE


class BoundaryFitError(NumericsError):
    """A likelihood fit left the identifiable parameter region."""

    code = ERROR_BOUNDARY_FIT


class InsufficientEstimatesError(NumericsError, ValueError):
    """Too few estimates to form a sample covariance."""

    code = ERROR_INSUFFICIENT_ESTIMATES


class InvalidConfigError(NumericsError, ValueError):
    """A sweep or Monte-Carlo configuration is invalid."""

    code = ERROR_INVALID_CONFIG


class OutputUnwritableError(NumericsError):
    """The CSV output path cannot be written."""

    code = ERROR_OUTPUT_UNWRITABLE
