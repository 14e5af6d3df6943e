"""Gaussian joint spectral weight of the photon pair.

The traced polarization state depends on the spectrum only through the
exponential moments E[exp(i(a u + b v))] of the detunings u = w1 - w0 and
v = w2 - w0. For the Gaussian weight these are the bivariate characteristic
function, evaluated here in closed form; ``quadrature_moment`` computes the
same integral with Gauss-Hermite nodes as an independent check.

Concept: in the rotated frame s = (u + v)/sqrt(2), d = (u - v)/sqrt(2) the
weight factorizes into two independent Gaussians with variances
sigma^2 (1 + eps) and sigma^2 (1 - eps). At eps = +-1 one of them is a delta
function and its axis collapses to a single node.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from core.errors import InvalidParameterError

logger = logging.getLogger(__name__)

DEFAULT_QUADRATURE_ORDER = 40
MIN_QUADRATURE_ORDER = 20
DEGENERATE_AXIS_TOL = 1e-9


@dataclass(frozen=True)
class SpectralParams:
    """Bandwidth sigma, correlation epsilon and central frequency omega0.

    omega0 cancels from every quantity because the phase difference is
    expanded around it.
    """

    sigma: float = 1.0
    epsilon: float = 0.0
    omega0: float = 0.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.sigma) or self.sigma <= 0:
            raise InvalidParameterError(f"sigma must be > 0, got {self.sigma}")
        if not math.isfinite(self.epsilon) or abs(self.epsilon) > 1.0:
            raise InvalidParameterError(
                f"epsilon must lie in [-1, 1], got {self.epsilon}"
            )
        if not math.isfinite(self.omega0):
            raise InvalidParameterError(f"omega0 must be finite, got {self.omega0}")

    def covariance(self) -> npt.NDArray[np.float64]:
        """Detuning covariance [[s^2, eps s^2], [eps s^2, s^2]]."""
        s2 = self.sigma**2
        return np.array([[s2, self.epsilon * s2], [self.epsilon * s2, s2]])


def variances(params: SpectralParams) -> tuple[float, float]:
    """Return (sigma_plus^2, sigma_minus^2) = 2 sigma^2 (1 +- eps)."""
    s2 = params.sigma**2
    return 2.0 * s2 * (1.0 + params.epsilon), 2.0 * s2 * (1.0 - params.epsilon)


def quadratic_form(params: SpectralParams, a, b):
    """Half the detuning variance along (a, b): (a^2 + b^2) s^2 / 2 + a b s^2 eps.

    Accepts scalars or broadcastable numpy arrays.
    """
    s2 = params.sigma**2
    return 0.5 * (a * a + b * b) * s2 + a * b * s2 * params.epsilon


def moment(params: SpectralParams, a, b):
    """Characteristic function E[exp(i(a u + b v))] of the detunings.

    Real and in (0, 1] for the centred Gaussian weight.
    """
    return np.exp(-quadratic_form(params, a, b))


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------


def _axis(variance: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes and probability weights for N(0, variance)."""
    if variance <= 0.0:
        return np.zeros(1), np.ones(1)
    knots, weights = np.polynomial.hermite.hermgauss(order)
    return knots * math.sqrt(2.0 * variance), weights / math.sqrt(math.pi)


def detuning_nodes(
    params: SpectralParams, order: int = DEFAULT_QUADRATURE_ORDER
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Tensor Gauss-Hermite nodes (u, v) and weights for the joint spectrum.

    Args:
        params: Spectral parameters.
        order: Nodes per non-degenerate axis (>= 20).

    Returns:
        Flat arrays (u, v, w) with sum(w) = 1.

    Raises:
        InvalidParameterError: order below 20.
    """
    if order < MIN_QUADRATURE_ORDER:
        raise InvalidParameterError(
            f"quadrature order must be >= {MIN_QUADRATURE_ORDER}, got {order}"
        )
    s2 = params.sigma**2
    eps = params.epsilon
    sum_var = s2 * (1.0 + eps) if 1.0 + eps > DEGENERATE_AXIS_TOL else 0.0
    diff_var = s2 * (1.0 - eps) if 1.0 - eps > DEGENERATE_AXIS_TOL else 0.0

    s_nodes, s_weights = _axis(sum_var, order)
    d_nodes, d_weights = _axis(diff_var, order)
    s_grid, d_grid = np.meshgrid(s_nodes, d_nodes, indexing="ij")
    w = np.outer(s_weights, d_weights).ravel()

    u = ((s_grid + d_grid) / math.sqrt(2.0)).ravel()
    v = ((s_grid - d_grid) / math.sqrt(2.0)).ravel()
    return u, v, w


def quadrature_moment(
    params: SpectralParams,
    a: float,
    b: float,
    order: int = DEFAULT_QUADRATURE_ORDER,
) -> complex:
    """Integrate exp(i(a u + b v)) against the spectral weight numerically."""
    u, v, w = detuning_nodes(params, order)
    return complex(np.sum(w * np.exp(1j * (a * u + b * v))))
