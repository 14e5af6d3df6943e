"""Grid construction and profile analysis for epsilon sweeps.

Used both by the CLI (the ``critical`` subcommand) and by the tests that
check the regime structure of the Fisher profiles: where the maxima of a
curve sit on the epsilon grid, and the dephasing value at which the single
central maximum of Q11 splits into two.
"""

import logging
from typing import Sequence

import numpy as np

from core.errors import ConvergenceError, InvalidParameterError
from core.spectral import SpectralParams
from estimation.fisher import qfi_matrix
from probe.state import PhaseParams

logger = logging.getLogger(__name__)

GRID_DECIMALS = 12
CURVATURE_STEP = 1e-3
CRITICAL_BRACKET = (0.1, 2.0)
CRITICAL_TOL = 1e-6
MAX_BISECTIONS = 100

PROFILE_ENDPOINT = "endpoint"
PROFILE_CENTRAL = "central"
PROFILE_INTERIOR = "interior"
PROFILE_MONOTONE = "monotone"
PROFILE_OTHER = "other"


def epsilon_grid(eps_min: float, eps_max: float, steps: int) -> np.ndarray:
    """Evenly spaced epsilon values rounded to 12 decimals, with -0 folded to 0."""
    if steps < 2:
        raise InvalidParameterError(f"steps must be >= 2, got {steps}")
    grid = np.round(np.linspace(eps_min, eps_max, steps), GRID_DECIMALS) + 0.0
    return np.clip(grid, -1.0, 1.0)


def local_maxima(values: Sequence[float], tol: float = 1e-12) -> list[int]:
    """Indices of strict local maxima, endpoints included.

    A point counts when it beats each existing neighbour by more than
    tol * max(1, |value|).
    """
    v = np.asarray(values, dtype=np.float64)
    n = len(v)
    if n == 0:
        return []
    if n == 1:
        return [0]
    margin = tol * np.maximum(1.0, np.abs(v))
    maxima = []
    for i in range(n):
        left_ok = i == 0 or v[i] - v[i - 1] > margin[i]
        right_ok = i == n - 1 or v[i] - v[i + 1] > margin[i]
        if left_ok and right_ok:
            maxima.append(i)
    return maxima


def classify_profile(eps: Sequence[float], values: Sequence[float]) -> str:
    """Name the regime of a profile over a symmetric epsilon grid.

    Returns:
        "endpoint": maxima exactly at both ends.
        "central": a single maximum at eps = 0.
        "interior": only interior maxima, none at eps = 0.
        "monotone": a single maximum at one end.
        "other": anything else.
    """
    e = np.asarray(eps, dtype=np.float64)
    maxima = local_maxima(values)
    last = len(e) - 1
    if maxima == [0, last]:
        return PROFILE_ENDPOINT
    if len(maxima) == 1 and maxima[0] in (0, last):
        return PROFILE_MONOTONE
    if len(maxima) == 1 and abs(e[maxima[0]]) < 1e-12:
        return PROFILE_CENTRAL
    if maxima and all(0 < i < last and abs(e[i]) >= 1e-12 for i in maxima):
        return PROFILE_INTERIOR
    return PROFILE_OTHER


# ---------------------------------------------------------------------------
# Q11 bifurcation
# ---------------------------------------------------------------------------


def _qfi11(phi1: float, epsilon: float, sigma: float) -> float:
    q = qfi_matrix(PhaseParams(0.0, phi1), SpectralParams(sigma=sigma, epsilon=epsilon))
    return float(q[1, 1])


def curvature_at_zero(phi1: float, sigma: float = 1.0, step: float = CURVATURE_STEP) -> float:
    """Second difference of Q11(eps) at eps = 0."""
    centre = _qfi11(phi1, 0.0, sigma)
    return (_qfi11(phi1, step, sigma) - 2.0 * centre + _qfi11(phi1, -step, sigma)) / step**2


def critical_dephasing(
    sigma: float = 1.0,
    bracket: tuple[float, float] = CRITICAL_BRACKET,
    tol: float = CRITICAL_TOL,
) -> float:
    """phi1 at which Q11(eps) turns from a central maximum into two side maxima.

    Bisects on the sign of the curvature of Q11 at eps = 0.

    Raises:
        ConvergenceError: the bracket does not contain a sign change.
    """
    lo, hi = bracket
    c_lo = curvature_at_zero(lo, sigma)
    c_hi = curvature_at_zero(hi, sigma)
    if not (c_lo < 0.0 < c_hi):
        raise ConvergenceError(
            f"curvature does not change sign on [{lo}, {hi}]: {c_lo:.3e}, {c_hi:.3e}"
        )
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if curvature_at_zero(mid, sigma) < 0.0:
            lo = mid
        else:
            hi = mid
    critical = 0.5 * (lo + hi)
    logger.info("critical dephasing phi1* = %.6f (sigma = %g)", critical, sigma)
    return critical
