"""Maximum-likelihood estimation of (phi0, phi1) from outcome counts.

Isolates scipy.optimize from the rest of the package. The fit maximizes the
multinomial log-likelihood sum_x n_x log p(x | phi0, phi1) with Nelder-Mead,
which needs no gradients, inside the identifiable region
phi0 in (0, pi/2), phi1 in (0.05, 3). The probabilities depend on phi1 only
through even functions, so phi1 > 0 pins the sign.
"""

import logging
import math

import numpy as np
from scipy.optimize import minimize

from core.errors import BoundaryFitError, InvalidParameterError
from core.spectral import SpectralParams
from estimation.povm import Povm, outcome_probabilities, stokes_povm
from montecarlo.sampler import OutcomeRecord
from probe.state import PhaseParams, density_matrix

logger = logging.getLogger(__name__)

PHI0_RANGE = (0.0, math.pi / 2.0)
PHI1_RANGE = (0.05, 3.0)

PARAM_TOL = 1e-7
VALUE_TOL = 1e-12
MAX_ITERATIONS = 4000

GRID_POINTS = 7


def in_region(p: PhaseParams) -> bool:
    """True when p lies strictly inside the identifiable region."""
    return PHI0_RANGE[0] < p.phi0 < PHI0_RANGE[1] and PHI1_RANGE[0] < p.phi1 < PHI1_RANGE[1]


def _mean_log_likelihood(
    frequencies: np.ndarray, x: np.ndarray, s: SpectralParams, povm: Povm
) -> float:
    probs = outcome_probabilities(density_matrix(PhaseParams(x[0], x[1]), s), povm)
    observed = frequencies > 0
    if np.any(probs[observed] <= 0.0):
        return -math.inf
    return float(np.sum(frequencies[observed] * np.log(probs[observed])))


def log_likelihood(
    record: OutcomeRecord, p: PhaseParams, s: SpectralParams, povm: Povm | None = None
) -> float:
    """Multinomial log-likelihood sum_x n_x log p(x|phi), without the constant."""
    povm = povm or stokes_povm()
    return record.total * _mean_log_likelihood(
        record.frequencies(), p.as_array(), s, povm
    )


def grid_seed(
    record: OutcomeRecord, s: SpectralParams, povm: Povm | None = None
) -> PhaseParams:
    """Best starting point on a coarse grid inside the identifiable region."""
    povm = povm or stokes_povm()
    frequencies = record.frequencies()
    phi0_grid = np.linspace(*PHI0_RANGE, GRID_POINTS + 2)[1:-1]
    phi1_grid = np.linspace(*PHI1_RANGE, GRID_POINTS + 2)[1:-1]
    best = None
    best_value = -math.inf
    for phi0 in phi0_grid:
        for phi1 in phi1_grid:
            value = _mean_log_likelihood(frequencies, np.array([phi0, phi1]), s, povm)
            if value > best_value:
                best, best_value = (float(phi0), float(phi1)), value
    return PhaseParams(*best)


def mle_fit(
    record: OutcomeRecord,
    s: SpectralParams,
    init: PhaseParams,
    povm: Povm | None = None,
) -> PhaseParams:
    """Maximum-likelihood estimate seeded at init.

    Args:
        record: Observed counts.
        s: Spectral parameters (known).
        init: Starting point inside the identifiable region.
        povm: Measurement that produced the counts (Stokes by default).

    Returns:
        The fitted PhaseParams.

    Raises:
        InvalidParameterError: init outside the identifiable region.
        BoundaryFitError: the optimum lies outside the identifiable region.
    """
    if not in_region(init):
        raise InvalidParameterError(
            f"init ({init.phi0:.4f}, {init.phi1:.4f}) is outside the identifiable region"
        )
    povm = povm or stokes_povm()
    frequencies = record.frequencies()

    def objective(x: np.ndarray) -> float:
        return -_mean_log_likelihood(frequencies, x, s, povm)

    result = minimize(
        objective,
        init.as_array(),
        method="Nelder-Mead",
        options={
            "xatol": PARAM_TOL,
            "fatol": VALUE_TOL,
            "maxiter": MAX_ITERATIONS,
            "maxfev": 2 * MAX_ITERATIONS,
        },
    )
    fitted = PhaseParams(float(result.x[0]), float(result.x[1]))
    if not result.success:
        logger.debug("Nelder-Mead stopped early: %s", result.message)
    if not in_region(fitted):
        raise BoundaryFitError(
            f"fit left the identifiable region: ({fitted.phi0:.4f}, {fitted.phi1:.4f})"
        )
    return fitted
