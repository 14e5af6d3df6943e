"""Validators for run configurations, states and measurements.

Every validator returns (is_valid, error_description) and never raises, so
callers decide whether a problem is fatal. A bad config is caught before a
sweep starts instead of surfacing as a confusing failure on some worker.
"""

from typing import Any

import numpy as np

from core.linalg import hermitian_eig, hermiticity_defect
from core.schema import MONTECARLO_QUANTITY, QUANTITIES

STATE_TOL = 1e-12
POVM_TOL = 1e-12


# ---------------------------------------------------------------------------
# Run configuration
# ---------------------------------------------------------------------------


def validate_sweep_config(config: Any) -> tuple[bool, str]:
    """Validate a SweepConfig.

    Checks the quantity name, the epsilon grid, sigma, the phi1 list and,
    for Monte-Carlo runs, the shots/repeats block.

    Args:
        config: The SweepConfig to validate.

    Returns:
        (is_valid, error_description).
    """
    if config.quantity not in QUANTITIES:
        return False, f"Unknown quantity '{config.quantity}'; expected one of {list(QUANTITIES)}"

    for name in ("eps_min", "eps_max"):
        value = getattr(config, name)
        if not np.isfinite(value) or abs(value) > 1.0:
            return False, f"{name} must lie in [-1, 1], got {value}"
    if config.eps_min > config.eps_max:
        return False, f"eps_min {config.eps_min} exceeds eps_max {config.eps_max}"
    if config.eps_steps < 2:
        return False, f"eps_steps must be >= 2, got {config.eps_steps}"

    if not np.isfinite(config.sigma) or config.sigma <= 0:
        return False, f"sigma must be > 0, got {config.sigma}"
    if not np.isfinite(config.phi0):
        return False, f"phi0 must be finite, got {config.phi0}"
    if not config.phi1_list:
        return False, "phi1 list must not be empty"
    if not all(np.isfinite(v) for v in config.phi1_list):
        return False, f"phi1 values must be finite, got {list(config.phi1_list)}"
    if config.workers < 0:
        return False, f"workers must be >= 0, got {config.workers}"
    if not config.output_path:
        return False, "output path must not be empty"

    if config.quantity == MONTECARLO_QUANTITY:
        mc = config.mc
        if mc is None:
            return False, "montecarlo requires MC_SHOTS and MC_REPEATS"
        if mc.shots < 1:
            return False, f"shots must be >= 1, got {mc.shots}"
        if mc.repeats < 2:
            return False, f"fewer than 2 estimates: repeats = {mc.repeats}"
        if mc.seed < 0:
            return False, f"seed must be >= 0, got {mc.seed}"

    return True, ""


# ---------------------------------------------------------------------------
# States and measurements
# ---------------------------------------------------------------------------


def validate_density_matrix(rho: Any, check_psd: bool = True) -> tuple[bool, str]:
    """Validate a density matrix: square, unit trace, Hermitian, PSD.

    Args:
        rho: Candidate density matrix.
        check_psd: Also require eigenvalues >= -1e-12 (one eigendecomposition).

    Returns:
        (is_valid, error_description).
    """
    m = np.asarray(rho)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False, f"Density matrix must be square, got shape {m.shape}"
    trace = complex(np.trace(m))
    if abs(trace - 1.0) > STATE_TOL:
        return False, f"Density matrix trace is {trace:.6e}, expected 1"
    defect = hermiticity_defect(m)
    if defect > STATE_TOL:
        return False, f"Density matrix is not Hermitian: defect {defect:.3e}"
    if check_psd:
        smallest = float(hermitian_eig(m).eigenvalues[0])
        if smallest < -STATE_TOL:
            return False, f"Density matrix has negative eigenvalue {smallest:.3e}"
    return True, ""


def validate_povm(elements: Any) -> tuple[bool, str]:
    """Validate stacked POVM elements: each Hermitian PSD, summing to identity.

    Args:
        elements: Array of shape (n, d, d).

    Returns:
        (is_valid, error_description).
    """
    e = np.asarray(elements)
    if e.ndim != 3 or e.shape[1] != e.shape[2] or len(e) == 0:
        return False, f"POVM elements must have shape (n, d, d), got {e.shape}"
    for i, element in enumerate(e):
        if hermiticity_defect(element) > POVM_TOL:
            return False, f"POVM element {i} is not Hermitian"
        if hermitian_eig(element).eigenvalues[0] < -POVM_TOL:
            return False, f"POVM element {i} is not positive semidefinite"
    defect = float(np.max(np.abs(e.sum(axis=0) - np.eye(e.shape[1]))))
    if defect > POVM_TOL:
        return False, f"POVM elements do not sum to identity: defect {defect:.3e}"
    return True, ""
