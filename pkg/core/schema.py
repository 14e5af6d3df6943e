"""Result schemas and helpers shared by the sweep and Monte-Carlo engines.

Defines the lifecycle status of a single parameter point, the quantity names
the CLI accepts, the bit-exact CSV headers, and constructors for the result
rows the workers hand back to the orchestrator.

A point result is a plain dict so it crosses process boundaries without
custom pickling and can be logged as JSON as-is.
"""

from enum import Enum
from typing import Any


# ---------------------------------------------------------------------------
# Enums
# ---------------------------------------------------------------------------


class PointStatus(str, Enum):
    """Outcome of evaluating one (phi1, epsilon) point.

    OK: value computed.
    SINGULAR: joint quantity undefined (pure-state boundary phi1 = 0).
    FAILED: any other numerical failure; the message says which.
    """

    OK = "ok"
    SINGULAR = "singular"
    FAILED = "failed"


# ---------------------------------------------------------------------------
# Quantities and headers
# ---------------------------------------------------------------------------

SWEEP_QUANTITIES = (
    "qfi00",
    "qfi11",
    "fi00",
    "fi11",
    "upsilon",
    "weak_comm",
    "stokes_xx",
    "purity",
)
MONTECARLO_QUANTITY = "montecarlo"
QUANTITIES = SWEEP_QUANTITIES + (MONTECARLO_QUANTITY,)

SWEEP_HEADER = ("quantity", "phi0", "phi1", "epsilon", "sigma", "value", "status")

MONTECARLO_HEADER = (
    "phi0",
    "phi1",
    "epsilon",
    "sigma",
    "shots",
    "repeats",
    "seed",
    "m_var_phi0",
    "m_var_phi1",
    "f_inv_00",
    "f_inv_11",
    "q_inv_00",
    "q_inv_11",
    "boundary_fits",
    "status",
)


# ---------------------------------------------------------------------------
# Row constructors
# ---------------------------------------------------------------------------


def create_point_result(
    quantity: str,
    phi0: float,
    phi1: float,
    epsilon: float,
    sigma: float,
    value: float | None = None,
    status: PointStatus = PointStatus.OK,
    message: str = "",
) -> dict[str, Any]:
    """Create a sweep point result.

    Args:
        quantity: Quantity name (one of SWEEP_QUANTITIES).
        phi0: Mean phase.
        phi1: Dephasing slope.
        epsilon: Frequency correlation parameter.
        sigma: Single-photon bandwidth.
        value: Computed value, or None when the point is not OK.
        status: Point lifecycle status.
        message: Diagnostic for SINGULAR / FAILED points.

    Returns:
        A point result dict.
    """
    result: dict[str, Any] = {
        "quantity": quantity,
        "phi0": phi0,
        "phi1": phi1,
        "epsilon": epsilon,
        "sigma": sigma,
        "value": value if status == PointStatus.OK else None,
        "status": status.value,
    }
    if message:
        result["message"] = message
    return result


def create_montecarlo_result(
    phi0: float,
    phi1: float,
    epsilon: float,
    sigma: float,
    shots: int,
    repeats: int,
    seed: int,
    m_var: tuple[float, float] | None = None,
    f_inv_diag: tuple[float, float] | None = None,
    q_inv_diag: tuple[float, float] | None = None,
    boundary_fits: int = 0,
    status: PointStatus = PointStatus.OK,
    message: str = "",
) -> dict[str, Any]:
    """Create a Monte-Carlo point result.

    Args:
        phi0, phi1, epsilon, sigma: The tested point.
        shots: Photon pairs per repeat (M).
        repeats: Number of independent repeats.
        seed: Base seed; repeat r uses seed + r.
        m_var: (M*Var(phi0_hat), M*Var(phi1_hat)).
        f_inv_diag: Diagonal of the inverse classical Fisher matrix.
        q_inv_diag: Diagonal of the inverse quantum Fisher matrix.
        boundary_fits: Repeats whose fit left the identifiable region.
        status: Point lifecycle status.
        message: Diagnostic for non-OK points.

    Returns:
        A Monte-Carlo result dict.
    """
    ok = status == PointStatus.OK
    result: dict[str, Any] = {
        "phi0": phi0,
        "phi1": phi1,
        "epsilon": epsilon,
        "sigma": sigma,
        "shots": shots,
        "repeats": repeats,
        "seed": seed,
        "m_var_phi0": m_var[0] if ok and m_var else None,
        "m_var_phi1": m_var[1] if ok and m_var else None,
        "f_inv_00": f_inv_diag[0] if ok and f_inv_diag else None,
        "f_inv_11": f_inv_diag[1] if ok and f_inv_diag else None,
        "q_inv_00": q_inv_diag[0] if ok and q_inv_diag else None,
        "q_inv_11": q_inv_diag[1] if ok and q_inv_diag else None,
        "boundary_fits": boundary_fits,
        "status": status.value,
    }
    if message:
        result["message"] = message
    return result
