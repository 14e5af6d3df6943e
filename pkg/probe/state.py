"""Polarization state of the photon pair after the dispersive medium.

Both photons start in |D> and pick up the frequency-dependent phase
difference Delta(w) = phi0 + phi1 (w - w0) between H and V. Tracing out the
frequencies leaves the 4x4 polarization state rho(phi0, phi1) in the basis
HH, HV, VH, VV. Every entry is a quarter times a phase times one Gaussian
moment, so rho and both parameter derivatives are exact.

Entry (ik, jl) carries the single-qubit coherence orders c1 = j - i and
c2 = l - k:

    rho[ik, jl] = 1/4 exp(-i phi0 (c1 + c2)) moment(phi1 c1, phi1 c2)

phi1 = 0 is the pure-state boundary: d rho / d phi1 vanishes there and any
joint (phi0, phi1) quantity is singular.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from core.errors import InvalidParameterError
from core.linalg import SIGMA_X, ComplexMatrix, tensor_product
from core.spectral import SpectralParams, moment, quadratic_form
from core.validator import validate_density_matrix

logger = logging.getLogger(__name__)

PURE_BOUNDARY_TOL = 1e-12

# Coherence orders of every matrix entry, rows/columns in HH, HV, VH, VV order.
_ROW_BITS = np.array([divmod(r, 2) for r in range(4)])
_C1 = (_ROW_BITS[None, :, 0] - _ROW_BITS[:, None, 0]).astype(np.float64)
_C2 = (_ROW_BITS[None, :, 1] - _ROW_BITS[:, None, 1]).astype(np.float64)


@dataclass(frozen=True)
class PhaseParams:
    """Estimation target: mean phase phi0 and dephasing slope phi1."""

    phi0: float
    phi1: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.phi0) and math.isfinite(self.phi1)):
            raise InvalidParameterError(
                f"phase parameters must be finite, got ({self.phi0}, {self.phi1})"
            )

    def as_array(self) -> np.ndarray:
        return np.array([self.phi0, self.phi1], dtype=np.float64)


@dataclass(frozen=True)
class ProbeState:
    """rho together with (d rho/d phi0, d rho/d phi1) at one parameter point."""

    rho: ComplexMatrix
    d_rho: tuple[ComplexMatrix, ComplexMatrix]
    phase: PhaseParams
    spectral: SpectralParams


def is_pure_boundary(p: PhaseParams) -> bool:
    """True at phi1 = 0, where joint estimation quantities are singular."""
    return abs(p.phi1) <= PURE_BOUNDARY_TOL


# ---------------------------------------------------------------------------
# State and derivatives
# ---------------------------------------------------------------------------


def density_matrix(p: PhaseParams, s: SpectralParams) -> ComplexMatrix:
    """Traced two-photon polarization state rho(phi0, phi1)."""
    phase = np.exp(-1j * p.phi0 * (_C1 + _C2))
    return 0.25 * phase * moment(s, p.phi1 * _C1, p.phi1 * _C2)


def density_derivative(p: PhaseParams, s: SpectralParams, j: int) -> ComplexMatrix:
    """Exact partial derivative of rho with respect to phi_j.

    Args:
        p: Phase parameters.
        s: Spectral parameters.
        j: 0 for phi0, 1 for phi1.

    Raises:
        InvalidParameterError: j not in {0, 1}.
    """
    rho = density_matrix(p, s)
    if j == 0:
        return -1j * (_C1 + _C2) * rho
    if j == 1:
        return -2.0 * p.phi1 * quadratic_form(s, _C1, _C2) * rho
    raise InvalidParameterError(f"parameter index must be 0 or 1, got {j}")


def probe_state(p: PhaseParams, s: SpectralParams) -> ProbeState:
    """Bundle rho and both derivatives, checking trace and hermiticity."""
    rho = density_matrix(p, s)
    is_valid, err = validate_density_matrix(rho, check_psd=False)
    if not is_valid:
        raise InvalidParameterError(f"state check failed at {p}, {s}: {err}")
    d_rho = (density_derivative(p, s, 0), density_derivative(p, s, 1))
    return ProbeState(rho=rho, d_rho=d_rho, phase=p, spectral=s)


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------


def stokes_correlator(p: PhaseParams, s: SpectralParams) -> float:
    """<X1 X2> = 1/2 [cos(2 phi0) moment(phi1, phi1) + moment(phi1, -phi1)]."""
    return 0.5 * (
        math.cos(2.0 * p.phi0) * float(moment(s, p.phi1, p.phi1))
        + float(moment(s, p.phi1, -p.phi1))
    )


def stokes_correlator_trace(p: PhaseParams, s: SpectralParams) -> float:
    """Tr[rho (X x X)] from the assembled state."""
    xx = tensor_product(SIGMA_X, SIGMA_X)
    return float(np.real(np.trace(density_matrix(p, s) @ xx)))


def purity(p: PhaseParams, s: SpectralParams) -> float:
    """Tr[rho^2]; 1 at the pure-state boundary."""
    rho = density_matrix(p, s)
    return float(np.real(np.trace(rho @ rho)))
