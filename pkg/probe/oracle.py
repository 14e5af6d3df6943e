"""Independent reference constructions of the probe state.

None of these are used on the production path. They rebuild the state the
slow way (node-summed single-photon states, finite differences, the
single-qubit averaged state) so tests can check the closed forms in
``probe.state`` against something that shares no algebra with them.
"""

import math

import numpy as np

from core.errors import InvalidParameterError
from core.linalg import IDENTITY_2, SIGMA_X, SIGMA_Y, ComplexMatrix
from core.spectral import DEFAULT_QUADRATURE_ORDER, SpectralParams, detuning_nodes, moment
from probe.state import PhaseParams, density_matrix

DEFAULT_FD_STEP = 1e-4


def single_photon_state(delta: float) -> ComplexMatrix:
    """Qubit state 1/2 (I + cos(delta) X + sin(delta) Y) for a fixed frequency."""
    return 0.5 * (IDENTITY_2 + math.cos(delta) * SIGMA_X + math.sin(delta) * SIGMA_Y)


def averaged_single_photon_state(p: PhaseParams, s: SpectralParams) -> ComplexMatrix:
    """Single photon state averaged over its marginal spectrum.

    Bloch vector V (cos phi0, sin phi0, 0) with visibility V = moment(phi1, 0).
    At eps = 0 the pair state is the tensor square of this.
    """
    visibility = float(moment(s, p.phi1, 0.0))
    return 0.5 * (
        IDENTITY_2
        + visibility * math.cos(p.phi0) * SIGMA_X
        + visibility * math.sin(p.phi0) * SIGMA_Y
    )


def _single_photon_states(deltas: np.ndarray) -> np.ndarray:
    return 0.5 * (
        IDENTITY_2[None, :, :]
        + np.cos(deltas)[:, None, None] * SIGMA_X[None, :, :]
        + np.sin(deltas)[:, None, None] * SIGMA_Y[None, :, :]
    )


def quadrature_density_matrix(
    p: PhaseParams, s: SpectralParams, order: int = DEFAULT_QUADRATURE_ORDER
) -> ComplexMatrix:
    """rho as the weighted sum of rho1(w1) x rho2(w2) over quadrature nodes."""
    u, v, w = detuning_nodes(s, order)
    first = _single_photon_states(p.phi0 + p.phi1 * u)
    second = _single_photon_states(p.phi0 + p.phi1 * v)
    return np.einsum("n,nij,nkl->ikjl", w, first, second).reshape(4, 4)


def quadrature_stokes_correlator(
    p: PhaseParams, s: SpectralParams, order: int = DEFAULT_QUADRATURE_ORDER
) -> float:
    """E[cos(Delta1) cos(Delta2)] by quadrature."""
    u, v, w = detuning_nodes(s, order)
    return float(
        np.sum(w * np.cos(p.phi0 + p.phi1 * u) * np.cos(p.phi0 + p.phi1 * v))
    )


def finite_difference_derivative(
    p: PhaseParams, s: SpectralParams, j: int, step: float = DEFAULT_FD_STEP
) -> ComplexMatrix:
    """Five-point central difference of rho with respect to phi_j."""
    if j not in (0, 1):
        raise InvalidParameterError(f"parameter index must be 0 or 1, got {j}")

    def shifted(k: int) -> ComplexMatrix:
        x = p.as_array()
        x[j] += k * step
        return density_matrix(PhaseParams(float(x[0]), float(x[1])), s)

    return (-shifted(2) + 8.0 * shifted(1) - 8.0 * shifted(-1) + shifted(-2)) / (
        12.0 * step
    )


def finite_difference_derivatives(
    p: PhaseParams, s: SpectralParams, step: float = DEFAULT_FD_STEP
) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Both finite-difference derivatives, in the order (phi0, phi1)."""
    return (
        finite_difference_derivative(p, s, 0, step),
        finite_difference_derivative(p, s, 1, step),
    )
