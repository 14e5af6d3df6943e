"""Quantum and classical Fisher information for joint (phi0, phi1) estimation.

Concept: the symmetric logarithmic derivative L_j solves
2 d_j rho = L_j rho + rho L_j. In the eigenbasis of rho it is
2 <s|d_j rho|t> / (lambda_s + lambda_t), with pairs whose eigenvalue sum is
below SUPPORT_TOL dropped. The QFI matrix is Q_jk = Re Tr[rho {L_j, L_k}]/2,
the classical Fisher matrix of a POVM is F_jk = sum_x d_j p_x d_k p_x / p_x,
and Upsilon = Tr[F Q^-1] <= 2 measures how close one fixed measurement gets
to the quantum limit for both parameters at once.
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core.errors import (
    FisherDivergenceError,
    InvalidParameterError,
    NumericsError,
    SingularMatrixError,
    SingularPointError,
    SupportError,
)
from core.linalg import ComplexMatrix, RealMatrix, commutator_trace, hermitian_eig, sym2_inverse
from core.spectral import SpectralParams
from estimation.povm import Povm, outcome_derivatives, outcome_probabilities, stokes_povm
from probe.state import PhaseParams, is_pure_boundary, probe_state

logger = logging.getLogger(__name__)

# Number of estimated parameters.
D = 2

SUPPORT_TOL = 1e-12
KERNEL_LEAK_TOL = 1e-10
ZERO_PROBABILITY_TOL = 1e-14
ZERO_DERIVATIVE_TOL = 1e-12
OFF_DIAGONAL_TOL = 1e-8
REAL_PART_TOL = 1e-10


@dataclass(frozen=True)
class FisherPair:
    """QFI matrix Q, Stokes Fisher matrix F and the derived joint scalars."""

    Q: RealMatrix
    F: RealMatrix
    upsilon: float
    weak_comm: float


def require_mixed(p: PhaseParams) -> None:
    """Raise SingularPointError at the pure-state boundary phi1 = 0."""
    if is_pure_boundary(p):
        raise SingularPointError(
            "phi1 = 0 is the pure-state boundary: d rho/d phi1 vanishes and "
            "joint (phi0, phi1) quantities are undefined"
        )


# ---------------------------------------------------------------------------
# SLD and Fisher kernels
# ---------------------------------------------------------------------------


def sld_operator(rho: ComplexMatrix, d_rho: ComplexMatrix) -> ComplexMatrix:
    """Symmetric logarithmic derivative of rho along d_rho.

    Args:
        rho: Density matrix.
        d_rho: Traceless Hermitian derivative of rho.

    Returns:
        Hermitian L with 2 d_rho = L rho + rho L on the support of rho.

    Raises:
        SupportError: d_rho has weight > 1e-10 between kernel vectors of rho.
    """
    eig = hermitian_eig(rho)
    lam = eig.eigenvalues
    vectors = eig.eigenvectors
    d_eig = vectors.conj().T @ d_rho @ vectors

    denom = lam[:, None] + lam[None, :]
    support = denom > SUPPORT_TOL
    leak = float(np.max(np.abs(np.where(support, 0.0, d_eig)), initial=0.0))
    if leak > KERNEL_LEAK_TOL:
        raise SupportError(
            f"derivative leaves the support of rho: kernel block weight {leak:.3e}"
        )

    safe = np.where(support, denom, 1.0)
    l_eig = np.where(support, 2.0 * d_eig / safe, 0.0)
    sld = vectors @ l_eig @ vectors.conj().T
    return 0.5 * (sld + sld.conj().T)


def _fisher_from_slds(rho: ComplexMatrix, slds: Sequence[ComplexMatrix]) -> RealMatrix:
    n = len(slds)
    q = np.zeros((n, n))
    for j in range(n):
        for k in range(j, n):
            anti = slds[j] @ slds[k] + slds[k] @ slds[j]
            q[j, k] = q[k, j] = 0.5 * float(np.real(np.trace(rho @ anti)))
    return q


def quantum_fisher(rho: ComplexMatrix, d_rhos: Sequence[ComplexMatrix]) -> RealMatrix:
    """QFI matrix from a state and explicit derivatives."""
    return _fisher_from_slds(rho, [sld_operator(rho, d) for d in d_rhos])


def classical_fisher(
    rho: ComplexMatrix, d_rhos: Sequence[ComplexMatrix], povm: Povm
) -> RealMatrix:
    """Classical Fisher matrix of a POVM on rho.

    Outcomes with p <= 1e-14 are dropped when every derivative is <= 1e-12.

    Raises:
        FisherDivergenceError: a vanishing outcome has a non-vanishing derivative.
    """
    probs = outcome_probabilities(rho, povm)
    derivs = np.stack([outcome_derivatives(d, povm) for d in d_rhos])

    vanishing = probs <= ZERO_PROBABILITY_TOL
    if np.any(vanishing):
        worst = float(np.max(np.abs(derivs[:, vanishing])))
        if worst > ZERO_DERIVATIVE_TOL:
            labels = [povm.labels[x] for x in np.flatnonzero(vanishing)]
            raise FisherDivergenceError(
                f"FI diverges at boundary: outcomes {labels} have p = 0 but "
                f"|dp| = {worst:.3e}"
            )

    kept = ~vanishing
    weighted = derivs[:, kept] / probs[kept]
    f = weighted @ derivs[:, kept].T
    return 0.5 * (f + f.T)


# ---------------------------------------------------------------------------
# Model-level quantities
# ---------------------------------------------------------------------------


def qfi_matrix(p: PhaseParams, s: SpectralParams) -> RealMatrix:
    """QFI matrix of the probe state. Q_11 = 0 at phi1 = 0."""
    state = probe_state(p, s)
    return quantum_fisher(state.rho, state.d_rho)


def fi_matrix(p: PhaseParams, s: SpectralParams, povm: Povm | None = None) -> RealMatrix:
    """Classical Fisher matrix of the Stokes measurement (or a given POVM)."""
    state = probe_state(p, s)
    return classical_fisher(state.rho, state.d_rho, povm or stokes_povm())


def upsilon(f: RealMatrix, q: RealMatrix) -> float:
    """Joint figure of merit Tr[F Q^-1].

    Uses F00/Q00 + F11/Q11 when both matrices are diagonal to 1e-8.

    Raises:
        SingularMatrixError: Q is singular.
    """
    f = np.asarray(f, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if max(abs(f[0, 1]), abs(q[0, 1])) <= OFF_DIAGONAL_TOL:
        det = q[0, 0] * q[1, 1]
        if det <= 1e-14:
            raise SingularMatrixError(f"Singular QFI matrix: det = {det:.3e}")
        return float(f[0, 0] / q[0, 0] + f[1, 1] / q[1, 1])
    return float(np.trace(f @ sym2_inverse(q)))


def _weak_comm_from_slds(rho: ComplexMatrix, slds: Sequence[ComplexMatrix]) -> float:
    value = commutator_trace(rho, slds[0], slds[1])
    if abs(value.real) > REAL_PART_TOL:
        raise NumericsError(
            f"Tr[rho [L0, L1]] has real part {value.real:.3e}; expected imaginary"
        )
    return float(value.imag)


def weak_commutativity(p: PhaseParams, s: SpectralParams) -> float:
    """Im Tr[rho [L0, L1]]; zero iff the two SLDs commute on average.

    For this probe it vanishes identically: (X x X) rho* (X x X) = rho, and
    the SLDs inherit that symmetry, so the trace is real as well as
    imaginary. Computed anyway as a check on the SLD path.

    Raises:
        SingularPointError: phi1 = 0.
    """
    require_mixed(p)
    state = probe_state(p, s)
    slds = [sld_operator(state.rho, d) for d in state.d_rho]
    return _weak_comm_from_slds(state.rho, slds)


def fisher_pair(p: PhaseParams, s: SpectralParams, povm: Povm | None = None) -> FisherPair:
    """Q, F, Upsilon and weak commutativity from one set of SLDs.

    Raises:
        SingularPointError: phi1 = 0.
    """
    require_mixed(p)
    state = probe_state(p, s)
    slds = [sld_operator(state.rho, d) for d in state.d_rho]
    q = _fisher_from_slds(state.rho, slds)
    f = classical_fisher(state.rho, state.d_rho, povm or stokes_povm())
    return FisherPair(
        Q=q,
        F=f,
        upsilon=upsilon(f, q),
        weak_comm=_weak_comm_from_slds(state.rho, slds),
    )


def scalar_bounds(f: RealMatrix, q: RealMatrix) -> tuple[float, float]:
    """(Tr F^-1, Tr Q^-1): summed-variance bounds, classical then quantum."""
    return float(np.trace(sym2_inverse(f))), float(np.trace(sym2_inverse(q)))


def product_state_reference(p: PhaseParams, s: SpectralParams) -> dict[str, float]:
    """Closed-form values for uncorrelated photons (eps = 0).

    With V^2 = exp(-phi1^2 sigma^2) each photon contributes half of

        Q00 = 2 V^2                 Q11 = 2 phi1^2 sigma^4 V^2 / (1 - V^2)
        F00 = 2 V^2 / (2 - V^2)     F11 = 2 phi1^2 sigma^4 V^2 / (2 - V^2)

    The F values hold at phi0 = pi/4 only.

    Raises:
        InvalidParameterError: eps != 0.
        SingularPointError: phi1 = 0.
    """
    if s.epsilon != 0.0:
        raise InvalidParameterError(
            f"product-state reference requires eps = 0, got {s.epsilon}"
        )
    require_mixed(p)
    s2 = s.sigma**2
    v2 = math.exp(-(p.phi1**2) * s2)
    slope = 2.0 * p.phi1**2 * s2 * s2 * v2
    return {
        "qfi00": 2.0 * v2,
        "qfi11": slope / (1.0 - v2),
        "fi00": 2.0 * v2 / (2.0 - v2),
        "fi11": slope / (2.0 - v2),
    }
