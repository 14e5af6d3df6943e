"""Dense complex linear algebra for 2x2 and 4x4 operators.

Everything the estimation kernels need on top of numpy: a deterministic
Hermitian eigensolver, Kronecker products in the fixed HH, HV, VH, VV basis,
commutator traces and the closed-form inverse of a 2x2 Fisher matrix.

Concept: the eigensolver is a cyclic complex Jacobi iteration rather than a
LAPACK call, so identical input gives bit-identical eigenvectors on every
platform and every worker. At dim <= 4 it converges in a handful of sweeps.
"""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from core.errors import (
    ConvergenceError,
    DimensionMismatchError,
    NotHermitianError,
    SingularMatrixError,
)

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]
RealMatrix = npt.NDArray[np.float64]

HERMITIAN_TOL = 1e-12
SINGULAR_DET_TOL = 1e-14
JACOBI_TOL = 1e-14
MAX_SWEEPS = 50

# ---------------------------------------------------------------------------
# Constants
# ---------------------------------------------------------------------------

IDENTITY_2 = np.eye(2, dtype=np.complex128)
IDENTITY_4 = np.eye(4, dtype=np.complex128)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)

for _const in (IDENTITY_2, IDENTITY_4, SIGMA_X, SIGMA_Y, SIGMA_Z):
    _const.setflags(write=False)


@dataclass(frozen=True)
class HermitianEig:
    """Eigendecomposition A = V diag(eigenvalues) V^dagger.

    eigenvalues are real and ascending; eigenvectors holds them as columns.
    """

    eigenvalues: RealMatrix
    eigenvectors: ComplexMatrix

    def reconstruct(self) -> ComplexMatrix:
        """Return V diag(lambda) V^dagger."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def _as_square(a: npt.ArrayLike) -> ComplexMatrix:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"Expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_defect(a: npt.ArrayLike) -> float:
    """Return max entrywise |A - A^dagger|."""
    m = _as_square(a)
    return float(np.max(np.abs(m - m.conj().T)))


# ---------------------------------------------------------------------------
# Eigensolver
# ---------------------------------------------------------------------------


def _off_diagonal_norm(a: ComplexMatrix) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _rotation(a: ComplexMatrix, p: int, q: int) -> ComplexMatrix:
    """Unitary G that zeroes A[p, q] in G^dagger A G.

    A phase on column q makes the (p, q) entry real, then a real rotation
    in the (p, q) plane annihilates it.
    """
    n = a.shape[0]
    g = a[p, q]
    magnitude = abs(g)
    phase = np.eye(n, dtype=np.complex128)
    phase[q, q] = np.exp(-1j * np.angle(g))

    tau = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
    sign = 1.0 if tau >= 0 else -1.0
    t = sign / (abs(tau) + np.sqrt(1.0 + tau * tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c

    rot = np.eye(n, dtype=np.complex128)
    rot[p, p] = c
    rot[q, q] = c
    rot[p, q] = s
    rot[q, p] = -s
    return phase @ rot


def hermitian_eig(a: npt.ArrayLike) -> HermitianEig:
    """Diagonalize a Hermitian matrix with cyclic Jacobi rotations.

    Args:
        a: Square Hermitian matrix (dim 2 or 4 in practice).

    Returns:
        HermitianEig with ascending eigenvalues and orthonormal eigenvectors.

    Raises:
        NotHermitianError: max|A - A^dagger| exceeds 1e-12.
        ConvergenceError: off-diagonal mass did not vanish within MAX_SWEEPS.
    """
    m = _as_square(a)
    defect = hermiticity_defect(m)
    if defect > HERMITIAN_TOL:
        raise NotHermitianError(defect, HERMITIAN_TOL)

    n = m.shape[0]
    work = 0.5 * (m + m.conj().T)
    vectors = np.eye(n, dtype=np.complex128)
    threshold = JACOBI_TOL * max(1.0, float(np.linalg.norm(work)))
    # Entries below this cannot keep the off-diagonal norm above threshold.
    negligible = threshold / (2.0 * n * n)

    for sweep in range(MAX_SWEEPS):
        if _off_diagonal_norm(work) < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(work[p, q]) <= negligible:
                    continue
                g = _rotation(work, p, q)
                work = g.conj().T @ work @ g
                work = 0.5 * (work + work.conj().T)
                vectors = vectors @ g
    else:
        if _off_diagonal_norm(work) >= threshold:
            raise ConvergenceError(
                f"Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
            )
        sweep = MAX_SWEEPS

    logger.debug("Jacobi converged after %d sweeps (dim %d)", sweep, n)

    eigenvalues = np.real(np.diag(work)).copy()
    order = np.argsort(eigenvalues, kind="stable")
    return HermitianEig(
        eigenvalues=eigenvalues[order],
        eigenvectors=vectors[:, order],
    )


def is_positive_semidefinite(a: npt.ArrayLike, tol: float = 1e-12) -> bool:
    """True when every eigenvalue of the Hermitian matrix is >= -tol."""
    return bool(hermitian_eig(a).eigenvalues[0] >= -tol)


# ---------------------------------------------------------------------------
# Products and traces
# ---------------------------------------------------------------------------


def tensor_product(a: npt.ArrayLike, b: npt.ArrayLike) -> ComplexMatrix:
    """Kronecker product of two qubit operators in the HH, HV, VH, VV basis.

    Raises:
        DimensionMismatchError: either factor is not 2x2.
    """
    ma = _as_square(a)
    mb = _as_square(b)
    if ma.shape != (2, 2) or mb.shape != (2, 2):
        raise DimensionMismatchError(
            f"tensor_product expects two 2x2 factors, got {ma.shape} and {mb.shape}"
        )
    return np.kron(ma, mb)


def commutator_trace(
    rho: npt.ArrayLike, a: npt.ArrayLike, b: npt.ArrayLike
) -> complex:
    """Return Tr[rho (AB - BA)].

    Purely imaginary whenever rho, A and B are Hermitian.
    """
    r = _as_square(rho)
    ma = _as_square(a)
    mb = _as_square(b)
    if not r.shape == ma.shape == mb.shape:
        raise DimensionMismatchError(
            f"Shapes differ: rho {r.shape}, A {ma.shape}, B {mb.shape}"
        )
    return complex(np.trace(r @ (ma @ mb - mb @ ma)))


def sym2_inverse(m: npt.ArrayLike) -> RealMatrix:
    """Closed-form inverse of a 2x2 real symmetric matrix.

    Raises:
        DimensionMismatchError: input is not 2x2.
        SingularMatrixError: det(M) <= 1e-14.
    """
    a = np.asarray(m, dtype=np.float64)
    if a.shape != (2, 2):
        raise DimensionMismatchError(f"sym2_inverse expects 2x2, got {a.shape}")
    off = 0.5 * (a[0, 1] + a[1, 0])
    det = a[0, 0] * a[1, 1] - off * off
    if det <= SINGULAR_DET_TOL:
        raise SingularMatrixError(
            f"Singular Fisher matrix: det = {det:.3e} <= {SINGULAR_DET_TOL:.0e}"
        )
    return np.array([[a[1, 1], -off], [-off, a[0, 0]]]) / det
