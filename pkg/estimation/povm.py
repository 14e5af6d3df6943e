"""Measurements on the photon pair.

The Stokes measurement sends each photon at random (probability 1/2) to a
diagonal (D/A) or circular (R/L) polarization analyser, so each photon's
POVM is {|D><D|/2, |A><A|/2, |R><R|/2, |L><L|/2} and the pair POVM is the
16 products. Probabilities and their parameter derivatives follow from the
Born rule.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from core.errors import NumericsError
from core.linalg import ComplexMatrix, hermitian_eig, tensor_product
from core.validator import validate_povm

logger = logging.getLogger(__name__)

STOKES_LABELS = ("D", "A", "R", "L")

_SQRT_HALF = 1.0 / math.sqrt(2.0)
_KETS = {
    "D": np.array([_SQRT_HALF, _SQRT_HALF], dtype=np.complex128),
    "A": np.array([_SQRT_HALF, -_SQRT_HALF], dtype=np.complex128),
    "R": np.array([_SQRT_HALF, 1j * _SQRT_HALF], dtype=np.complex128),
    "L": np.array([_SQRT_HALF, -1j * _SQRT_HALF], dtype=np.complex128),
}


@dataclass(frozen=True)
class Povm:
    """A finite POVM: stacked elements (n, d, d) and one label per element."""

    elements: npt.NDArray[np.complex128]
    labels: tuple[tuple[str, ...], ...]

    def __len__(self) -> int:
        return len(self.labels)

    def index(self, label: tuple[str, ...]) -> int:
        return self.labels.index(label)


def single_photon_element(label: str) -> ComplexMatrix:
    """Half-weight projector pi_j = |j><j| / 2."""
    ket = _KETS[label]
    return 0.5 * np.outer(ket, ket.conj())


@lru_cache(maxsize=1)
def stokes_povm() -> Povm:
    """The 16 product elements pi_j x pi_k, labels (j, k) in D, A, R, L order."""
    elements = []
    labels = []
    for j in STOKES_LABELS:
        for k in STOKES_LABELS:
            elements.append(
                tensor_product(single_photon_element(j), single_photon_element(k))
            )
            labels.append((j, k))
    stacked = np.stack(elements)
    is_valid, err = validate_povm(stacked)
    if not is_valid:
        raise NumericsError(f"Stokes POVM construction failed: {err}")
    stacked.setflags(write=False)
    return Povm(elements=stacked, labels=tuple(labels))


def outcome_probabilities(rho: ComplexMatrix, povm: Povm) -> np.ndarray:
    """Born-rule probabilities Tr[rho Pi_x]."""
    return np.real(np.einsum("xij,ji->x", povm.elements, rho))


def outcome_derivatives(d_rho: ComplexMatrix, povm: Povm) -> np.ndarray:
    """Tr[d_rho Pi_x] for every outcome."""
    return np.real(np.einsum("xij,ji->x", povm.elements, d_rho))


def sld_measurement(sld: ComplexMatrix) -> Povm:
    """Projective measurement on the eigenbasis of an SLD operator.

    Its classical Fisher information for that one parameter equals the
    corresponding QFI diagonal element.
    """
    eig = hermitian_eig(sld)
    vectors = eig.eigenvectors
    elements = np.stack(
        [np.outer(vectors[:, n], vectors[:, n].conj()) for n in range(vectors.shape[1])]
    )
    labels = tuple(("sld", str(n)) for n in range(vectors.shape[1]))
    return Povm(elements=elements, labels=labels)
