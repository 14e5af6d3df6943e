"""Multinomial sampling of joint Stokes outcomes."""

import logging
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from core.errors import InvalidParameterError
from core.spectral import SpectralParams
from estimation.povm import Povm, outcome_probabilities, stokes_povm
from probe.state import PhaseParams, density_matrix

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OutcomeRecord:
    """Counts over the POVM outcomes from M photon pairs."""

    counts: npt.NDArray[np.int64]
    total: int
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.total < 1:
            raise InvalidParameterError(f"record total must be >= 1, got {self.total}")
        if np.any(self.counts < 0) or int(self.counts.sum()) != self.total:
            raise InvalidParameterError(
                f"counts must be nonnegative and sum to {self.total}, "
                f"got sum {int(self.counts.sum())}"
            )

    def frequencies(self) -> npt.NDArray[np.float64]:
        return self.counts / self.total


def model_probabilities(
    p: PhaseParams, s: SpectralParams, povm: Povm | None = None
) -> npt.NDArray[np.float64]:
    """Outcome probabilities, clipped at zero and renormalized."""
    probs = outcome_probabilities(density_matrix(p, s), povm or stokes_povm())
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def sample_outcomes(
    p: PhaseParams,
    s: SpectralParams,
    shots: int,
    seed: int,
    povm: Povm | None = None,
) -> OutcomeRecord:
    """Draw M joint outcomes; identical seeds give identical counts.

    Raises:
        InvalidParameterError: shots < 1 or a negative seed.
    """
    if shots < 1:
        raise InvalidParameterError(f"shots must be >= 1, got {shots}")
    if seed < 0:
        raise InvalidParameterError(f"seed must be >= 0, got {seed}")
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(shots, model_probabilities(p, s, povm))
    return OutcomeRecord(counts=counts.astype(np.int64), total=shots, seed=seed)
