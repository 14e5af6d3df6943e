"""Monte-Carlo campaigns checking the Cramer-Rao bounds empirically.

A campaign draws `repeats` independent outcome records of M photon pairs at
a true parameter point, fits each one by maximum likelihood and returns the
sample covariance of the estimates. Repeat r uses seed + r, so a campaign is
reproducible whether its repeats run serially or on a process pool.

Each record is fitted twice, from the truth and from the best coarse-grid
point; the fit with the higher likelihood is kept. Fits that leave the
identifiable region are counted and excluded.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import numpy.typing as npt
from tqdm import tqdm

from core.errors import BoundaryFitError, InsufficientEstimatesError
from core.spectral import SpectralParams
from montecarlo.likelihood import grid_seed, in_region, log_likelihood, mle_fit
from montecarlo.sampler import sample_outcomes
from probe.state import PhaseParams

logger = logging.getLogger(__name__)

FIT_AGREEMENT_TOL = 1e-4


@dataclass(frozen=True)
class EstimationRun:
    """Estimates and their sample covariance at one true point."""

    true_params: PhaseParams
    estimates: npt.NDArray[np.float64]
    empirical_cov: npt.NDArray[np.float64]
    shots: int
    seed: int
    boundary_fits: int = 0

    @property
    def repeats(self) -> int:
        return len(self.estimates) + self.boundary_fits

    def scaled_variances(self) -> tuple[float, float]:
        """(M Var(phi0_hat), M Var(phi1_hat))."""
        return (
            float(self.shots * self.empirical_cov[0, 0]),
            float(self.shots * self.empirical_cov[1, 1]),
        )


@dataclass(frozen=True)
class VarianceScaling:
    """Per-parameter variances across shot counts and their log-log slopes."""

    shots: tuple[int, ...]
    variances: npt.NDArray[np.float64]
    slopes: tuple[float, float]


def empirical_covariance(estimates: Sequence[Sequence[float]]) -> npt.NDArray[np.float64]:
    """Unbiased (ddof = 1) sample covariance of 2-parameter estimates.

    Raises:
        InsufficientEstimatesError: fewer than 2 estimates.
    """
    data = np.asarray(estimates, dtype=np.float64).reshape(-1, 2)
    if len(data) < 2:
        raise InsufficientEstimatesError(
            f"fewer than 2 estimates: got {len(data)}, covariance is undefined"
        )
    return np.atleast_2d(np.cov(data, rowvar=False, ddof=1))


def _fit_repeat(task: tuple[PhaseParams, SpectralParams, int, int]) -> tuple[float, float] | None:
    """Sample one record and fit it; None when every fit hit the boundary."""
    truth, spectral, shots, seed = task
    record = sample_outcomes(truth, spectral, shots, seed)

    seeds = [grid_seed(record, spectral)]
    if in_region(truth):
        seeds.insert(0, truth)

    fits = []
    for init in seeds:
        try:
            fits.append(mle_fit(record, spectral, init))
        except BoundaryFitError as e:
            logger.debug("seed %d: %s", seed, e)
    if not fits:
        return None

    scored = [(log_likelihood(record, fit, spectral), fit) for fit in fits]
    best = max(scored, key=lambda item: item[0])[1]
    if len(fits) == 2:
        gap = np.max(np.abs(fits[0].as_array() - fits[1].as_array()))
        if gap > FIT_AGREEMENT_TOL:
            logger.info(
                "seed %d: truth- and grid-seeded fits disagree by %.2e; kept (%.6f, %.6f)",
                seed,
                gap,
                best.phi0,
                best.phi1,
            )
    return best.phi0, best.phi1


def run_campaign(
    p: PhaseParams,
    s: SpectralParams,
    shots: int,
    repeats: int,
    seed: int,
    workers: int = 1,
    progress: bool = False,
) -> EstimationRun:
    """Run `repeats` independent sample-and-fit rounds at the true point p.

    Args:
        p: True phase parameters.
        s: Spectral parameters.
        shots: Photon pairs per repeat (M).
        repeats: Number of repeats (>= 2).
        seed: Base seed; repeat r uses seed + r.
        workers: Process count; 1 runs in-process.
        progress: Show a tqdm progress bar.

    Returns:
        EstimationRun with the kept estimates and their covariance.

    Raises:
        InsufficientEstimatesError: repeats < 2, or fewer than 2 fits stayed
            inside the identifiable region.
    """
    if repeats < 2:
        raise InsufficientEstimatesError(
            f"fewer than 2 estimates: repeats = {repeats}, covariance is undefined"
        )
    tasks = [(p, s, shots, seed + r) for r in range(repeats)]
    desc = f"MC eps={s.epsilon:+.3f} M={shots}"

    if workers <= 1:
        results = list(tqdm(map(_fit_repeat, tasks), total=repeats, desc=desc, disable=not progress))
    else:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(
                tqdm(
                    executor.map(_fit_repeat, tasks, chunksize=max(1, repeats // (4 * workers))),
                    total=repeats,
                    desc=desc,
                    disable=not progress,
                )
            )

    estimates = [r for r in results if r is not None]
    boundary = repeats - len(estimates)
    if boundary:
        logger.warning("%d of %d fits left the identifiable region", boundary, repeats)

    return EstimationRun(
        true_params=p,
        estimates=np.asarray(estimates, dtype=np.float64).reshape(-1, 2),
        empirical_cov=empirical_covariance(estimates),
        shots=shots,
        seed=seed,
        boundary_fits=boundary,
    )


def variance_scaling(
    p: PhaseParams,
    s: SpectralParams,
    shots_list: Sequence[int],
    repeats: int,
    seed: int,
    workers: int = 1,
) -> VarianceScaling:
    """Estimator variances at several M and their log-log slopes against M.

    Efficient estimators give slopes close to -1.
    """
    variances = []
    for shots in shots_list:
        run = run_campaign(p, s, shots, repeats, seed, workers=workers)
        variances.append(np.diag(run.empirical_cov))
    table = np.asarray(variances)
    log_shots = np.log(np.asarray(shots_list, dtype=np.float64))
    slopes = tuple(
        float(np.polyfit(log_shots, np.log(table[:, j]), 1)[0]) for j in range(2)
    )
    logger.info("variance scaling slopes: phi0 %.3f, phi1 %.3f", *slopes)
    return VarianceScaling(shots=tuple(int(m) for m in shots_list), variances=table, slopes=slopes)
