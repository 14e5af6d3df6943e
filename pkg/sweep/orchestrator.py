"""Sweep Orchestrator - Core logic.

Runs a validated SweepConfig end to end: expands it into parameter points,
evaluates them on a worker pool, assembles the CSV in deterministic order,
saves it and records the run in the NDJSON run log.

Concept: a point never aborts a run. Each worker returns a result dict with
a PointStatus; singular points (the pure-state boundary) and numerical
failures become rows with an empty value, and the caller decides from the
counts whether that is fatal (``--strict``).
"""

import logging
import uuid
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable

from tqdm import tqdm

from config.settings import Settings, SweepConfig
from core.errors import (
    InvalidConfigError,
    NumericsError,
    OutputUnwritableError,
    SingularPointError,
)
from core.linalg import sym2_inverse
from core.logger import digest_text, log_run_event
from core.schema import (
    MONTECARLO_QUANTITY,
    PointStatus,
    create_montecarlo_result,
    create_point_result,
)
from core.spectral import SpectralParams
from core.validator import validate_sweep_config
from estimation.fisher import (
    fi_matrix,
    fisher_pair,
    qfi_matrix,
    require_mixed,
    weak_commutativity,
)
from montecarlo.likelihood import in_region
from montecarlo.runner import run_campaign
from probe.state import PhaseParams, purity, stokes_correlator
from sweep.analysis import epsilon_grid
from sweep.formatter import build_montecarlo_csv, build_sweep_csv

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Quantities
# ---------------------------------------------------------------------------


def _qfi11(p: PhaseParams, s: SpectralParams) -> float:
    require_mixed(p)
    return float(qfi_matrix(p, s)[1, 1])


QUANTITY_EVALUATORS: dict[str, Callable[[PhaseParams, SpectralParams], float]] = {
    "qfi00": lambda p, s: float(qfi_matrix(p, s)[0, 0]),
    "qfi11": _qfi11,
    "fi00": lambda p, s: float(fi_matrix(p, s)[0, 0]),
    "fi11": lambda p, s: float(fi_matrix(p, s)[1, 1]),
    "upsilon": lambda p, s: fisher_pair(p, s).upsilon,
    "weak_comm": weak_commutativity,
    "stokes_xx": stokes_correlator,
    "purity": purity,
}


def evaluate_quantity(quantity: str, p: PhaseParams, s: SpectralParams) -> float:
    """Evaluate one sweep quantity at one point.

    Raises:
        KeyError: Unknown quantity.
        SingularPointError: The quantity is undefined at phi1 = 0.
    """
    return QUANTITY_EVALUATORS[quantity](p, s)


def evaluate_point(task: dict[str, Any]) -> dict[str, Any]:
    """Worker entry point: evaluate a point and wrap the outcome in a result dict."""
    p = PhaseParams(task["phi0"], task["phi1"])
    s = SpectralParams(sigma=task["sigma"], epsilon=task["epsilon"])
    try:
        value = evaluate_quantity(task["quantity"], p, s)
        status, message = PointStatus.OK, ""
    except SingularPointError as e:
        value, status, message = None, PointStatus.SINGULAR, e.message
    except NumericsError as e:
        logger.warning("%s failed at %s, %s: %s", task["quantity"], p, s, e.message)
        value, status, message = None, PointStatus.FAILED, f"{e.code}: {e.message}"
    return create_point_result(
        task["quantity"],
        task["phi0"],
        task["phi1"],
        task["epsilon"],
        task["sigma"],
        value=value,
        status=status,
        message=message,
    )


def build_tasks(config: SweepConfig) -> list[dict[str, Any]]:
    """Expand a config into point tasks sorted by (phi1, epsilon)."""
    grid = epsilon_grid(config.eps_min, config.eps_max, config.eps_steps)
    return [
        {
            "quantity": config.quantity,
            "phi0": config.phi0,
            "phi1": phi1,
            "epsilon": float(eps),
            "sigma": config.sigma,
        }
        for phi1 in sorted(set(config.phi1_list))
        for eps in grid
    ]


def save_csv(text: str, output_path: str | Path) -> str:
    """Write CSV text as UTF-8 with LF line endings.

    Raises:
        OSError: The path cannot be written.
    """
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(text)
    return str(path)


# ---------------------------------------------------------------------------
# Orchestrator
# ---------------------------------------------------------------------------


class SweepOrchestrator:
    """Runs sweeps and Monte-Carlo campaigns from SweepConfig objects."""

    def __init__(self, settings: Settings, progress: bool = True) -> None:
        """Initialize the SweepOrchestrator.

        Args:
            settings: Process-wide settings (worker default, log directory).
            progress: Show tqdm progress bars on standard error.
        """
        self.settings = settings
        self.progress = progress

    def run_sweep(self, config: SweepConfig) -> dict[str, Any]:
        """Evaluate config.quantity over the epsilon x phi1 grid and save the CSV.

        Args:
            config: The run configuration.

        Returns:
            Result dict with "output_path", "rows", "singular", "failed",
            "digest" and "run_id". Contains "error" and "code" on failure.
        """
        is_valid, err = validate_sweep_config(config)
        if not is_valid:
            return InvalidConfigError(err).to_dict()
        if config.quantity == MONTECARLO_QUANTITY:
            return self.run_montecarlo(config)

        run_id = uuid.uuid4().hex[:12]
        log_run_event({"config": config.to_dict()}, "started", run_id, self.settings.run_log_dir)

        tasks = build_tasks(config)
        workers = self.settings.resolved_workers(config.workers)
        logger.info(
            "Sweeping %s over %d point(s) with %d worker(s)", config.quantity, len(tasks), workers
        )
        rows = self._map(evaluate_point, tasks, workers, desc=config.quantity)

        return self._finish(run_id, config, rows, build_sweep_csv(rows))

    def run_montecarlo(self, config: SweepConfig) -> dict[str, Any]:
        """Run one Monte-Carlo campaign per (phi1, epsilon) point and save the CSV.

        Repeats within a campaign run on the worker pool; points run in order.

        Args:
            config: The run configuration; config.mc must be set.

        Returns:
            Result dict as for run_sweep.
        """
        is_valid, err = validate_sweep_config(config)
        if not is_valid:
            return InvalidConfigError(err).to_dict()
        mc = config.mc
        if mc is None:
            return InvalidConfigError("montecarlo requires MC_SHOTS and MC_REPEATS").to_dict()
        if mc.repeats < 2:
            return InvalidConfigError(f"fewer than 2 estimates: repeats = {mc.repeats}").to_dict()
        for phi1 in config.phi1_list:
            if not in_region(PhaseParams(config.phi0, phi1)):
                return InvalidConfigError(
                    f"Monte-Carlo point (phi0={config.phi0:.6g}, phi1={phi1:.6g}) is outside "
                    "the identifiable region phi0 in (0, pi/2), phi1 in (0.05, 3)",
                ).to_dict()

        run_id = uuid.uuid4().hex[:12]
        log_run_event({"config": config.to_dict()}, "started", run_id, self.settings.run_log_dir)

        workers = self.settings.resolved_workers(config.workers)
        rows = []
        for task in build_tasks(config):
            rows.append(self._montecarlo_point(task, config, workers))

        return self._finish(run_id, config, rows, build_montecarlo_csv(rows))

    def _montecarlo_point(
        self, task: dict[str, Any], config: SweepConfig, workers: int
    ) -> dict[str, Any]:
        mc = config.mc
        p = PhaseParams(task["phi0"], task["phi1"])
        s = SpectralParams(sigma=task["sigma"], epsilon=task["epsilon"])
        common = {
            "phi0": task["phi0"],
            "phi1": task["phi1"],
            "epsilon": task["epsilon"],
            "sigma": task["sigma"],
            "shots": mc.shots,
            "repeats": mc.repeats,
            "seed": mc.seed,
        }
        try:
            bounds = fisher_pair(p, s)
            f_inv = sym2_inverse(bounds.F)
            q_inv = sym2_inverse(bounds.Q)
            run = run_campaign(
                p, s, mc.shots, mc.repeats, mc.seed, workers=workers, progress=self.progress
            )
        except SingularPointError as e:
            return create_montecarlo_result(**common, status=PointStatus.SINGULAR, message=e.message)
        except NumericsError as e:
            logger.warning("Monte-Carlo point failed at %s, %s: %s", p, s, e.message)
            return create_montecarlo_result(
                **common, status=PointStatus.FAILED, message=f"{e.code}: {e.message}"
            )

        m_var = run.scaled_variances()
        logger.info(
            "eps=%+.3f: M var = (%.4f, %.4f), F^-1 = (%.4f, %.4f), Q^-1 = (%.4f, %.4f)",
            task["epsilon"],
            m_var[0],
            m_var[1],
            f_inv[0, 0],
            f_inv[1, 1],
            q_inv[0, 0],
            q_inv[1, 1],
        )
        return create_montecarlo_result(
            **common,
            m_var=m_var,
            f_inv_diag=(float(f_inv[0, 0]), float(f_inv[1, 1])),
            q_inv_diag=(float(q_inv[0, 0]), float(q_inv[1, 1])),
            boundary_fits=run.boundary_fits,
        )

    def _map(
        self,
        fn: Callable[[dict[str, Any]], dict[str, Any]],
        tasks: list[dict[str, Any]],
        workers: int,
        desc: str,
    ) -> list[dict[str, Any]]:
        """Order-preserving map, in-process for one worker, else on a process pool."""
        if workers <= 1 or len(tasks) <= 1:
            return list(tqdm(map(fn, tasks), total=len(tasks), desc=desc, disable=not self.progress))
        chunksize = max(1, len(tasks) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(
                tqdm(
                    executor.map(fn, tasks, chunksize=chunksize),
                    total=len(tasks),
                    desc=desc,
                    disable=not self.progress,
                )
            )

    def _finish(
        self, run_id: str, config: SweepConfig, rows: list[dict[str, Any]], text: str
    ) -> dict[str, Any]:
        """Save the CSV, log the outcome and build the result dict."""
        singular = sum(1 for r in rows if r["status"] == PointStatus.SINGULAR.value)
        failed = sum(1 for r in rows if r["status"] == PointStatus.FAILED.value)
        digest = digest_text(text)

        try:
            output_path = save_csv(text, config.output_path)
        except OSError as e:
            message = f"Cannot write output {config.output_path}: {e}"
            logger.error("Cannot write output %s: %s", config.output_path, e)
            log_run_event({"error": message}, "failed", run_id, self.settings.run_log_dir)
            return OutputUnwritableError(message).to_dict()

        logger.info(
            "Saved %d row(s) to %s (%d singular, %d failed)", len(rows), output_path, singular, failed
        )
        summary = {
            "output_path": output_path,
            "rows": len(rows),
            "singular": singular,
            "failed": failed,
            "digest": digest,
        }
        log_run_event(summary, "completed", run_id, self.settings.run_log_dir)
        return {**summary, "run_id": run_id, "records": rows}
