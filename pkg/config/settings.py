"""Global Settings - Loads configuration from environment variables.

Centralizes process-wide defaults (worker count, log directory, default
phase and bandwidth) and builds per-run SweepConfig objects from three layers:
Settings defaults, a dotenv-format config file, and CLI overrides. Later
layers win.
"""

import math
import os
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Any

from dotenv import dotenv_values, load_dotenv

from core.errors import InvalidConfigError

load_dotenv()

DEFAULT_PHI1_LIST = (0.1, 0.5, 1.0, 2.0)
DEFAULT_EPS_STEPS = 81
DEFAULT_SHOTS = 100_000
DEFAULT_REPEATS = 200

# Keys accepted in config files and as CLI overrides.
CONFIG_KEYS = (
    "QUANTITY",
    "PHI0",
    "PHI0_K",
    "PHI1",
    "EPS_MIN",
    "EPS_MAX",
    "EPS_STEPS",
    "SIGMA",
    "MC_SHOTS",
    "MC_REPEATS",
    "SEED",
    "OUT",
    "WORKERS",
    "STRICT",
)


@dataclass
class Settings:
    """Application-wide settings loaded from environment variables."""

    # 0 = one worker per available processor
    workers: int = 0

    run_log_dir: str = "logs/runs"

    default_phi0: float = math.pi / 4
    default_sigma: float = 1.0

    def resolved_workers(self, requested: int | None = None) -> int:
        """Worker count with 0 mapped to the number of available processors."""
        workers = self.workers if requested is None else requested
        if workers > 0:
            return workers
        if hasattr(os, "sched_getaffinity"):
            return len(os.sched_getaffinity(0))
        return os.cpu_count() or 1


@dataclass
class MonteCarloConfig:
    """Shots per repeat, number of repeats and base seed."""

    shots: int = DEFAULT_SHOTS
    repeats: int = DEFAULT_REPEATS
    seed: int = 0


@dataclass
class SweepConfig:
    """One sweep or Monte-Carlo run."""

    quantity: str
    eps_min: float = -1.0
    eps_max: float = 1.0
    eps_steps: int = DEFAULT_EPS_STEPS
    phi1_list: tuple[float, ...] = DEFAULT_PHI1_LIST
    phi0: float = math.pi / 4
    sigma: float = 1.0
    mc: MonteCarloConfig | None = None
    output_path: str = ""
    workers: int = 0
    strict: bool = False

    def to_dict(self) -> dict[str, Any]:
        """Plain dict for the run log."""
        data = {
            "quantity": self.quantity,
            "eps_min": self.eps_min,
            "eps_max": self.eps_max,
            "eps_steps": self.eps_steps,
            "phi1_list": list(self.phi1_list),
            "phi0": self.phi0,
            "sigma": self.sigma,
            "output_path": self.output_path,
            "workers": self.workers,
            "strict": self.strict,
        }
        if self.mc is not None:
            data["mc"] = {"shots": self.mc.shots, "repeats": self.mc.repeats, "seed": self.mc.seed}
        return data


def load_settings() -> Settings:
    """Load settings from environment variables with sensible defaults.

    Environment variables:
        SWEEP_WORKERS: Worker processes (0 = number of processors)
        RUN_LOG_DIR: Directory for NDJSON run logs
        DEFAULT_PHI0: Mean phase used when a run gives none
        DEFAULT_SIGMA: Bandwidth used when a run gives none

    Returns:
        A populated Settings instance.

    Raises:
        InvalidConfigError: A variable does not parse as a number.
    """
    try:
        return Settings(
            workers=int(os.getenv("SWEEP_WORKERS", "0")),
            run_log_dir=os.getenv("RUN_LOG_DIR", "logs/runs"),
            default_phi0=float(os.getenv("DEFAULT_PHI0", str(math.pi / 4))),
            default_sigma=float(os.getenv("DEFAULT_SIGMA", "1.0")),
        )
    except ValueError as e:
        raise InvalidConfigError(f"Invalid environment setting: {e}") from e


# ---------------------------------------------------------------------------
# Run configs
# ---------------------------------------------------------------------------


def load_config_file(path: str | Path) -> dict[str, str]:
    """Read a dotenv-format KEY=VALUE run config.

    Raises:
        InvalidConfigError: File missing or containing unknown keys.
    """
    config_path = Path(path)
    if not config_path.is_file():
        raise InvalidConfigError(f"Config file not found: {config_path}")
    values = {k.upper(): v for k, v in dotenv_values(config_path).items() if v is not None}
    unknown = sorted(set(values) - set(CONFIG_KEYS))
    if unknown:
        raise InvalidConfigError(f"Unknown config key(s) in {config_path}: {unknown}")
    return values


def merge_layers(*layers: dict[str, Any]) -> dict[str, Any]:
    """Merge config layers; later layers win, None values are skipped.

    PHI0 and PHI0_K are two spellings of one setting, so setting either
    clears the other from earlier layers.
    """
    merged: dict[str, Any] = {}
    for layer in layers:
        for key, value in layer.items():
            if value is None:
                continue
            if key == "PHI0":
                merged.pop("PHI0_K", None)
            elif key == "PHI0_K":
                merged.pop("PHI0", None)
            merged[key] = value
    return merged


def _parse(values: dict[str, Any], key: str, kind: type, default: Any) -> Any:
    if key not in values:
        return default
    raw = values[key]
    try:
        if kind is bool:
            if isinstance(raw, bool):
                return raw
            text = str(raw).strip().lower()
            if text not in ("1", "0", "true", "false", "yes", "no"):
                raise ValueError(raw)
            return text in ("1", "true", "yes")
        if kind is int:
            return _parse_int(raw)
        return kind(raw)
    except (TypeError, ValueError, InvalidOperation) as e:
        raise InvalidConfigError(f"Invalid value for {key}: {raw!r}") from e


def _parse_int(raw: Any) -> int:
    """Exact integer parse that also accepts integral decimals such as "1e5"."""
    if isinstance(raw, bool):
        raise ValueError(raw)
    if isinstance(raw, int):
        return raw
    number = Decimal(str(raw).strip())
    if not number.is_finite() or number != number.to_integral_value():
        raise ValueError(raw)
    return int(number)


def _parse_list(values: dict[str, Any], key: str, default: tuple[float, ...]) -> tuple[float, ...]:
    if key not in values:
        return default
    raw = values[key]
    items = raw if isinstance(raw, (list, tuple)) else str(raw).split(",")
    try:
        return tuple(float(item) for item in items if str(item).strip())
    except ValueError as e:
        raise InvalidConfigError(f"Invalid value for {key}: {raw!r}") from e


def build_sweep_config(
    settings: Settings,
    file_values: dict[str, Any] | None = None,
    overrides: dict[str, Any] | None = None,
) -> SweepConfig:
    """Build a SweepConfig from Settings, a config file and CLI overrides.

    Args:
        settings: Process-wide defaults.
        file_values: Values from load_config_file, if a file was given.
        overrides: CLI values keyed like the config file; None means unset.

    Returns:
        The merged SweepConfig (not yet validated).

    Raises:
        InvalidConfigError: Missing quantity or unparseable values.
    """
    values = merge_layers(file_values or {}, overrides or {})
    quantity = str(values.get("QUANTITY", "")).strip()
    if not quantity:
        raise InvalidConfigError("No quantity given (QUANTITY / --quantity)")

    if "PHI0_K" in values:
        phi0 = _parse(values, "PHI0_K", int, 1) * math.pi / 4
    else:
        phi0 = _parse(values, "PHI0", float, settings.default_phi0)

    mc = None
    if quantity == "montecarlo" or "MC_SHOTS" in values or "MC_REPEATS" in values:
        mc = MonteCarloConfig(
            shots=_parse(values, "MC_SHOTS", int, DEFAULT_SHOTS),
            repeats=_parse(values, "MC_REPEATS", int, DEFAULT_REPEATS),
            seed=_parse(values, "SEED", int, 0),
        )

    return SweepConfig(
        quantity=quantity,
        eps_min=_parse(values, "EPS_MIN", float, -1.0),
        eps_max=_parse(values, "EPS_MAX", float, 1.0),
        eps_steps=_parse(values, "EPS_STEPS", int, DEFAULT_EPS_STEPS),
        phi1_list=_parse_list(values, "PHI1", DEFAULT_PHI1_LIST),
        phi0=phi0,
        sigma=_parse(values, "SIGMA", float, settings.default_sigma),
        mc=mc,
        output_path=str(values.get("OUT") or f"output/{quantity}.csv"),
        workers=_parse(values, "WORKERS", int, settings.workers),
        strict=_parse(values, "STRICT", bool, False),
    )
