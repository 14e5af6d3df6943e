"""Correlated-Photon Estimation Toolkit - Entry Point.

Runs epsilon sweeps of the Fisher quantities, Monte-Carlo checks of the
Cramer-Rao bounds, and the Q11 bifurcation search, writing CSV data for
external plotting.

Usage:
    python main.py sweep --config configs/fig1_qfi00.env
    python main.py sweep --quantity upsilon --phi1 0.1,1,2 --out output/ups.csv
    python main.py montecarlo --config configs/mc_crb_check.env --workers 8
    python main.py critical --sigma 1

Exit status: 0 success, 1 runtime failure, 2 config error,
3 singular points present with --strict.
"""

import argparse
import logging
import sys
from datetime import datetime
from typing import Any

from config.settings import build_sweep_config, load_config_file, load_settings
from core.errors import ERROR_INVALID_CONFIG, ERROR_OUTPUT_UNWRITABLE, NumericsError
from core.schema import MONTECARLO_QUANTITY
from sweep.analysis import critical_dephasing
from sweep.orchestrator import SweepOrchestrator

logger = logging.getLogger("main")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_SINGULAR = 3

CONFIG_ERROR_CODES = {ERROR_INVALID_CONFIG, ERROR_OUTPUT_UNWRITABLE}


def configure_logging(quiet: bool) -> None:
    """Log to standard error; --quiet keeps warnings and errors only."""
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format="%(asctime)s [%(name)s] %(levelname)s: %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    """CLI with sweep, montecarlo and critical subcommands."""
    parser = argparse.ArgumentParser(
        description="Joint phase/dephasing estimation numerics for frequency-correlated photon pairs."
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    run_flags = argparse.ArgumentParser(add_help=False)
    run_flags.add_argument("--config", help="dotenv-format run config; flags override its values.")
    run_flags.add_argument("--quantity", help="qfi00, qfi11, fi00, fi11, upsilon, weak_comm, stokes_xx, purity, montecarlo.")
    phase = run_flags.add_mutually_exclusive_group()
    phase.add_argument("--phi0", type=float, help="Mean phase phi0 (default pi/4).")
    phase.add_argument("--phi0-k", type=int, dest="phi0_k", help="Set phi0 = k*pi/4.")
    run_flags.add_argument("--phi1", help="Comma-separated dephasing values, e.g. 0.1,0.5,1,2.")
    run_flags.add_argument("--eps-min", type=float, dest="eps_min")
    run_flags.add_argument("--eps-max", type=float, dest="eps_max")
    run_flags.add_argument("--eps-steps", type=int, dest="eps_steps")
    run_flags.add_argument("--sigma", type=float)
    run_flags.add_argument("--mc-shots", type=int, dest="mc_shots", help="Photon pairs per repeat (M).")
    run_flags.add_argument("--mc-repeats", type=int, dest="mc_repeats")
    run_flags.add_argument("--seed", type=int)
    run_flags.add_argument("--out", help="Output CSV path.")
    run_flags.add_argument("--workers", type=int, help="Worker processes (0 = all processors).")
    run_flags.add_argument(
        "--strict",
        action="store_const",
        const=True,
        default=None,
        help="Exit with status 3 if any point is singular.",
    )
    run_flags.add_argument("--quiet", action="store_true", help="No progress output.")

    subparsers.add_parser("sweep", parents=[run_flags], help="Sweep a quantity over epsilon.")
    subparsers.add_parser("montecarlo", parents=[run_flags], help="Monte-Carlo Cramer-Rao check.")

    critical = subparsers.add_parser("critical", help="Locate the phi1 where Q11(eps) bifurcates.")
    critical.add_argument("--sigma", type=float, default=1.0)
    critical.add_argument("--quiet", action="store_true")
    return parser


def overrides_from_args(args: argparse.Namespace) -> dict[str, Any]:
    """Map parsed flags to config keys; unset flags stay None."""
    overrides = {
        "QUANTITY": args.quantity,
        "PHI0": args.phi0,
        "PHI0_K": args.phi0_k,
        "PHI1": args.phi1,
        "EPS_MIN": args.eps_min,
        "EPS_MAX": args.eps_max,
        "EPS_STEPS": args.eps_steps,
        "SIGMA": args.sigma,
        "MC_SHOTS": args.mc_shots,
        "MC_REPEATS": args.mc_repeats,
        "SEED": args.seed,
        "OUT": args.out,
        "WORKERS": args.workers,
        "STRICT": args.strict,
    }
    if args.command == "montecarlo" and not args.quantity:
        overrides["QUANTITY"] = MONTECARLO_QUANTITY
    return overrides


def run_command(args: argparse.Namespace) -> int:
    """Build the config, run it, and map the outcome to an exit status."""
    settings = load_settings()
    file_values = load_config_file(args.config) if args.config else None
    config = build_sweep_config(settings, file_values, overrides_from_args(args))

    if args.command == "montecarlo" and config.quantity != MONTECARLO_QUANTITY:
        print(f"  ERROR: montecarlo subcommand got quantity '{config.quantity}'", file=sys.stderr)
        return EXIT_CONFIG

    run_ts = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
    if not args.quiet:
        print(f"=== {config.quantity} run - {run_ts} ===", file=sys.stderr)

    orchestrator = SweepOrchestrator(settings, progress=not args.quiet)
    if config.quantity == MONTECARLO_QUANTITY:
        result = orchestrator.run_montecarlo(config)
    else:
        result = orchestrator.run_sweep(config)

    if "error" in result:
        print(f"  ERROR: {result['error']}", file=sys.stderr)
        return EXIT_CONFIG if result.get("code") in CONFIG_ERROR_CODES else EXIT_RUNTIME

    if not args.quiet:
        print(
            f"  {result['rows']} row(s), {result['singular']} singular, "
            f"{result['failed']} failed",
            file=sys.stderr,
        )
        print(f"Saved to: {result['output_path']}", file=sys.stderr)

    if config.strict and result["singular"]:
        print(f"  ERROR: {result['singular']} singular point(s) with --strict", file=sys.stderr)
        return EXIT_SINGULAR
    if result["failed"]:
        return EXIT_RUNTIME
    return EXIT_OK


def run_critical(args: argparse.Namespace) -> int:
    """Print the bifurcation value phi1* of Q11(eps)."""
    value = critical_dephasing(sigma=args.sigma)
    print(f"{value:.12g}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run the chosen subcommand and return its exit status."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.quiet)

    try:
        if args.command == "critical":
            return run_critical(args)
        return run_command(args)
    except NumericsError as e:
        print(f"  ERROR: {e.message}", file=sys.stderr)
        return EXIT_CONFIG if e.code == ERROR_INVALID_CONFIG else EXIT_RUNTIME
    except Exception as e:  # noqa: BLE001
        logger.exception("Unexpected failure: %s", e)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
