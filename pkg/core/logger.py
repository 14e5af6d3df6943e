"""Run Logger.

Logs every sweep and Monte-Carlo run to daily log files as newline-delimited
JSON (NDJSON). A run writes a "started" entry with its full configuration and
a "completed" (or "failed") entry with row counts and the SHA-256 digest of
the CSV it produced, so two runs can be compared for byte-identical output
with nothing but jq.
"""

import hashlib
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

# Directory for run logs
LOG_DIR = Path(__file__).parent.parent / "logs" / "runs"

# Standard Python logger for error-level events
_error_logger = logging.getLogger("core.errors")


def _ensure_log_dir(log_dir: Path) -> None:
    """Create the log directory if it doesn't exist."""
    log_dir.mkdir(parents=True, exist_ok=True)


def _resolve_log_dir(log_dir: str | Path | None) -> Path:
    if log_dir is None:
        return LOG_DIR
    path = Path(log_dir)
    return path if path.is_absolute() else Path(__file__).parent.parent / path


def digest_text(text: str) -> str:
    """Return the SHA-256 hex digest of a UTF-8 text."""
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def log_run_event(
    payload: dict[str, Any],
    event: str,
    run_id: str,
    log_dir: str | Path | None = None,
) -> None:
    """Append a run event to the daily log file.

    Each log entry is a JSON object on its own line (NDJSON format),
    which makes it easy to filter with jq.

    Args:
        payload: Event data (config, counts, digest, error).
        event: "started", "completed" or "failed".
        run_id: Identifier shared by all events of one run.
        log_dir: Override for LOG_DIR; relative paths resolve against the repo root.
    """
    try:
        target = _resolve_log_dir(log_dir)
        _ensure_log_dir(target)
        today = datetime.now(timezone.utc).strftime("%Y-%m-%d")
        log_file = target / f"{today}.log"

        log_entry = {
            "logged_at": datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ"),
            "event": event,
            "run_id": run_id,
            "payload": payload,
        }

        with open(log_file, "a", encoding="utf-8") as f:
            f.write(json.dumps(log_entry, default=str) + "\n")
    except OSError as e:
        _error_logger.error("Failed to write run log: %s", e)
