"""CSV builder for sweep and Monte-Carlo results.

Builds the output text deterministically from result dicts: fixed header,
12 significant digits, `.` decimal separator, LF line endings. Identical
rows always give byte-identical text, which is what the run log's SHA-256
digest relies on.
"""

import csv
import io
import logging
from typing import Any, Iterable, Sequence

from core.schema import MONTECARLO_HEADER, SWEEP_HEADER

logger = logging.getLogger(__name__)

SIGNIFICANT_DIGITS = 12


def format_number(value: float | int | None) -> str:
    """Render a number for the CSV; None becomes an empty field.

    Integers are written as integers, floats with 12 significant digits.
    Negative zero is written as 0.
    """
    if value is None:
        return ""
    if isinstance(value, (bool, str)):
        return str(value)
    if isinstance(value, int):
        return str(value)
    text = format(float(value), f".{SIGNIFICANT_DIGITS}g")
    return "0" if text == "-0" else text


def _build_csv(header: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    count = 0
    for row in rows:
        writer.writerow([format_number(row.get(column)) for column in header])
        count += 1
    logger.debug("Built CSV with %d row(s)", count)
    return buffer.getvalue()


def build_sweep_csv(rows: Iterable[dict[str, Any]]) -> str:
    """CSV text with header quantity,phi0,phi1,epsilon,sigma,value,status."""
    return _build_csv(SWEEP_HEADER, rows)


def build_montecarlo_csv(rows: Iterable[dict[str, Any]]) -> str:
    """CSV text with one row per Monte-Carlo point."""
    return _build_csv(MONTECARLO_HEADER, rows)
