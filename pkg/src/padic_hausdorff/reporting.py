"""
Report Emission
Verification reports as csv or json with a fixed column order and numbers
written to 15 significant digits, plus a plain-text summary table for the
console.
"""

import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import pandas as pd

from .models.report import VerificationReport
from .utils.error_handling import ParameterOutOfRange, ReportIOError

logger = logging.getLogger(__name__)

COLUMNS = ["scenario_id", "theorem", "lhs", "rhs", "rel_err_or_constant", "status", "seed", "wall_ms"]
NUMERIC_COLUMNS = ("lhs", "rhs", "rel_err_or_constant", "wall_ms")
SIGNIFICANT_DIGITS = 15


def format_number(value: Optional[float]) -> str:
    """15 significant digits; non-finite values as inf, -inf or nan."""
    if value is None:
        return ""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


def _json_number(value: Optional[float]) -> Union[float, str, None]:
    if value is None:
        return None
    value = float(value)
    if not math.isfinite(value):
        return format_number(value)
    return float(format_number(value))


def _records(reports: Sequence[VerificationReport], reproducible: bool) -> List[Dict[str, Any]]:
    rows = []
    for report in reports:
        row = {column: report.to_dict()[column] for column in COLUMNS}
        if reproducible:
            row["wall_ms"] = 0.0
        rows.append(row)
    return rows


def report_frame(reports: Sequence[VerificationReport], reproducible: bool = False) -> pd.DataFrame:
    """Reports as a DataFrame in the fixed column order."""
    return pd.DataFrame(_records(reports, reproducible), columns=COLUMNS)


def emit_report(
    reports: Sequence[VerificationReport],
    format: str = "csv",
    path: Optional[Union[str, Path]] = None,
    reproducible: bool = False,
) -> str:
    """
    Serialize reports, writing them to ``path`` when given.

    ``reproducible`` writes wall_ms as 0 so equal runs give byte-identical files.

    Raises:
        ParameterOutOfRange: for an unknown format
        ReportIOError: when the file cannot be written
    """
    frame = report_frame(reports, reproducible)
    if format == "csv":
        text_frame = frame.astype(object)
        for column in NUMERIC_COLUMNS:
            text_frame[column] = [format_number(v) for v in frame[column]]
        text_frame["seed"] = ["" if pd.isna(v) else str(int(v)) for v in frame["seed"]]
        text = text_frame.to_csv(index=False, lineterminator="\n")
    elif format == "json":
        records = []
        for row in frame.to_dict(orient="records"):
            for column in NUMERIC_COLUMNS:
                row[column] = _json_number(row[column])
            row["seed"] = None if pd.isna(row["seed"]) else int(row["seed"])
            records.append(row)
        text = json.dumps(records, indent=2) + "\n"
    else:
        raise ParameterOutOfRange(f"unknown report format {format!r}, expected csv or json")

    if path is not None:
        target = Path(path)
        try:
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8")
        except OSError as e:
            raise ReportIOError(f"cannot write report to {target}: {e}", details={"path": str(target)})
        logger.info(f"Wrote {len(reports)} report(s) to {target}")
    return text


def summary_table(reports: Sequence[VerificationReport]) -> str:
    """Human-readable table of the reports."""
    if not reports:
        return "no scenarios"
    frame = report_frame(reports)
    for column in NUMERIC_COLUMNS:
        frame[column] = [f"{v:.6g}" for v in frame[column]]
    return frame.drop(columns=["seed"]).to_string(index=False)
