"""
Tests for csv/json report emission and the console summary.
"""

import io
import json
import math

import pandas as pd
import pytest

from src.padic_hausdorff.models.report import ReportStatus, VerificationReport
from src.padic_hausdorff.reporting import (
    COLUMNS,
    emit_report,
    format_number,
    report_frame,
    summary_table,
)
from src.padic_hausdorff.utils.error_handling import ParameterOutOfRange


@pytest.fixture
def reports():
    return [
        VerificationReport("a", "T31", 0.5, 0.5, 1.2e-16, ReportStatus.PASS, seed=7, wall_ms=3.25),
        VerificationReport.diverges("b", "T33", seed=7),
        VerificationReport("c", "T41i", 2.0, 1.0, 2.0, ReportStatus.FAIL, seed=None, wall_ms=1.0),
    ]


class TestFormatNumber:
    """Fifteen significant digits"""

    def test_digits(self):
        assert format_number(1 / 3) == "0.333333333333333"
        assert format_number(2.0) == "2"

    def test_non_finite(self):
        assert format_number(math.inf) == "inf"
        assert format_number(-math.inf) == "-inf"
        assert format_number(math.nan) == "nan"

    def test_missing(self):
        assert format_number(None) == ""


class TestCsv:
    """Fixed column order"""

    def test_empty_is_header_only(self):
        assert emit_report([], "csv") == ",".join(COLUMNS) + "\n"

    def test_rows(self, reports):
        lines = emit_report(reports, "csv").splitlines()
        assert lines[0] == ",".join(COLUMNS)
        assert lines[1] == "a,T31,0.5,0.5,1.2e-16,pass,7,3.25"
        assert lines[2] == "b,T33,inf,inf,inf,diverges,7,0"
        assert lines[3].endswith(",fail,,1")

    def test_reproducible_zeroes_wall_time(self, reports):
        frame = pd.read_csv(io.StringIO(emit_report(reports, "csv", reproducible=True)))
        assert list(frame.columns) == COLUMNS
        assert (frame["wall_ms"] == 0).all()

    def test_written_to_file(self, reports, tmp_path):
        path = tmp_path / "out" / "report.csv"
        text = emit_report(reports, "csv", path)
        assert path.read_text(encoding="utf-8") == text


class TestJson:
    """Records with non-finite values as strings"""

    def test_records(self, reports):
        records = json.loads(emit_report(reports, "json"))
        assert [r["scenario_id"] for r in records] == ["a", "b", "c"]
        assert list(records[0]) == COLUMNS
        assert records[0]["status"] == "pass"
        assert records[0]["seed"] == 7
        assert records[1]["lhs"] == "inf"
        assert records[2]["seed"] is None

    def test_empty(self):
        assert json.loads(emit_report([], "json")) == []


class TestErrors:
    """Unknown formats and summaries"""

    def test_unknown_format(self, reports):
        with pytest.raises(ParameterOutOfRange):
            emit_report(reports, "xml")

    def test_summary_table(self, reports):
        table = summary_table(reports)
        assert "diverges" in table
        assert "seed" not in table

    def test_summary_of_nothing(self):
        assert summary_table([]) == "no scenarios"

    def test_frame_columns(self, reports):
        assert list(report_frame(reports).columns) == COLUMNS
