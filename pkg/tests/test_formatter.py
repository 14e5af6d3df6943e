"""Tests for the CSV builder."""

from core.schema import (
    MONTECARLO_HEADER,
    PointStatus,
    create_montecarlo_result,
    create_point_result,
)
from sweep.formatter import build_montecarlo_csv, build_sweep_csv, format_number


class TestFormatNumber:
    def test_none_is_empty(self) -> None:
        assert format_number(None) == ""

    def test_integers(self) -> None:
        assert format_number(200) == "200"
        assert format_number(0) == "0"

    def test_twelve_significant_digits(self) -> None:
        assert format_number(0.785398163397448) == "0.785398163397"
        assert format_number(2.0) == "2"
        assert format_number(1e-14) == "1e-14"

    def test_negative_zero(self) -> None:
        assert format_number(-0.0) == "0"

    def test_strings_pass_through(self) -> None:
        assert format_number("ok") == "ok"


class TestBuildSweepCsv:
    def test_header_and_rows(self) -> None:
        rows = [
            create_point_result("qfi00", 0.5, 1.0, -1.0, 1.0, value=2.0),
            create_point_result(
                "qfi11", 0.5, 0.0, 0.0, 1.0, status=PointStatus.SINGULAR, message="pure state"
            ),
        ]
        text = build_sweep_csv(rows)
        assert text == (
            "quantity,phi0,phi1,epsilon,sigma,value,status\n"
            "qfi00,0.5,1,-1,1,2,ok\n"
            "qfi11,0.5,0,0,1,,singular\n"
        )

    def test_lf_line_endings(self) -> None:
        text = build_sweep_csv([create_point_result("purity", 0.0, 0.0, 0.0, 1.0, value=1.0)])
        assert "\r" not in text
        assert text.endswith("\n")

    def test_empty(self) -> None:
        assert build_sweep_csv([]) == "quantity,phi0,phi1,epsilon,sigma,value,status\n"


class TestBuildMontecarloCsv:
    def test_header(self) -> None:
        header = build_montecarlo_csv([]).strip()
        assert header.split(",") == list(MONTECARLO_HEADER)
        assert len(MONTECARLO_HEADER) == 15

    def test_failed_row_keeps_run_columns(self) -> None:
        row = create_montecarlo_result(
            0.5, 1.0, 0.0, 1.0, 1000, 10, 7, status=PointStatus.FAILED, message="x"
        )
        line = build_montecarlo_csv([row]).splitlines()[1]
        assert line == "0.5,1,0,1,1000,10,7,,,,,,,0,failed"
