"""Tests for error codes and failure dicts."""

from core.errors import (
    ERROR_INVALID_CONFIG,
    ERROR_OUTPUT_UNWRITABLE,
    InvalidConfigError,
    NumericsError,
    OutputUnwritableError,
    SingularMatrixError,
    SingularPointError,
)


class TestFailureDicts:
    def test_invalid_config(self) -> None:
        error = InvalidConfigError("bad grid")
        assert error.to_dict() == {"error": "bad grid", "code": ERROR_INVALID_CONFIG}
        assert isinstance(error, ValueError)

    def test_output_unwritable(self) -> None:
        error = OutputUnwritableError("Cannot write output x.csv")
        assert error.to_dict()["code"] == ERROR_OUTPUT_UNWRITABLE
        assert isinstance(error, NumericsError)

    def test_subclass_keeps_own_code(self) -> None:
        error = SingularMatrixError("det F = 0")
        assert isinstance(error, SingularPointError)
        assert error.to_dict()["code"] != SingularPointError.code
