"""Tests for epsilon grids and profile classification."""

import numpy as np
import pytest

from core.errors import ConvergenceError, InvalidParameterError
from sweep.analysis import (
    PROFILE_CENTRAL,
    PROFILE_ENDPOINT,
    PROFILE_INTERIOR,
    PROFILE_MONOTONE,
    PROFILE_OTHER,
    classify_profile,
    critical_dephasing,
    epsilon_grid,
    local_maxima,
)

EPS = [-1.0, -0.5, 0.0, 0.5, 1.0]


class TestEpsilonGrid:
    def test_endpoints_and_size(self) -> None:
        grid = epsilon_grid(-1.0, 1.0, 81)
        assert len(grid) == 81
        assert grid[0] == -1.0
        assert grid[-1] == 1.0
        assert grid[40] == 0.0

    def test_no_negative_zero(self) -> None:
        grid = epsilon_grid(-1.0, 1.0, 5)
        assert not np.signbit(grid[2])

    def test_rounded(self) -> None:
        grid = epsilon_grid(-1.0, 1.0, 81)
        np.testing.assert_array_equal(grid, np.round(grid, 12))

    def test_rejects_single_step(self) -> None:
        with pytest.raises(InvalidParameterError):
            epsilon_grid(-1.0, 1.0, 1)


class TestLocalMaxima:
    def test_interior_peak(self) -> None:
        assert local_maxima([0.0, 1.0, 0.0]) == [1]

    def test_endpoints_count(self) -> None:
        assert local_maxima([2.0, 1.0, 2.0]) == [0, 2]

    def test_plateau_is_not_strict(self) -> None:
        assert local_maxima([0.0, 1.0, 1.0, 0.0]) == []

    def test_tolerance(self) -> None:
        assert local_maxima([1.0, 1.0 + 1e-15, 1.0]) == []

    def test_degenerate_lengths(self) -> None:
        assert local_maxima([]) == []
        assert local_maxima([3.0]) == [0]


class TestClassifyProfile:
    def test_regimes(self) -> None:
        assert classify_profile(EPS, [2, 1, 0, 1, 2]) == PROFILE_ENDPOINT
        assert classify_profile(EPS, [0, 1, 2, 1, 0]) == PROFILE_CENTRAL
        assert classify_profile(EPS, [0, 2, 1, 2, 0]) == PROFILE_INTERIOR
        assert classify_profile(EPS, [4, 3, 2, 1, 0]) == PROFILE_MONOTONE
        assert classify_profile(EPS, [2, 1, 2, 1, 0]) == PROFILE_OTHER


class TestCriticalDephasing:
    def test_bracket_without_sign_change(self) -> None:
        with pytest.raises(ConvergenceError):
            critical_dephasing(bracket=(0.1, 0.2))
