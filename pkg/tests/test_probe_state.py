"""Tests for the traced polarization state and its oracles."""

import itertools
import math

import numpy as np
import pytest

from core.errors import InvalidParameterError
from core.linalg import IDENTITY_2, IDENTITY_4, SIGMA_X, tensor_product
from core.spectral import SpectralParams
from core.validator import validate_density_matrix
from probe.oracle import (
    averaged_single_photon_state,
    finite_difference_derivative,
    finite_difference_derivatives,
    quadrature_density_matrix,
    quadrature_stokes_correlator,
    single_photon_state,
)
from probe.state import (
    PhaseParams,
    density_derivative,
    density_matrix,
    is_pure_boundary,
    probe_state,
    purity,
    stokes_correlator,
    stokes_correlator_trace,
)

HH, HV, VH, VV = range(4)

SWAP = np.zeros((4, 4), dtype=complex)
for _a, _b in itertools.product(range(2), repeat=2):
    SWAP[2 * _b + _a, 2 * _a + _b] = 1.0

GRID_PHI0 = (0.0, math.pi / 4, 2.0, 5.5)
GRID_PHI1 = (0.0, 0.5, 1.5, 3.0)
GRID_EPS = (-1.0, -0.4, 0.0, 0.7, 1.0)
GRID_SIGMA = (0.5, 1.0, 2.0)


def _grid():
    return itertools.product(GRID_PHI0, GRID_PHI1, GRID_EPS, GRID_SIGMA)


class TestPhaseParams:
    def test_as_array(self) -> None:
        np.testing.assert_array_equal(PhaseParams(0.3, 1.2).as_array(), [0.3, 1.2])

    def test_rejects_infinite(self) -> None:
        with pytest.raises(InvalidParameterError):
            PhaseParams(math.inf, 1.0)

    def test_pure_boundary(self) -> None:
        assert is_pure_boundary(PhaseParams(1.0, 0.0))
        assert not is_pure_boundary(PhaseParams(1.0, 1e-6))


class TestDensityMatrix:
    def test_no_phase_no_dephasing_is_pure_dd(self) -> None:
        for eps in (-1.0, 0.0, 0.5, 1.0):
            rho = density_matrix(PhaseParams(0.0, 0.0), SpectralParams(epsilon=eps))
            np.testing.assert_array_equal(rho, np.full((4, 4), 0.25))

    def test_sum_coherence(self) -> None:
        rho = density_matrix(PhaseParams(math.pi / 4, 1.0), SpectralParams())
        assert rho[HH, VV] == pytest.approx(-0.25j * math.exp(-1.0), abs=1e-15)
        assert rho[VV, HH] == pytest.approx(0.25j * math.exp(-1.0), abs=1e-15)

    def test_entry_structure(self) -> None:
        p = PhaseParams(0.7, 0.9)
        s = SpectralParams(sigma=1.3, epsilon=0.4)
        rho = density_matrix(p, s)
        s2 = s.sigma**2
        single = math.exp(-0.5 * p.phi1**2 * s2)
        summed = math.exp(-(p.phi1**2) * s2 * (1 + s.epsilon))
        diff = math.exp(-(p.phi1**2) * s2 * (1 - s.epsilon))

        np.testing.assert_allclose(np.diag(rho), [0.25] * 4, atol=1e-15)
        for row, col in ((HH, HV), (HH, VH), (HV, VV), (VH, VV)):
            assert rho[row, col] == pytest.approx(0.25 * np.exp(-1j * p.phi0) * single)
        assert rho[HH, VV] == pytest.approx(0.25 * np.exp(-2j * p.phi0) * summed)
        assert rho[HV, VH] == pytest.approx(0.25 * diff)

    def test_correlated_limit_keeps_difference_coherence(self) -> None:
        rho = density_matrix(PhaseParams(1.1, 10.0), SpectralParams(epsilon=1.0))
        expected = IDENTITY_4 / 4
        expected[HV, VH] = expected[VH, HV] = 0.25
        np.testing.assert_allclose(rho, expected, atol=1e-12)

    def test_valid_state_on_grid(self) -> None:
        for phi0, phi1, eps, sigma in _grid():
            rho = density_matrix(PhaseParams(phi0, phi1), SpectralParams(sigma=sigma, epsilon=eps))
            is_valid, err = validate_density_matrix(rho)
            assert is_valid, f"({phi0}, {phi1}, {eps}, {sigma}): {err}"

    def test_swap_symmetry(self) -> None:
        for phi0, phi1, eps, sigma in _grid():
            rho = density_matrix(PhaseParams(phi0, phi1), SpectralParams(sigma=sigma, epsilon=eps))
            np.testing.assert_allclose(SWAP @ rho @ SWAP, rho, atol=1e-15)

    def test_uncorrelated_state_is_product(self) -> None:
        for phi0, phi1 in itertools.product(GRID_PHI0, GRID_PHI1):
            p = PhaseParams(phi0, phi1)
            s = SpectralParams(sigma=1.0, epsilon=0.0)
            single = averaged_single_photon_state(p, s)
            np.testing.assert_allclose(
                density_matrix(p, s), tensor_product(single, single), atol=1e-10
            )

    def test_matches_node_summed_state(self) -> None:
        for phi0, phi1, eps in itertools.product((0.0, math.pi / 4, 2.0), (0.1, 1.0, 2.0), GRID_EPS):
            p = PhaseParams(phi0, phi1)
            s = SpectralParams(epsilon=eps)
            deviation = np.max(np.abs(density_matrix(p, s) - quadrature_density_matrix(p, s)))
            assert deviation <= 1e-8, f"({phi0}, {phi1}, {eps}): {deviation:.3e}"


class TestDerivatives:
    def test_phase_derivative_at_origin(self) -> None:
        d0 = density_derivative(PhaseParams(0.0, 0.0), SpectralParams(), 0)
        assert d0[HH, VV] == pytest.approx(-0.5j)
        assert d0[VV, HH] == pytest.approx(0.5j)
        assert d0[HH, HV] == pytest.approx(-0.25j)
        assert d0[HV, HH] == pytest.approx(0.25j)
        assert d0[HV, VH] == 0
        np.testing.assert_array_equal(np.diag(d0), np.zeros(4))

    def test_dephasing_derivative_vanishes_at_boundary(self) -> None:
        for phi0 in GRID_PHI0:
            d1 = density_derivative(PhaseParams(phi0, 0.0), SpectralParams(epsilon=0.3), 1)
            assert np.all(d1 == 0)

    def test_rejects_bad_index(self) -> None:
        with pytest.raises(InvalidParameterError):
            density_derivative(PhaseParams(0.0, 1.0), SpectralParams(), 2)
        with pytest.raises(InvalidParameterError):
            finite_difference_derivative(PhaseParams(0.0, 1.0), SpectralParams(), -1)

    def test_matches_finite_differences_example(self) -> None:
        p = PhaseParams(math.pi / 4, 1.0)
        s = SpectralParams(epsilon=0.5)
        analytic = density_derivative(p, s, 1)
        numeric = finite_difference_derivative(p, s, 1, step=1e-4)
        assert np.max(np.abs(analytic - numeric)) <= 1e-7

    def test_matches_finite_differences_on_grid(self) -> None:
        for phi0, phi1, eps, sigma in _grid():
            p = PhaseParams(phi0, phi1)
            s = SpectralParams(sigma=sigma, epsilon=eps)
            numeric = finite_difference_derivatives(p, s)
            for j in (0, 1):
                deviation = np.max(np.abs(density_derivative(p, s, j) - numeric[j]))
                assert deviation <= 1e-7, f"j={j} at ({phi0}, {phi1}, {eps}, {sigma})"

    def test_probe_state_bundle(self) -> None:
        state = probe_state(PhaseParams(0.4, 1.3), SpectralParams(sigma=0.8, epsilon=-0.6))
        assert abs(np.trace(state.rho) - 1.0) <= 1e-12
        for d in state.d_rho:
            assert abs(np.trace(d)) <= 1e-12
            np.testing.assert_allclose(d, d.conj().T, atol=1e-15)


class TestStokesCorrelator:
    def test_trivial_values(self) -> None:
        assert stokes_correlator(PhaseParams(0.0, 0.0), SpectralParams()) == pytest.approx(1.0)
        assert stokes_correlator(PhaseParams(math.pi / 2, 0.0), SpectralParams()) == pytest.approx(
            0.0, abs=1e-15
        )

    def test_anticorrelated_example(self) -> None:
        value = stokes_correlator(PhaseParams(0.0, 1.0), SpectralParams(epsilon=-1.0))
        assert value == pytest.approx(0.5 * (1.0 + math.exp(-2.0)), abs=1e-12)
        assert value == pytest.approx(0.567668, abs=1e-6)

    def test_matches_trace_and_quadrature(self) -> None:
        for phi0, phi1, eps in itertools.product(GRID_PHI0, (0.0, 0.5, 1.0, 2.0), GRID_EPS):
            p = PhaseParams(phi0, phi1)
            s = SpectralParams(epsilon=eps)
            closed = stokes_correlator(p, s)
            assert abs(closed - stokes_correlator_trace(p, s)) <= 1e-10
            assert abs(closed - quadrature_stokes_correlator(p, s)) <= 1e-8


class TestPurity:
    def test_pure_at_boundary(self) -> None:
        for eps in GRID_EPS:
            assert purity(PhaseParams(0.3, 0.0), SpectralParams(epsilon=eps)) == pytest.approx(1.0)

    def test_decreasing_in_dephasing_when_uncorrelated(self) -> None:
        values = [
            purity(PhaseParams(math.pi / 4, phi1), SpectralParams())
            for phi1 in np.linspace(0.0, 3.0, 31)
        ]
        assert all(b < a for a, b in zip(values, values[1:]))


class TestOracle:
    def test_single_photon_state(self) -> None:
        np.testing.assert_allclose(single_photon_state(0.0), 0.5 * (IDENTITY_2 + SIGMA_X))

    def test_averaged_state_visibility(self) -> None:
        rho = averaged_single_photon_state(PhaseParams(0.0, 1.0), SpectralParams())
        assert rho[0, 1] == pytest.approx(0.5 * math.exp(-0.5))
        assert np.trace(rho) == pytest.approx(1.0)
