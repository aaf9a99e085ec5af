import cmath

import numpy as np
import pytest

from nmheom import BathModel, Statistics

from conftest import fig_bath


class TestCorrelation:
    def test_initial_value_matches_baseline_parameters(self):
        # gamma0*lam/2 = 0.02*0.1/2 = 0.001 regardless of epsilon, delta
        for delta in (0.0, 0.5, 1.5):
            bath = fig_bath(delta=delta)
            assert bath.correlation(0.0) == pytest.approx(0.001 + 0.0j, abs=1e-18)

    def test_decoupled_bath_vanishes(self):
        bath = fig_bath(gamma0=0.0)
        t = np.linspace(0.0, 50.0, 101)
        assert np.all(bath.correlation(t) == 0.0)

    def test_detuned_value_at_unit_time(self):
        # direct evaluation: beta = lam + i(eps - delta) = 0.1 + 1.5i
        bath = BathModel(epsilon=2.0, lam=0.1, gamma0=0.02, delta=0.5)
        expected = 0.001 * cmath.exp(-0.1) * cmath.exp(-1.5j)
        assert bath.correlation(1.0) == pytest.approx(expected, abs=1e-18)

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            fig_bath().correlation(-0.1)

    def test_magnitude_monotone_decreasing(self):
        bath = fig_bath(delta=0.7)
        t = np.linspace(0.0, 50.0, 2001)
        mags = np.abs(bath.correlation(t))
        assert np.all(np.diff(mags) <= 0.0)


class TestSpectralDensity:
    def test_peak_value(self):
        bath = fig_bath(delta=0.3)
        peak = bath.spectral_density(bath.epsilon - bath.delta)
        assert peak == pytest.approx(bath.gamma0 / (2.0 * np.pi), rel=1e-14)

    def test_decoupled_bath(self):
        bath = fig_bath(gamma0=0.0)
        assert bath.spectral_density(1.23) == 0.0

    def test_strictly_positive(self):
        bath = fig_bath()
        omega = np.linspace(-100.0, 100.0, 1001)
        assert np.all(bath.spectral_density(omega) > 0.0)


def quadrature_correlation(bath, t):
    """Independent oracle: C(t) as the Fourier transform of the spectrum.

    Trapezoid rule on a window of +-12800 widths around the peak; the
    Lorentzian tail outside it carries 2/(pi*12800) ~ 5e-5 of the mass,
    which bounds the relative error at t=0.  Test-only, not a runtime path.
    """
    center = bath.epsilon - bath.delta
    omega = np.linspace(
        center - 12800.0 * bath.lam, center + 12800.0 * bath.lam, 4_000_001
    )
    j = bath.spectral_density(omega)
    kernel = np.exp(-1j * np.outer(np.atleast_1d(t), omega))
    return np.trapezoid(kernel * j, omega, axis=-1)


class TestFourierConsistency:
    def test_total_weight_equals_initial_correlation(self):
        bath = fig_bath(delta=0.4)
        weight = quadrature_correlation(bath, 0.0)[0].real
        assert weight == pytest.approx(bath.alpha, rel=1e-4)
        assert weight == pytest.approx(0.001, rel=1e-4)

    def test_correlation_from_quadrature(self):
        bath = fig_bath(delta=0.4)
        t = np.array([0.0, 0.5, 1.0, 5.0, 10.0, 25.0, 50.0])
        reference = quadrature_correlation(bath, t)
        direct = bath.correlation(t)
        rel = np.abs(direct - reference) / np.abs(direct)
        assert np.max(rel) < 1e-4


class TestValidation:
    def test_rejects_nonpositive_width(self):
        with pytest.raises(ValueError):
            BathModel(epsilon=2.0, lam=0.0)

    def test_rejects_negative_coupling(self):
        with pytest.raises(ValueError):
            BathModel(epsilon=2.0, gamma0=-0.01)

    def test_statistics_coercion_from_string(self):
        bath = BathModel(epsilon=2.0, statistics="fermi")
        assert bath.statistics is Statistics.FERMI
