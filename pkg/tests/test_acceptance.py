"""
End-to-end checks of the asymptotic laws and scattering power laws at desk scale.
Run with: python -m pytest tests/test_acceptance.py -v
"""

import numpy as np
import pytest
from scipy import stats

from harmonic_chain.models import ChainParams, Curve, Dispersion, PairMethod, Regime
from harmonic_chain.utils.fitting import fit_log_slope, fit_lorentzian, fit_power_law
from harmonic_chain.utils.fluctuations import fluctuation_profile, pair_variance_matrix, site_variance
from harmonic_chain.utils.observables import (
    bragg_analysis, density_profile, lorentzian_half_width, moessbauer_profile,
    peak_to_valley_contrast, structure_factor, structure_factor_classical_finite,
    structure_factor_classical_infinite
)


class TestClassicalExactness:
    """Classical chains are exactly linear in the distance."""

    def test_classical_profile_and_pairs(self):
        params = ChainParams(n_atoms=1000)
        regime = Regime.classical(0.01)
        profile = fluctuation_profile(params, regime)
        assert np.allclose(profile.values, 0.01 * profile.sites, rtol=1e-9, atol=0.0)

        pairs = pair_variance_matrix(params, regime).entries
        index = np.arange(1000)
        expected = 0.01 * np.abs(index[:, None] - index[None, :])
        assert np.allclose(pairs, expected, rtol=1e-9, atol=1e-12)


class TestLogarithmicGrowth:
    """Ground state fluctuations grow as log(n)/(2 pi)."""

    def test_log_slope(self):
        params = ChainParams(n_atoms=1000, alpha=0.02)
        curve = fluctuation_profile(params, Regime.quantum_zero_t()).to_curve()
        scaled = Curve(x_label="n", y_label="u2_over_alpha", xs=curve.xs, ys=curve.ys / params.alpha)
        fit = fit_log_slope(scaled, x_range=(10.0, 333.0))
        assert fit.slope == pytest.approx(1.0 / (2.0 * np.pi), rel=0.05)

    def test_linearized_classical_offset(self):
        """Linearized dispersion lowers the classical profile by eta_cl/pi^2."""
        params = ChainParams(n_atoms=4000, dispersion=Dispersion.LINEARIZED)
        offset = site_variance(params, Regime.classical(0.01), 100) - 0.01 * 100
        assert offset == pytest.approx(-0.01 / np.pi ** 2, rel=0.05)

    def test_linearized_quantum_shift(self):
        regime = Regime.quantum_zero_t()
        exact = fluctuation_profile(ChainParams(n_atoms=1000, alpha=0.02), regime, [300]).values[0]
        linear = fluctuation_profile(
            ChainParams(n_atoms=1000, alpha=0.02, dispersion=Dispersion.LINEARIZED), regime, [300]
        ).values[0]
        assert (exact - linear) / 0.01 == pytest.approx(0.07, abs=0.02)


class TestDensityContrast:
    """Lattice oscillations at the free end of a very long chain."""

    @pytest.mark.parametrize("alpha,visible", [(0.01, True), (0.1, False)])
    def test_right_end_window(self, alpha, visible):
        params = ChainParams(n_atoms=90000, alpha=alpha)
        xs = np.linspace(89980.0, 89995.0, 1501)
        contrast = peak_to_valley_contrast(density_profile(params, Regime.quantum_zero_t(), xs))
        if visible:
            assert contrast > 0.5
        else:
            assert contrast < 0.02


class TestStructureFactorPeaks:
    """Structure factor near the first Bragg peak."""

    def test_finite_temperature_peak_height(self):
        """Quantum and thermal broadening both lower the first Bragg peak."""
        params = ChainParams(n_atoms=1000, alpha=0.02, eta=0.05)
        bragg = [2.0 * np.pi]
        warm = structure_factor(params, Regime.from_params(params), bragg).ys[0]
        ground = structure_factor(
            ChainParams(n_atoms=1000, alpha=0.02), Regime.quantum_zero_t(), bragg
        ).ys[0]
        classical_only = structure_factor_classical_finite(1000, params.eta_cl, 2.0 * np.pi)

        assert 20.0 < warm < classical_only
        assert warm < ground

    def test_classical_closed_form(self):
        """Finite classical chains follow the infinite chain form away from q = 0."""
        params = ChainParams(n_atoms=2000)
        qs = np.linspace(0.5, 3.0 * np.pi, 60)
        curve = structure_factor(params, Regime.classical(0.5), qs)
        assert np.allclose(curve.ys, structure_factor_classical_infinite(0.5, qs), rtol=0.02)

    def test_lorentzian_width(self):
        """Classical Bragg peaks are Lorentzians of half width 2 pi^2 nu^2 eta_cl."""
        eta_cl = 0.001
        width = lorentzian_half_width(eta_cl, 1)
        qs = 2.0 * np.pi + np.linspace(-0.5 * width, 0.5 * width, 41)

        infinite = Curve(x_label="qa", y_label="S", xs=qs, ys=structure_factor_classical_infinite(eta_cl, qs))
        fit = fit_lorentzian(infinite, center=2.0 * np.pi, half_width_guess=width)
        assert fit.half_width == pytest.approx(width, rel=0.05)

        finite = Curve(x_label="qa", y_label="S", xs=qs, ys=structure_factor_classical_finite(4000, eta_cl, qs))
        fit = fit_lorentzian(finite, center=2.0 * np.pi, half_width_guess=width)
        assert fit.half_width == pytest.approx(width, rel=0.05)

    def test_ground_state_size_scaling(self):
        """S_N at the first Bragg peak grows as N^(1 - 2 pi alpha)."""
        sizes = np.array([500.0, 1000.0, 2000.0, 4000.0])
        heights = [
            structure_factor(ChainParams(n_atoms=int(n), alpha=0.02), Regime.quantum_zero_t(), [2.0 * np.pi]).ys[0]
            for n in sizes
        ]
        fit = fit_power_law(Curve(x_label="N", y_label="S", xs=sizes, ys=np.array(heights)))
        assert fit.exponent == pytest.approx(bragg_analysis(0.02, 1).n_scaling_exponent, abs=0.05)

    def test_ground_state_peak_shape(self):
        """Near the peak S falls off as |q|^(beta - 1)."""
        params = ChainParams(n_atoms=4000, alpha=0.02)
        offsets = np.geomspace(0.01, 0.1, 16)
        curve = structure_factor(params, Regime.quantum_zero_t(), 2.0 * np.pi + offsets)
        shape = Curve(x_label="q_offset", y_label="S", xs=offsets, ys=curve.ys)
        fit = fit_power_law(shape)
        assert fit.exponent == pytest.approx(bragg_analysis(0.02, 1).shape_exponent, abs=0.08)

    def test_bulk_approximation_recorded(self):
        """BulkApprox stays finite and positive at the peak for the same chain."""
        params = ChainParams(n_atoms=1000, alpha=0.02, eta=0.05)
        value = structure_factor(params, Regime.from_params(params), [2.0 * np.pi], PairMethod.BULK_APPROX).ys[0]
        assert 1.0 < value < 1000.0


class TestRecoillessPowerLaw:
    """Zero-phonon probability decays as l^(-beta)."""

    def test_moessbauer_slope(self):
        params = ChainParams(n_atoms=4000, alpha=0.02)
        curve = moessbauer_profile(params, 2.0 * np.pi, sites=range(50, 1001))
        fit = stats.linregress(np.log(curve.xs), np.log(curve.ys))
        assert fit.slope == pytest.approx(-bragg_analysis(0.02, 1).beta, rel=0.05)
