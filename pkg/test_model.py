"""
Closed-form model: parameters, susceptibility, homodyne PSD, squeezing optimum
and the measurement-disturbance limits of the trapped dipole
"""

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from levsqueeze.config.constants import HEISENBERG_PRODUCT, TWO_PI
from levsqueeze.model import (
    ModelParams,
    derived_physical,
    displacement_psd,
    heisenberg_limit,
    heisenberg_product,
    homodyne_psd,
    imprecision_backaction,
    measurement_rates,
    model_from_fit_rates,
    optimal_angle,
    optimal_squeezing,
    position_variance,
    predicted_spectra,
    squeezing_bandwidth,
    susceptibility,
    trap_frequencies,
)
from levsqueeze.utils.exceptions import ParameterDomainError, UsageError


# Parameters

def test_preset_rates_in_hz(paper_params):
    hz = paper_params.to_hz_dict()
    assert hz["omega_m_hz"] == pytest.approx(73.25e3)
    assert hz["gamma_m_hz"] == pytest.approx(40.0)
    assert hz["gamma_tot_hz"] == pytest.approx(5.0e3)
    assert hz["gamma_meas_hz"] == pytest.approx(1.4e3)
    assert hz["gamma_qba_hz"] == pytest.approx(4.0e3)
    assert hz["n_bar"] == pytest.approx(24.5)
    assert paper_params.eta_meas == pytest.approx(0.28)


def test_unknown_preset_is_a_usage_error():
    with pytest.raises(UsageError):
        ModelParams.preset("no-such-preset")


@pytest.mark.parametrize("changes", [
    {"omega_m": -1.0},
    {"gamma_m": 0.0},
    {"gamma_qba": -1.0},
    {"eta_d": 1.5},
    {"n_bar": -0.1},
    {"omega_m": math.inf},
])
def test_parameters_outside_their_domain_are_rejected(paper_params, changes):
    with pytest.raises(ParameterDomainError):
        paper_params.with_changes(**changes)


def test_fit_rates_inconsistent_with_efficiency(paper_params):
    # Gamma_meas/eta_d = 7 kHz would exceed Gamma_tot
    with pytest.raises(ParameterDomainError):
        ModelParams.from_fit_rates(paper_params.omega_m, paper_params.gamma_m,
                                   paper_params.gamma_tot, paper_params.gamma_meas, eta_d=0.2)


def test_model_from_fit_rates_keeps_identifiable_pair(paper_params):
    params = model_from_fit_rates(paper_params.omega_m, paper_params.gamma_m,
                                  paper_params.gamma_tot, paper_params.gamma_meas, eta_d=0.9)
    assert params.gamma_tot == pytest.approx(paper_params.gamma_tot, rel=1e-12)
    assert params.gamma_meas == pytest.approx(paper_params.gamma_meas, rel=1e-12)
    assert params.eta_d == 0.9


def test_measurement_rates(paper_params):
    rates = measurement_rates(paper_params)
    assert rates.gamma_tot == pytest.approx(TWO_PI * 5.0e3)
    assert rates.eta_meas == pytest.approx(0.28)
    assert measurement_rates(paper_params.without_backaction()).eta_meas == 0.0


def test_radiation_pressure_equilibrium_shift(paper_params):
    assert paper_params.equilibrium_shift == 0.0
    shifted = paper_params.with_changes(gamma_rp=TWO_PI * 100.0)
    expected = math.sqrt(2.0 * shifted.gamma_qba * shifted.gamma_rp) / shifted.omega_m
    assert shifted.equilibrium_shift == pytest.approx(expected)
    assert shifted.without_backaction().equilibrium_shift == 0.0


# Susceptibility and spectra

def test_susceptibility_at_resonance_and_dc(paper_params):
    chi = susceptibility(paper_params.omega_m, paper_params)
    np.testing.assert_allclose(chi, 1j / paper_params.gamma_m, rtol=1e-12)
    assert complex(susceptibility(0.0, paper_params)) == pytest.approx(1.0 / paper_params.omega_m)


def test_susceptibility_below_resonance(paper_params):
    omega = TWO_PI * 70.1e3
    expected = paper_params.omega_m / complex(paper_params.omega_m ** 2 - omega ** 2,
                                              -paper_params.gamma_m * omega)
    np.testing.assert_allclose(susceptibility(omega, paper_params), expected, rtol=1e-12)
    assert susceptibility(omega, paper_params).real > 0


def test_amplitude_quadrature_is_shot_noise(paper_params):
    omegas = TWO_PI * np.linspace(1.0e3, 150.0e3, 1001)
    np.testing.assert_array_equal(homodyne_psd(omegas, 0.0, paper_params), np.ones_like(omegas))


def test_phase_quadrature_at_resonance(paper_params):
    value = float(homodyne_psd(paper_params.omega_m, math.pi / 2, paper_params))
    expected = 1.0 + 16.0 * paper_params.gamma_meas * paper_params.gamma_tot / paper_params.gamma_m ** 2
    assert value == pytest.approx(expected, rel=1e-9)
    assert value == pytest.approx(7.0e4, rel=1e-3)


def test_mirrored_angles_cancel_the_cross_correlation(paper_params):
    omegas = TWO_PI * np.linspace(60.0e3, 90.0e3, 301)
    imprecision = homodyne_psd(omegas, math.pi / 2, paper_params) - 1.0
    for theta in (0.1, 0.4, 1.0, math.pi / 4):
        pair = (homodyne_psd(omegas, theta, paper_params)
                + homodyne_psd(omegas, math.pi - theta, paper_params))
        np.testing.assert_allclose(pair, 2.0 * (1.0 + imprecision * math.sin(theta) ** 2), rtol=1e-10)


def test_spectrum_without_measurement_is_flat(paper_params):
    params = paper_params.without_backaction()
    omegas = TWO_PI * np.linspace(60.0e3, 90.0e3, 301)
    for theta in (0.3, math.pi / 2, 0.9 * math.pi):
        np.testing.assert_array_equal(homodyne_psd(omegas, theta, params), np.ones_like(omegas))


def test_predicted_spectra_grid(paper_params):
    thetas = np.linspace(0.0, math.pi, 5)
    omegas = TWO_PI * np.linspace(60.0e3, 90.0e3, 11)
    grid = predicted_spectra(paper_params, thetas, omegas)
    assert grid.shape == (5, 11)
    np.testing.assert_allclose(grid[3], homodyne_psd(omegas, thetas[3], paper_params))


def test_position_variance_matches_psd_integral(broad_params):
    omegas = np.linspace(0.0, 50.0 * broad_params.omega_m, 2_000_001)
    integral = 2.0 * trapezoid(displacement_psd(omegas, broad_params), omegas) / TWO_PI
    assert position_variance(broad_params) == pytest.approx(2.5)
    assert integral == pytest.approx(position_variance(broad_params), rel=1e-3)


# Squeezing

def test_optimal_angle_matches_brute_force(paper_params):
    omega = TWO_PI * 70.1e3
    theta_opt, s_min = optimal_angle(omega, paper_params)
    thetas = np.linspace(0.0, math.pi, 200001)
    values = homodyne_psd(omega, thetas, paper_params)
    k = int(np.argmin(values))
    assert float(s_min) == pytest.approx(float(values[k]), abs=1e-8)
    distance = abs(float(theta_opt) - thetas[k]) % math.pi
    assert min(distance, math.pi - distance) < 1e-4
    assert float(s_min) < 1.0


def test_optimal_squeezing_of_the_preset(paper_params):
    optimum = optimal_squeezing(paper_params)
    assert 0.70 <= optimum.min_psd <= 0.75
    assert optimum.min_psd >= 1.0 - paper_params.eta_meas - 1e-12
    assert float(homodyne_psd(optimum.omega, optimum.theta, paper_params)) == pytest.approx(
        optimum.min_psd, rel=1e-9)


def test_squeezing_bandwidth_of_the_preset(paper_params):
    optimum = optimal_squeezing(paper_params)
    band = squeezing_bandwidth(paper_params)
    assert 10.0e3 <= band.width_hz <= 20.0e3
    assert band.omega_low <= optimum.omega <= band.omega_high
    assert band.level == pytest.approx(1.0 - (1.0 - optimum.min_psd) / 2.0, abs=1e-6)


def test_bandwidth_at_fixed_angle_uses_shot_noise_level(paper_params):
    optimum = optimal_squeezing(paper_params)
    band = squeezing_bandwidth(paper_params, theta=optimum.theta)
    assert band.level == 1.0
    assert band.omega_low <= optimum.omega <= band.omega_high
    inside = np.linspace(band.omega_low, band.omega_high, 101)
    assert np.all(homodyne_psd(inside, optimum.theta, paper_params) < 1.0)


def test_no_squeezing_without_measurement(paper_params, caplog):
    with caplog.at_level("DEBUG", logger="levsqueeze.model"):
        band = squeezing_bandwidth(paper_params.without_backaction())
    assert band.width_hz == 0.0
    assert "No squeezing" in caplog.text


# Trapped dipole

def test_trap_frequency_of_the_silica_geometry(physical):
    freqs = trap_frequencies(physical)
    assert freqs["omega_z"] / TWO_PI == pytest.approx(73.25e3, rel=1e-9)
    assert freqs["omega_x"] < freqs["omega_y"]


def test_doubling_the_field_doubles_trap_frequencies(physical):
    before = trap_frequencies(physical)
    after = trap_frequencies(physical.with_changes(field_amplitude_E0=2.0 * physical.field_amplitude_E0))
    for axis in before:
        assert after[axis] == pytest.approx(2.0 * before[axis], rel=1e-12)


def test_doubling_scattered_power(physical):
    before = imprecision_backaction(physical)
    after = imprecision_backaction(physical.with_changes(scattered_power_P=2.0 * physical.scattered_power_P))
    for axis in before:
        assert after[axis].s_imp == pytest.approx(before[axis].s_imp / 2.0, rel=1e-12)
        assert after[axis].s_ff == pytest.approx(2.0 * before[axis].s_ff, rel=1e-12)


def test_heisenberg_product_for_random_geometries():
    rng = np.random.default_rng(2021)
    for _ in range(100):
        phys = derived_physical(
            mass=10 ** rng.uniform(-20, -15),
            polarizability=10 ** rng.uniform(-33, -30),
            field_amplitude_E0=10 ** rng.uniform(6, 8),
            waist_x=rng.uniform(0.5e-6, 2.0e-6),
            waist_y=rng.uniform(0.5e-6, 2.0e-6),
            rayleigh_range_zR=rng.uniform(0.3e-6, 3.0e-6),
            wavelength=rng.uniform(0.5e-6, 2.0e-6),
        )
        for product in heisenberg_product(phys).values():
            assert product == pytest.approx(heisenberg_limit(), rel=1e-12)

        limits = imprecision_backaction(phys)
        A = phys.geometric_factor_A
        assert limits["y"].s_ff / limits["x"].s_ff == pytest.approx(2.0, rel=1e-14)
        assert limits["z"].s_ff / limits["x"].s_ff == pytest.approx(2.0 + 5.0 * A ** 2, rel=1e-13)


def test_heisenberg_limit_value():
    assert heisenberg_limit() == HEISENBERG_PRODUCT
    assert heisenberg_limit() == pytest.approx(1.0545718176461565e-34 ** 2 / (16 * math.pi ** 2), rel=1e-9)


def test_non_positive_geometry_is_rejected(physical):
    with pytest.raises(ParameterDomainError):
        physical.with_changes(waist_x=0.0)
    with pytest.raises(ParameterDomainError):
        derived_physical(1e-18, 1e-31, 1e7, 1e-6, 1e-6, 1e-6, wavelength=-1.0)
