"""
End-to-end checks of simulated photocurrents against the analytic model
at the experimental parameters
"""

import math

import numpy as np
import pytest

from levsqueeze.config.constants import TWO_PI
from levsqueeze.langevin import (
    DriveTone,
    SimConfig,
    decorrelated,
    drive_tone_amplitude,
    homodyne_record,
    shot_noise_record,
    simulate,
)
from levsqueeze.model import ModelParams, homodyne_psd, optimal_angle
from levsqueeze.spectral import (
    FitGuess,
    fit_multi,
    normalize_to_shot_noise,
    segment_length_for,
    sensitivity_curve,
    welch_psd,
    window_kernel,
)
from levsqueeze.tomography import build_sinogram, covariance_from_sinogram, extract_modes, theoretical_covariance

RESONANCE_HZ = 73.25e3
SQUEEZED_MODE_HZ = 70.1e3


def paper_config(params, n_samples, **changes):
    return SimConfig(params=params, dt=0.02 / params.omega_m, n_samples=n_samples, seed=20210915, **changes)


def normalized_spectrum(record, shot, resolution_hz):
    segment = segment_length_for(record.dt, resolution_hz)
    reference = welch_psd(shot.i_theta, shot.dt, segment)
    return normalize_to_shot_noise(welch_psd(record.i_theta, record.dt, segment), reference)


def test_force_sensitivity_minimum_sits_below_pi(paper_params):
    drive = DriveTone.from_hz(1.0e7, 90.0e3)
    config = paper_config(paper_params, 2 ** 20, drive=drive, theta_offset=0.05 * math.pi)
    bundle = simulate(config)
    angles = np.linspace(0.0, math.pi, 8, endpoint=False)
    responses = [(theta, drive_tone_amplitude(homodyne_record(bundle, theta, config.theta_offset),
                                              drive.frequency))
                 for theta in angles]
    fit = sensitivity_curve(responses)
    assert fit.minimum_angle == pytest.approx(0.95 * math.pi, abs=0.01 * math.pi)
    assert fit.shift_from_pi == pytest.approx(0.05 * math.pi, abs=0.01 * math.pi)


@pytest.mark.slow
def test_spectrum_at_the_optimal_angle(paper_params):
    config = paper_config(paper_params, 2 ** 22)
    theta, _ = optimal_angle(2.0 * math.pi * SQUEEZED_MODE_HZ, paper_params)
    theta = float(theta)
    bundle = simulate(config)
    shot = shot_noise_record(config, trajectory=1)
    spectrum = normalized_spectrum(homodyne_record(bundle, theta), shot, 200.0)

    section = spectrum.in_band((60.0e3, 86.0e3))
    away = np.abs(section.freqs - RESONANCE_HZ) > 1.0e3
    predicted = homodyne_psd(2.0 * math.pi * section.freqs[away], theta, paper_params)
    assert abs(np.mean(section.values[away] / predicted) - 1.0) < 0.05

    squeezed = spectrum.in_band((69.0e3, 71.0e3))
    assert np.mean(squeezed.values) < 0.85

    control = normalized_spectrum(homodyne_record(decorrelated(bundle), theta), shot, 200.0)
    assert np.mean(control.in_band((69.0e3, 71.0e3)).values) > 0.97


@pytest.mark.slow
def test_tomography_of_simulated_photocurrents(broad_config):
    mode_hz = 700.0
    bundle = simulate(broad_config)
    angles = np.linspace(0.0, math.pi, 12, endpoint=False)
    samples = [extract_modes(homodyne_record(bundle, theta), chunk_duration=0.02, center_freq=mode_hz,
                             gamma_m=broad_config.params.gamma_m)
               for theta in angles]
    measured = covariance_from_sinogram(build_sinogram(samples))
    model = theoretical_covariance(mode_hz, broad_config.params)

    assert model.axes()[0] < 0.3
    assert measured.axes()[0] == pytest.approx(model.axes()[0], abs=0.06)
    np.testing.assert_allclose(measured.matrix, model.matrix, rtol=0.15, atol=0.1)


def welch_expected(spectrum, theta, params):
    """Model PSD seen through the Welch taper on the spectrum's bins"""
    offsets, weights = window_kernel(spectrum.window)
    grid = TWO_PI * np.abs(spectrum.freqs[:, None] + spectrum.resolution * offsets[None, :])
    return homodyne_psd(grid, theta, params) @ weights


@pytest.mark.slow
def test_simulated_spectra_within_five_percent_of_the_model(paper_params):
    config = paper_config(paper_params, 20_000_000)
    segment = segment_length_for(config.dt, 200.0)
    shot = shot_noise_record(config, trajectory=1)
    reference = welch_psd(shot.i_theta, shot.dt, segment)
    del shot

    bundle = simulate(config)
    band = (50.0e3, 100.0e3)
    angles = (0.0, math.pi / 8, math.pi / 4, 3 * math.pi / 8, math.pi / 2, 3 * math.pi / 4, 0.9 * math.pi)
    for theta in angles:
        record = homodyne_record(bundle, theta)
        spectrum = normalize_to_shot_noise(welch_psd(record.i_theta, record.dt, segment), reference)
        section = spectrum.in_band(band)
        ratio = section.values / welch_expected(section, theta, paper_params)
        assert abs(np.mean(ratio) - 1.0) < 0.05, f"theta = {theta:.4f}"
        if theta == 0.9 * math.pi:
            assert np.mean(spectrum.in_band((69.0e3, 71.0e3)).values) < 0.9


@pytest.mark.slow
def test_joint_fit_of_welch_spectra_recovers_the_rates():
    params = ModelParams.from_hz(omega_m_hz=1.0e3, gamma_m_hz=50.0, gamma_qba_hz=400.0,
                                 eta_d=0.5, n_bar=1.0)
    config = SimConfig(params=params, dt=0.04 / params.omega_m, n_samples=2 ** 22, seed=31,
                       integrator="exact", theta_offset=0.05 * math.pi)
    thetas = (0.3, 0.8, 1.3, 1.9, 2.4, 2.9)
    segment = segment_length_for(config.dt, 20.0)
    shot = shot_noise_record(config, trajectory=len(thetas))
    reference = welch_psd(shot.i_theta, shot.dt, segment)
    spectra = []
    for k, theta in enumerate(thetas):
        record = homodyne_record(simulate(config, k), theta, config.theta_offset)
        raw = welch_psd(record.i_theta, record.dt, segment, theta=theta, theta_inferred=theta)
        spectra.append(normalize_to_shot_noise(raw, reference, (2.0e3, 5.0e3)))

    guess = FitGuess(gamma_m=1.2 * params.gamma_m, gamma_tot=0.8 * params.gamma_tot,
                     gamma_meas=1.2 * params.gamma_meas, omegas=[params.omega_m + TWO_PI * 5.0] * len(thetas),
                     thetas=list(thetas))
    result = fit_multi(spectra, fit_band=(300.0, 1700.0), init=guess)
    assert result.gamma_tot == pytest.approx(params.gamma_tot, rel=0.05)
    assert result.gamma_meas == pytest.approx(params.gamma_meas, rel=0.05)
    assert result.gamma_m == pytest.approx(params.gamma_m, rel=0.05)
    np.testing.assert_allclose(result.omegas, params.omega_m, rtol=1e-3)
    assert result.angle_regression.slope == pytest.approx(1.0, abs=0.02)
    assert result.angle_regression.offset == pytest.approx(0.05 * math.pi, abs=0.01 * math.pi)
