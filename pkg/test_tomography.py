"""
Temporal modes, sinograms, reconstruction and covariance ellipses
"""

import math

import numpy as np
import pytest

from levsqueeze.config.constants import VACUUM_SD
from levsqueeze.langevin import PhotocurrentRecord
from levsqueeze.tomography import (
    CovarianceEllipse,
    Sinogram,
    build_sinogram,
    column_normality,
    covariance_from_cuts,
    covariance_from_sinogram,
    cut_variances,
    extract_modes,
    fbp_reconstruct,
    forward_project,
    gaussian_sinogram,
    gaussian_wigner,
    grid_covariance,
    harmonic_fit,
    sample_modes,
    sart_reconstruct,
    symmetric_edges,
    theoretical_covariance,
)
from levsqueeze.tomography.modes import TemporalModeSamples
from levsqueeze.utils.exceptions import UsageError

SQUEEZED = CovarianceEllipse(var_x=0.3, var_y=0.9, cov_xy=0.2)


def edges_for(ellipse, bin_count=64):
    return symmetric_edges(4.0 * math.sqrt(ellipse.axes()[1]), bin_count)


# Covariance ellipses

def test_cut_identities():
    v1 = SQUEEZED.marginal_variance(0.0)
    v2 = SQUEEZED.marginal_variance(math.pi / 4)
    v3 = SQUEEZED.marginal_variance(math.pi / 2)
    ellipse = covariance_from_cuts(v1, v2, v3)
    np.testing.assert_allclose(ellipse.matrix, SQUEEZED.matrix, atol=1e-14)


def test_non_positive_cut_is_rejected():
    with pytest.raises(UsageError):
        covariance_from_cuts(0.5, 0.0, 0.5)


def test_unphysical_cuts_warn(caplog):
    with caplog.at_level("WARNING"):
        ellipse = covariance_from_cuts(0.1, 2.0, 0.1)
    assert not ellipse.is_physical
    assert "unphysical" in caplog.text


def test_ellipse_geometry():
    minor, major = SQUEEZED.axes()
    assert minor + major == pytest.approx(1.2)
    assert minor * major == pytest.approx(0.3 * 0.9 - 0.2 ** 2)
    assert CovarianceEllipse.vacuum().squeezing_db() == pytest.approx(0.0, abs=1e-12)
    assert CovarianceEllipse(0.25, 1.0, 0.0).squeezing_db() == pytest.approx(-3.0103, abs=1e-4)

    contour = SQUEEZED.contour(n_sd=2.0, points=50)
    inverse = np.linalg.inv(SQUEEZED.matrix)
    radii = np.einsum("ij,jk,ik->i", contour, inverse, contour)
    np.testing.assert_allclose(radii, 4.0, rtol=1e-10)


def test_vacuum_without_measurement(paper_params):
    ellipse = theoretical_covariance(70.1e3, paper_params.without_backaction())
    np.testing.assert_allclose(ellipse.matrix, CovarianceEllipse.vacuum().matrix, atol=1e-15)


def test_no_squeezing_on_resonance(paper_params):
    ellipse = theoretical_covariance(73.25e3, paper_params)
    assert ellipse.axes()[0] == pytest.approx(0.5, rel=1e-6)


def test_squeezed_modes_either_side_of_resonance(paper_params):
    below = theoretical_covariance(70.1e3, paper_params)
    above = theoretical_covariance(77.1e3, paper_params)
    assert below.cov_xy == pytest.approx(-0.454, abs=2e-3)
    assert below.axes()[0] == pytest.approx(0.371, abs=2e-3)
    assert above.axes()[0] < 0.5
    assert np.sign(below.tilt) != np.sign(above.tilt)


def test_harmonic_fit_needs_three_angles():
    with pytest.raises(UsageError):
        harmonic_fit([0.0, math.pi], [0.5, 0.5])
    a, b, c = harmonic_fit([0.0, 0.5, 1.0, 1.5], [0.5] * 4)
    assert (a, b, c) == pytest.approx((0.5, 0.0, 0.0), abs=1e-12)


# Temporal modes

def test_sinusoid_gives_constant_mode_amplitude():
    dt, f = 1e-6, 2.0e5
    t = np.arange(100 * 200) * dt
    record = PhotocurrentRecord(i_theta=3.0 * np.cos(2.0 * math.pi * f * t), theta=0.4, eta_d=1.0, dt=dt)
    modes = extract_modes(record, chunk_duration=100 * dt, center_freq=f)
    assert len(modes) == 200
    np.testing.assert_allclose(np.abs(modes.r), np.abs(modes.r[0]), rtol=1e-9)
    assert modes.theta == 0.4


def test_vacuum_mode_variance():
    dt = 1e-6
    noise = np.random.default_rng(4).standard_normal(2000 * 100) * math.sqrt(1.0 / (2.0 * dt))
    record = PhotocurrentRecord(i_theta=noise, theta=0.0, eta_d=1.0, dt=dt)
    modes = extract_modes(record, chunk_duration=100 * dt, center_freq=2.0e5)
    assert np.var(modes.r.real) == pytest.approx(0.5, rel=0.1)
    assert np.var(modes.r.imag) == pytest.approx(0.5, rel=0.1)
    assert modes.components(pooled=True).size == 4000
    assert modes.components(pooled=False).size == 2000


def test_mode_extraction_errors():
    record = PhotocurrentRecord(i_theta=np.zeros(1000), theta=0.0, eta_d=1.0, dt=1e-6)
    with pytest.raises(UsageError):
        extract_modes(record, chunk_duration=1e-6, center_freq=1.0e5)
    with pytest.raises(UsageError):
        extract_modes(record, chunk_duration=1e-4, center_freq=6.0e5)
    with pytest.raises(UsageError):
        extract_modes(record, chunk_duration=2e-3, center_freq=1.0e5)


def test_short_chunks_warn(caplog):
    record = PhotocurrentRecord(i_theta=np.zeros(20000), theta=0.0, eta_d=1.0, dt=1e-6,
                                metadata={"gamma_m_hz": 40.0})
    with caplog.at_level("WARNING"):
        extract_modes(record, chunk_duration=1e-4, center_freq=1.0e5)
    assert "samples are correlated" in caplog.text


# Sinograms

def test_sinogram_from_sampled_modes():
    angles = np.linspace(0.0, math.pi, 12, endpoint=False)
    samples = sample_modes(SQUEEZED, angles, 10000, rng=np.random.default_rng(8))
    sinogram = build_sinogram(samples)
    np.testing.assert_allclose(sinogram.column_integrals(), 1.0, rtol=1e-12)
    assert sinogram.half_range == pytest.approx(4.0 * math.sqrt(sinogram.variances.max()))
    assert list(sinogram.sample_counts) == [20000] * 12

    ellipse = covariance_from_sinogram(sinogram)
    np.testing.assert_allclose(ellipse.matrix, SQUEEZED.matrix, rtol=0.05, atol=0.02)


def test_sinogram_columns_are_sorted_by_angle():
    angles = [2.0, 0.5, 1.0, 0.0, 1.5]
    sinogram = build_sinogram(sample_modes(SQUEEZED, angles, 500, rng=np.random.default_rng(1)))
    np.testing.assert_array_equal(sinogram.angles, sorted(angles))


def test_sinogram_needs_five_angles():
    samples = sample_modes(SQUEEZED, [0.0, 0.5, 1.0, 1.5], 100, rng=np.random.default_rng(2))
    with pytest.raises(UsageError):
        build_sinogram(samples)


def test_vacuum_range_is_the_minimum():
    vacuum_like = CovarianceEllipse(0.1, 0.1, 0.0)
    samples = sample_modes(vacuum_like, np.linspace(0.0, 3.0, 6), 1000, rng=np.random.default_rng(3))
    sinogram = build_sinogram(samples, bin_count=32)
    assert sinogram.half_range == pytest.approx(4.0 * math.sqrt(0.5))
    assert sinogram.density.shape == (6, 32)


def test_gaussian_cut_method_agrees_with_moments():
    angles = np.linspace(0.0, math.pi, 10, endpoint=False)
    sinogram = gaussian_sinogram(SQUEEZED, angles, edges_for(SQUEEZED))
    moments = cut_variances(sinogram, "moments")
    fitted = cut_variances(sinogram, "gaussian")
    np.testing.assert_allclose(fitted, moments, rtol=0.02)
    with pytest.raises(UsageError):
        cut_variances(sinogram, "median")


def test_normality_of_gaussian_modes():
    gaussian = sample_modes(SQUEEZED, [0.3], 5000, rng=np.random.default_rng(5))[0]
    uniform = TemporalModeSamples(r=np.random.default_rng(6).uniform(-1, 1, 5000) * (1 + 1j),
                                  center_freq=0.0, chunk_duration=1.0, theta=0.3)
    assert column_normality(gaussian) > 1e-3
    assert column_normality(uniform) < 1e-6


def test_sinogram_shape_is_checked():
    with pytest.raises(UsageError):
        Sinogram(angles=[0.0, 1.0], bin_edges=symmetric_edges(1.0, 4), density=np.zeros((2, 5)),
                 variances=np.zeros(2), sample_counts=np.zeros(2, dtype=int))


# Reconstruction

def test_sart_recovers_a_gaussian_state():
    angles = np.linspace(0.0, math.pi, 18, endpoint=False)
    sinogram = gaussian_sinogram(SQUEEZED, angles, edges_for(SQUEEZED))
    grid = sart_reconstruct(sinogram, grid_size=64, iterations=30)
    assert grid.mass() == pytest.approx(1.0, rel=1e-12)
    assert np.all(np.diff(grid.residuals[:5]) < 0)
    np.testing.assert_allclose(grid_covariance(grid).matrix, SQUEEZED.matrix, rtol=0.05, atol=0.02)


def test_sart_places_intersecting_projections():
    edges = symmetric_edges(2.05, 41)
    density = np.zeros((2, 41))
    density[0, 30] = density[1, 20] = 1.0 / 0.1
    sinogram = Sinogram(angles=[0.0, math.pi / 2], bin_edges=edges, density=density,
                        variances=np.zeros(2), sample_counts=np.zeros(2, dtype=int))
    grid = sart_reconstruct(sinogram, grid_size=41, iterations=5)
    i, j = np.unravel_index(np.argmax(grid.values), grid.values.shape)
    assert grid.axis[i] == pytest.approx(1.0)
    assert grid.axis[j] == pytest.approx(0.0, abs=1e-12)


def test_sart_argument_checks():
    sinogram = gaussian_sinogram(SQUEEZED, np.linspace(0.0, 3.0, 5), edges_for(SQUEEZED, 16))
    with pytest.raises(UsageError):
        sart_reconstruct(sinogram, grid_size=16, relaxation=0.0)
    with pytest.raises(UsageError):
        sart_reconstruct(sinogram, grid_size=16, iterations=0)


def test_fbp_recovers_a_gaussian_state():
    angles = np.linspace(0.0, math.pi, 37)
    sinogram = gaussian_sinogram(SQUEEZED, angles, edges_for(SQUEEZED, 128))
    grid = fbp_reconstruct(sinogram, grid_size=96)
    assert grid.mass() == pytest.approx(1.0, rel=1e-12)
    np.testing.assert_allclose(grid_covariance(grid).matrix, SQUEEZED.matrix, rtol=0.1, atol=0.03)


def test_forward_projection_of_a_gaussian_wigner():
    edges = edges_for(SQUEEZED)
    angles = np.linspace(0.0, math.pi, 8, endpoint=False)
    wigner = gaussian_wigner(SQUEEZED, 128, edges[-1])
    assert wigner.mass() == pytest.approx(1.0, abs=1e-3)
    projected = forward_project(wigner, angles, edges)
    exact = gaussian_sinogram(SQUEEZED, angles, edges)
    np.testing.assert_allclose(projected.variances, exact.variances, rtol=0.03)
    np.testing.assert_allclose(projected.column_integrals(), 1.0, rtol=1e-12)


# Sampled modes through the full reconstruction chain

TOMOGRAPHY_ANGLES = np.linspace(0.0, math.pi, 19)


def reconstructed_covariance(ellipse, seed):
    samples = sample_modes(ellipse, TOMOGRAPHY_ANGLES, 10000, rng=np.random.default_rng(seed))
    grid = sart_reconstruct(build_sinogram(samples), grid_size=64, iterations=30)
    return grid_covariance(grid)


def test_squeezed_mode_is_reconstructed_within_five_percent(paper_params):
    model = theoretical_covariance(70.1e3, paper_params)
    measured = reconstructed_covariance(model, seed=70)
    np.testing.assert_allclose(measured.matrix, model.matrix, rtol=0.05)
    assert measured.axes()[0] == pytest.approx(model.axes()[0], rel=0.05)


def test_tilt_flips_across_the_resonance(paper_params):
    below = reconstructed_covariance(theoretical_covariance(70.1e3, paper_params), seed=71)
    above = reconstructed_covariance(theoretical_covariance(77.1e3, paper_params), seed=77)
    assert below.cov_xy < 0 < above.cov_xy


def test_vacuum_is_reconstructed_isotropic():
    measured = reconstructed_covariance(CovarianceEllipse.vacuum(), seed=5)
    minor, major = measured.axes()
    assert math.sqrt(minor) == pytest.approx(VACUUM_SD, rel=0.03)
    assert math.sqrt(major) == pytest.approx(VACUUM_SD, rel=0.03)
