"""
Run configuration: presets, INI files, overrides, angle lists and settings
"""

import math

import pytest

from levsqueeze.config.constants import TWO_PI
from levsqueeze.config.run_config import DEFAULT_ANGLES, load_run_config, parse_angles
from levsqueeze.config.settings import settings
from levsqueeze.utils.exceptions import ConfigurationError, ParameterDomainError, UsageError


# Angle lists

def test_angle_tokens():
    angles = parse_angles("0, pi/8, 3pi/8, 0.9pi, pi, 1.2")
    assert angles == pytest.approx((0.0, math.pi / 8, 3 * math.pi / 8, 0.9 * math.pi, math.pi, 1.2))


def test_uniform_angle_grid():
    angles = parse_angles("uniform:5")
    assert angles == pytest.approx(tuple(k * math.pi / 4 for k in range(5)))
    assert angles[-1] == math.pi


def test_default_angles():
    assert len(parse_angles(DEFAULT_ANGLES)) == 7


@pytest.mark.parametrize("text", ["4", "-0.1", "1.1pi", "abc", "", "uniform:1", "uniform:x"])
def test_invalid_angle_lists(text):
    with pytest.raises(ConfigurationError):
        parse_angles(text)


# Resolution order

def test_defaults_follow_the_preset(isolated_output):
    config = load_run_config()
    assert config.preset == "paper-2021"
    assert config.params.gamma_meas / TWO_PI == pytest.approx(1.4e3)
    assert config.simulation.dt == pytest.approx(0.02 / config.params.omega_m)
    assert config.simulation.n_samples == 2 ** 21
    assert config.seed == settings.default_seed
    assert config.fmt == "binary"
    assert config.output_dir == isolated_output
    assert config.calibration is None
    assert config.tomography.mode_frequencies_hz == (70.1e3, 77.1e3)


def test_file_overrides_preset_and_arguments_override_file(write_ini):
    path = write_ini({
        "run": {"seed": 5, "angles": "0, pi/2", "format": "csv"},
        "model": {"gamma_m_hz": 50.0},
        "simulation": {"n_samples": 4096, "integrator": "exact"},
    })
    config = load_run_config(path)
    assert config.seed == 5
    assert config.angles == pytest.approx((0.0, math.pi / 2))
    assert config.fmt == "csv"
    assert config.params.gamma_m / TWO_PI == pytest.approx(50.0)
    assert config.simulation.n_samples == 4096
    assert config.simulation.integrator == "exact"
    assert config.source == str(path)

    overridden = load_run_config(path, overrides={"seed": 9, "angles": "pi/4", "n_samples": 1024,
                                                  "fmt": "binary", "output_dir": "elsewhere"})
    assert overridden.seed == 9
    assert overridden.angles == pytest.approx((math.pi / 4,))
    assert overridden.simulation.n_samples == 1024
    assert overridden.fmt == "binary"
    assert str(overridden.output_dir) == "elsewhere"


def test_fitted_rates_in_the_model_section(write_ini):
    path = write_ini({"model": {"gamma_tot_hz": 6.0e3, "gamma_meas_hz": 1.2e3, "eta_d": 0.5}})
    params = load_run_config(path).params
    assert params.gamma_tot / TWO_PI == pytest.approx(6.0e3)
    assert params.gamma_meas / TWO_PI == pytest.approx(1.2e3)
    assert params.eta_d == 0.5


def test_sections_are_read(write_ini):
    path = write_ini({
        "spectral": {"resolution_hz": 25, "shot_band_low_hz": 60e3, "shot_band_high_hz": 65e3,
                     "max_nfev": 10},
        "calibration": {"c1": 0.01, "v_off": 0.5, "v_amp": 0.25, "unbalance_voltage": 0.1},
        "tomography": {"mode_frequencies_hz": "70e3, 71e3, 77e3", "n_chunks": 200, "angles": "uniform:7"},
        "patterns": {"geometric_factor_A": 0.7, "n_theta": 11},
    })
    config = load_run_config(path)
    assert config.spectral.resolution_hz == 25.0
    assert config.spectral.shot_band_hz == (60e3, 65e3)
    assert config.spectral.max_nfev == 10
    assert config.calibration.v_amp == 0.25
    assert config.calibration.unbalance_voltage == 0.1
    assert config.tomography.mode_frequencies_hz == (70e3, 71e3, 77e3)
    assert len(config.tomography_angles) == 7
    assert config.patterns.geometric_factor_A == 0.7
    assert config.patterns.n_theta == 11


def test_explicit_physical_geometry(write_ini):
    path = write_ini({"physical": {
        "mass": 1e-18, "polarizability": 1e-31, "field_amplitude_E0": 1e7,
        "waist_x": 1.1e-6, "waist_y": 1.0e-6, "rayleigh_range_zR": 2.0e-6, "wavelength": 1.55e-6,
    }})
    physical = load_run_config(path).physical
    assert physical.mass == 1e-18
    assert physical.waist_x == 1.1e-6


# Errors

def test_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_run_config(tmp_path / "absent.ini")


def test_unknown_preset():
    with pytest.raises(UsageError):
        load_run_config(preset="no-such-preset")


@pytest.mark.parametrize("sections", [
    {"simulation": {"dt": "fast"}},
    {"simulation": {"n_samples": "many"}},
    {"run": {"format": "xml"}},
    {"tomography": {"angles": "uniform:0"}},
])
def test_invalid_values(write_ini, sections):
    with pytest.raises(ConfigurationError):
        load_run_config(write_ini(sections))


def test_parameter_outside_its_domain(write_ini):
    with pytest.raises(ParameterDomainError):
        load_run_config(write_ini({"model": {"eta_d": 1.5}}))


# Hash

def test_config_hash():
    first = load_run_config()
    second = load_run_config()
    assert first.config_hash.startswith("sha256:")
    assert first.config_hash == second.config_hash
    assert first.with_changes(output_dir="other").config_hash == first.config_hash
    assert first.with_changes(seed=first.seed + 1).config_hash != first.config_hash


# Environment settings

def test_settings_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("LEVSQUEEZE_WORKERS", "0")
    monkeypatch.setenv("LEVSQUEEZE_LEDGER", "no")
    monkeypatch.setenv("LEVSQUEEZE_SEED", "42")
    assert settings.workers == 1
    assert settings.ledger_enabled is False
    assert settings.default_seed == 42
    assert settings.ledger_path(tmp_path) == tmp_path / "run_ledger.sqlite"
