"""
Constants and defaults for the levsqueeze laboratory
"""

import math

from scipy import constants as _codata

TWO_PI = 2.0 * math.pi

# CODATA values
HBAR = _codata.hbar
SPEED_OF_LIGHT = _codata.c
EPSILON_0 = _codata.epsilon_0

# S_imp * S_FF for every axis
HEISENBERG_PRODUCT = HBAR ** 2 / (16.0 * math.pi ** 2)

# Vacuum quadrature variance in the 1/2 convention
VACUUM_VARIANCE = 0.5
VACUUM_SD = math.sqrt(VACUUM_VARIANCE)

# Fitted rates of the squeezing experiment, quoted as Omega/(2 pi) in Hz.
# eta_d is not identifiable from the spectra; 0.35 is one consistent choice
# (Gamma_qba/2pi = 4 kHz, n_bar = 24.5).
PRESETS = {
    "paper-2021": {
        "omega_m_hz": 73.25e3,
        "gamma_m_hz": 40.0,
        "gamma_tot_hz": 5.0e3,
        "gamma_meas_hz": 1.4e3,
        "eta_d": 0.35,
        "gamma_rp_hz": 0.0,
        "drive_frequency_hz": 90.0e3,
        "mode_frequencies_hz": (70.1e3, 77.1e3),
    },
}

# Welch estimation
WELCH_DEFAULTS = {
    "resolution_hz": 50.0,
    "overlap": 0.5,
    "window": "hann",
}

# Shot-noise calibration band (Hz)
SHOT_NOISE_BAND_HZ = (75.0e3, 85.0e3)

# Relative excess noise bound over the operating unbalance range
CLASSICAL_EXCESS_BOUND = 0.05

# Multi-angle fit
FIT_DEFAULTS = {
    "half_band_hz": 25.0e3,
    "max_nfev": 2000,
    "ftol": 1e-12,
    "xtol": 1e-12,
    "gtol": 1e-12,
}

# Temporal modes and reconstruction
TOMOGRAPHY_DEFAULTS = {
    "chunk_duration": 8.26e-3,
    "bin_count": 64,
    "bin_range_sd": 4.0,
    "grid_size": 128,
    "iterations": 10,
    "relaxation": 0.3,
    "min_angles": 5,
    "min_chunks": 100,
    "divergence_window": 3,
}

# Resolution guard of the integrators
MAX_OMEGA_DT = 0.05

# Pattern quadrature
PATTERN_MIN_RESOLUTION = 16

# Command line exit codes
EXIT_CODES = {
    "error": 1,
    "success": 0,
    "usage": 2,
    "configuration": 3,
    "numerical": 4,
    "io": 5,
}
