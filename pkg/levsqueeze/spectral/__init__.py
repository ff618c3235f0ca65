"""
Spectral estimation, calibration and multi-angle fitting
"""

from .estimation import (
    Spectrum,
    band_variance,
    normalize_to_shot_noise,
    segment_length_for,
    welch_psd,
    window_kernel,
)
from .calibration import (
    CalibrationModel,
    calibrate_angle_sweep,
    check_excess_bound,
    fit_calibration_parabola,
    infer_angle,
    subtract_classical_noise,
)
from .fitting import AngleRegression, FitGuess, FitResult, angle_regression, fit_multi, initial_guess
from .sensitivity import SensitivityFit, sensitivity_curve

__all__ = [
    "Spectrum", "band_variance", "normalize_to_shot_noise", "segment_length_for", "welch_psd",
    "window_kernel", "CalibrationModel", "calibrate_angle_sweep", "check_excess_bound",
    "fit_calibration_parabola", "infer_angle", "subtract_classical_noise", "AngleRegression",
    "FitGuess", "FitResult", "angle_regression", "fit_multi", "initial_guess", "SensitivityFit",
    "sensitivity_curve",
]
