"""
Response to a calibrated force tone versus homodyne angle
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.optimize import curve_fit

from ..utils.logging import spectral_logger
from ..utils.exceptions import FitError, UsageError


@dataclass(frozen=True)
class SensitivityFit:
    amplitude: float
    theta_offset: float

    @property
    def minimum_angle(self) -> float:
        """Angle of vanishing response in [0, pi)"""
        return self.theta_offset % math.pi

    @property
    def maximum_angle(self) -> float:
        return (self.theta_offset + math.pi / 2) % math.pi

    @property
    def shift_from_pi(self) -> float:
        """How far the response minimum sits below pi"""
        return math.pi - self.minimum_angle if self.minimum_angle > 0 else 0.0

    def evaluate(self, theta: np.ndarray) -> np.ndarray:
        return sensitivity_model(np.asarray(theta, dtype=float), self.amplitude, self.theta_offset)


def sensitivity_model(theta: np.ndarray, amplitude: float, theta_offset: float) -> np.ndarray:
    return amplitude * np.abs(np.sin(theta - theta_offset))


def sensitivity_curve(drive_responses: Sequence[Tuple[float, float]]) -> SensitivityFit:
    """Least-squares fit of amplitude(theta) = A |sin(theta - theta_0)|"""
    if len(drive_responses) < 4:
        raise UsageError(f"Sensitivity fit needs at least four angles, got {len(drive_responses)}")
    theta = np.array([t for t, _ in drive_responses], dtype=float)
    amplitude = np.array([a for _, a in drive_responses], dtype=float)
    if not np.all(np.isfinite(amplitude)) or np.ptp(amplitude) <= 0:
        raise FitError("Sensitivity data are degenerate (constant or non-finite amplitudes)")

    # coarse scan picks the branch, curve_fit refines it
    scan = np.linspace(0.0, math.pi, 361, endpoint=False)
    shapes = np.abs(np.sin(theta[None, :] - scan[:, None]))
    norms = np.einsum("ij,ij->i", shapes, shapes)
    scale = shapes @ amplitude / np.where(norms > 0, norms, 1.0)
    sse = np.sum((amplitude[None, :] - scale[:, None] * shapes) ** 2, axis=1)
    k = int(np.argmin(sse))

    try:
        popt, pcov = curve_fit(sensitivity_model, theta, amplitude, p0=[scale[k], scan[k]])
    except (RuntimeError, ValueError) as e:
        raise FitError(f"Sensitivity fit failed: {e}")
    if not np.all(np.isfinite(popt)):
        raise FitError("Sensitivity fit returned non-finite parameters")

    fit = SensitivityFit(amplitude=abs(float(popt[0])), theta_offset=float(popt[1]) % math.pi)
    spectral_logger.info(
        f"Sensitivity fit: A = {fit.amplitude:.4g}, minimum at {fit.minimum_angle / math.pi:.4f} pi"
    )
    return fit
