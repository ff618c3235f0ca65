"""
Local-oscillator calibration: background excess versus power unbalance and
homodyne angle from the DC voltage
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ..config.constants import CLASSICAL_EXCESS_BOUND
from ..utils.logging import spectral_logger
from ..utils.exceptions import CalibrationError, ParameterDomainError, UsageError
from .estimation import Spectrum


@dataclass(frozen=True)
class CalibrationModel:
    """relative background = c0 + c1 u + c2 u^2, and V_DC = v_off - v_amp cos(theta)"""
    c0: float
    c1: float
    c2: float
    v_off: float
    v_amp: float
    unbalance_range: Tuple[float, float] = (-math.inf, math.inf)

    def __post_init__(self):
        if not self.v_amp > 0:
            raise CalibrationError(f"v_amp must be positive, got {self.v_amp}")

    def relative_background(self, unbalance_voltage: float) -> float:
        u = unbalance_voltage
        return self.c0 + self.c1 * u + self.c2 * u * u

    def excess(self, unbalance_voltage: float) -> float:
        return self.relative_background(unbalance_voltage) - 1.0

    def in_range(self, unbalance_voltage: float) -> bool:
        low, high = self.unbalance_range
        return low <= unbalance_voltage <= high

    def max_excess(self, points: int = 201) -> float:
        """Largest |excess| over the calibrated unbalance range"""
        low, high = self.unbalance_range
        if not (math.isfinite(low) and math.isfinite(high)):
            return abs(self.excess(0.0))
        grid = np.linspace(low, high, points)
        return float(np.max(np.abs(self.c0 - 1.0 + self.c1 * grid + self.c2 * grid ** 2)))

    def voltage_at(self, theta: float) -> float:
        return self.v_off - self.v_amp * math.cos(theta)

    def to_dict(self) -> Dict[str, float]:
        return {
            "c0": self.c0, "c1": self.c1, "c2": self.c2,
            "v_off": self.v_off, "v_amp": self.v_amp,
            "unbalance_min": self.unbalance_range[0],
            "unbalance_max": self.unbalance_range[1],
        }

    @classmethod
    def from_dict(cls, values: Dict[str, float]) -> "CalibrationModel":
        return cls(
            c0=float(values["c0"]), c1=float(values["c1"]), c2=float(values["c2"]),
            v_off=float(values["v_off"]), v_amp=float(values["v_amp"]),
            unbalance_range=(float(values.get("unbalance_min", -math.inf)),
                             float(values.get("unbalance_max", math.inf))),
        )


def calibrate_angle_sweep(v_dc_trace: Sequence[float]) -> Tuple[float, float]:
    """(v_off, v_amp) from the extremes of a DC trace recorded while the angle is swept"""
    trace = np.asarray(v_dc_trace, dtype=float)
    if trace.size < 2:
        raise UsageError("Angle sweep needs at least two DC samples")
    high, low = float(trace.max()), float(trace.min())
    if not high > low:
        raise CalibrationError("Angle sweep is flat; cannot determine v_amp")
    return (high + low) / 2.0, (high - low) / 2.0


def fit_calibration_parabola(unbalance_voltages: Sequence[float], relative_variances: Sequence[float],
                             v_off: float, v_amp: float) -> CalibrationModel:
    """
    Quadratic least-squares fit of the background variance against unbalance.

    Coefficients are rescaled so that the fitted background at balance is
    exactly 1, the level the shot-noise reference defines.
    """
    u = np.asarray(unbalance_voltages, dtype=float)
    r = np.asarray(relative_variances, dtype=float)
    if u.shape != r.shape or u.size < 3:
        raise UsageError("Parabola fit needs at least three matching (unbalance, variance) pairs")
    c2, c1, c0 = np.polyfit(u, r, 2)
    if not c0 > 0:
        raise CalibrationError(f"Fitted background at balance is not positive: {c0}")
    model = CalibrationModel(c0=1.0, c1=c1 / c0, c2=c2 / c0, v_off=v_off, v_amp=v_amp,
                             unbalance_range=(float(u.min()), float(u.max())))
    check_excess_bound(model)
    spectral_logger.info(f"Calibration parabola: c1={model.c1:.4g}, c2={model.c2:.4g}")
    return model


def check_excess_bound(calib: CalibrationModel, bound: float = CLASSICAL_EXCESS_BOUND) -> float:
    """Largest excess over the calibrated range; warns when it exceeds the bound"""
    excess = calib.max_excess()
    if excess > bound:
        spectral_logger.warning(
            f"Classical excess reaches {excess:.1%} over the calibrated range (bound {bound:.0%})"
        )
    return excess


def subtract_classical_noise(spectrum: Spectrum, calib: CalibrationModel,
                             unbalance_voltage: Optional[float] = None) -> Spectrum:
    """Remove the unbalance-dependent excess from a shot-noise normalised spectrum"""
    u = spectrum.unbalance_voltage if unbalance_voltage is None else unbalance_voltage
    if u is None:
        raise UsageError("No unbalance voltage given for classical-noise subtraction")
    if not calib.in_range(u):
        spectral_logger.warning(
            f"Unbalance {u:.4g} V outside calibrated range {calib.unbalance_range}; extrapolating"
        )
    corrected = spectrum.values - calib.excess(u)
    floored = int(np.count_nonzero(corrected < 0))
    if floored:
        spectral_logger.warning(f"{floored} bins fell below zero after subtraction and were floored")
        corrected = np.clip(corrected, 0.0, None)
    return spectrum.with_values(corrected, floored_bins=floored, excess_subtracted=calib.excess(u))


def infer_angle(v_dc: float, calib: CalibrationModel, tolerance: float = 1e-12) -> float:
    """theta = arccos((v_off - v_dc) / v_amp) on [0, pi]"""
    ratio = (calib.v_off - v_dc) / calib.v_amp
    if abs(ratio) > 1.0 + tolerance:
        raise ParameterDomainError(
            f"DC voltage {v_dc:.6g} V outside [{calib.v_off - calib.v_amp:.6g}, "
            f"{calib.v_off + calib.v_amp:.6g}] V; check the calibration"
        )
    return math.acos(max(-1.0, min(1.0, ratio)))
