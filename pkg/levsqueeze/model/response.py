"""
Closed-form response of the measured oscillator: susceptibility, homodyne PSD
and the squeezing figures derived from it

All frequencies are angular (rad/s). Spectra are in shot-noise units.
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize_scalar

from ..config.constants import FIT_DEFAULTS, TWO_PI
from ..utils.logging import model_logger
from .params import ModelParams

ArrayLike = Union[float, np.ndarray]
# Complex susceptibility values; numpy complex scalars or arrays
ComplexResponse = Union[complex, np.ndarray]


@dataclass(frozen=True)
class MeasurementRates:
    gamma_tot: float
    gamma_meas: float
    eta_meas: float


@dataclass(frozen=True)
class SqueezingOptimum:
    """Minimum of the homodyne PSD over frequency and angle"""
    min_psd: float
    omega: float
    theta: float


@dataclass(frozen=True)
class SqueezingBand:
    omega_low: float
    omega_high: float
    level: float

    @property
    def width_hz(self) -> float:
        return (self.omega_high - self.omega_low) / TWO_PI


def susceptibility(omega: ArrayLike, params: ModelParams) -> ComplexResponse:
    """chi(Omega) = Omega_m / (Omega_m^2 - Omega^2 - i gamma_m Omega)"""
    omega = np.asarray(omega, dtype=float)
    return params.omega_m / (params.omega_m ** 2 - omega ** 2 - 1j * params.gamma_m * omega)


def measurement_rates(params: ModelParams) -> MeasurementRates:
    return MeasurementRates(
        gamma_tot=params.gamma_tot,
        gamma_meas=params.gamma_meas,
        eta_meas=params.eta_meas,
    )


def _psd_terms(omega: ArrayLike, gamma_tot: float, gamma_meas: float,
               omega_m: float, gamma_m: float) -> Tuple[np.ndarray, np.ndarray]:
    """Imprecision-weighted displacement term a and correlation term b"""
    omega = np.asarray(omega, dtype=float)
    chi = omega_m / (omega_m ** 2 - omega ** 2 - 1j * gamma_m * omega)
    a = 8.0 * gamma_meas * np.abs(chi) ** 2 * 2.0 * gamma_tot
    b = 2.0 * 2.0 * gamma_meas * chi.real
    return a, b


def homodyne_psd_from_rates(omega: ArrayLike, theta: ArrayLike, omega_m: float, gamma_m: float,
                            gamma_tot: float, gamma_meas: float) -> np.ndarray:
    """Homodyne PSD parameterised by the identifiable rates only"""
    a, b = _psd_terms(omega, gamma_tot, gamma_meas, omega_m, gamma_m)
    theta = np.asarray(theta, dtype=float)
    return 1.0 + a * np.sin(theta) ** 2 + b * np.sin(2.0 * theta)


def homodyne_psd(omega: ArrayLike, theta: ArrayLike, params: ModelParams) -> np.ndarray:
    """
    Photocurrent PSD at homodyne angle theta, normalised to shot noise.

    S = 1 + 8 Gamma_meas sin^2(theta) |chi|^2 2 Gamma_tot
          + 2 [2 Gamma_meas Re(chi) sin(2 theta)]
    """
    return homodyne_psd_from_rates(omega, theta, params.omega_m, params.gamma_m,
                                   params.gamma_tot, params.gamma_meas)


def displacement_psd(omega: ArrayLike, params: ModelParams) -> np.ndarray:
    """Symmetrized two-sided PSD of q: |chi|^2 * 2 Gamma_tot"""
    return np.abs(susceptibility(omega, params)) ** 2 * 2.0 * params.gamma_tot


def position_variance(params: ModelParams) -> float:
    """Steady-state <q^2> = Gamma_tot / gamma_m (integral of the Lorentzian)"""
    return params.gamma_tot / params.gamma_m


def optimal_angle(omega: ArrayLike, params: ModelParams) -> Tuple[np.ndarray, np.ndarray]:
    """
    Angle minimising the PSD at each frequency, and the minimum value.

    S = 1 + a/2 - (a/2) cos 2theta + b sin 2theta has its minimum
    1 + a/2 - sqrt(a^2/4 + b^2).
    """
    a, b = _psd_terms(omega, params.gamma_tot, params.gamma_meas, params.omega_m, params.gamma_m)
    phase = np.arctan2(b, -a / 2.0)
    theta = np.mod((phase + np.pi) / 2.0, np.pi)
    s_min = 1.0 + a / 2.0 - np.sqrt(a ** 2 / 4.0 + b ** 2)
    return theta, s_min


def _default_band(params: ModelParams) -> Tuple[float, float]:
    half = TWO_PI * FIT_DEFAULTS["half_band_hz"]
    return max(params.omega_m - half, 0.0), params.omega_m + half


def optimal_squeezing(params: ModelParams, band: Optional[Tuple[float, float]] = None,
                      points: int = 200001) -> SqueezingOptimum:
    """Numerically minimise the PSD over (Omega, theta) within a band"""
    low, high = band or _default_band(params)
    grid = np.linspace(low, high, points)
    _, s_min = optimal_angle(grid, params)
    k = int(np.argmin(s_min))
    lo, hi = grid[max(k - 1, 0)], grid[min(k + 1, points - 1)]

    result = minimize_scalar(lambda w: float(optimal_angle(w, params)[1]),
                             bounds=(lo, hi), method="bounded",
                             options={"xatol": 1e-9 * params.omega_m})
    omega_best = float(result.x) if result.fun <= s_min[k] else float(grid[k])
    theta_best, value = optimal_angle(omega_best, params)
    model_logger.debug(f"Optimal squeezing S = {float(value):.4f} at {omega_best / TWO_PI:.1f} Hz, "
                       f"theta = {float(theta_best):.4f}")
    return SqueezingOptimum(min_psd=float(value), omega=omega_best, theta=float(theta_best))


def _contiguous_band(grid: np.ndarray, below: np.ndarray, k: int) -> Tuple[float, float]:
    lo = k
    while lo > 0 and below[lo - 1]:
        lo -= 1
    hi = k
    while hi < len(grid) - 1 and below[hi + 1]:
        hi += 1
    return float(grid[lo]), float(grid[hi])


def squeezing_bandwidth(params: ModelParams, theta: Optional[float] = None,
                        band: Optional[Tuple[float, float]] = None,
                        points: int = 200001) -> SqueezingBand:
    """
    Contiguous frequency band of significant squeezing around the optimum.

    With theta=None the angle is optimised at every frequency and the band is
    where the spectrum stays below half of the maximal noise reduction,
    1 - (1 - S_opt)/2. With a fixed theta the band is where S < 1.
    """
    low, high = band or _default_band(params)
    grid = np.linspace(low, high, points)
    if theta is None:
        _, spectrum = optimal_angle(grid, params)
        level = 1.0 - (1.0 - float(spectrum.min())) / 2.0
    else:
        spectrum = homodyne_psd(grid, theta, params)
        level = 1.0
    k = int(np.argmin(spectrum))
    if spectrum[k] >= level:
        model_logger.debug(f"No squeezing below {level:.4g} within {low / TWO_PI:.0f}-{high / TWO_PI:.0f} Hz")
        return SqueezingBand(omega_low=float(grid[k]), omega_high=float(grid[k]), level=level)
    omega_low, omega_high = _contiguous_band(grid, spectrum < level, k)
    return SqueezingBand(omega_low=omega_low, omega_high=omega_high, level=level)


def predicted_spectra(params: ModelParams, thetas: np.ndarray, omegas: np.ndarray) -> np.ndarray:
    """PSD grid of shape (len(thetas), len(omegas))"""
    thetas = np.asarray(thetas, dtype=float)[:, None]
    omegas = np.asarray(omegas, dtype=float)[None, :]
    return homodyne_psd(omegas, thetas, params)
