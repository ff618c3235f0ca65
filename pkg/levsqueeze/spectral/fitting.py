"""
Simultaneous fit of the homodyne PSD model to spectra taken at several angles

gamma_m, Gamma_tot and Gamma_meas are shared by all spectra; Omega_m and
theta are free per spectrum. Rates are fitted in log space so they stay
positive.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import linregress

from ..config.constants import FIT_DEFAULTS, PRESETS, TWO_PI
from ..model.params import ModelParams
from ..model.response import homodyne_psd_from_rates
from ..utils.logging import spectral_logger
from ..utils.exceptions import FitError, UsageError
from .estimation import Band, Spectrum, window_kernel

SHARED = ("gamma_m", "gamma_tot", "gamma_meas")


@dataclass
class FitGuess:
    """Starting point; rates in rad/s"""
    gamma_m: float
    gamma_tot: float
    gamma_meas: float
    omegas: Sequence[float]
    thetas: Sequence[float]


@dataclass
class AngleRegression:
    slope: float
    offset: float
    r_value: float


@dataclass
class FitResult:
    gamma_m: float
    gamma_tot: float
    gamma_meas: float
    omegas: np.ndarray
    thetas: np.ndarray
    errors: Dict[str, float]
    omega_errors: np.ndarray
    theta_errors: np.ndarray
    reduced_chi2: float
    nfev: int
    constraint_violated: bool = False
    angle_regression: Optional[AngleRegression] = None
    band_hz: Tuple[float, float] = (0.0, 0.0)
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    @property
    def eta_meas(self) -> float:
        return min(self.gamma_meas / self.gamma_tot, 1.0)

    @property
    def omega_m(self) -> float:
        """Mean mechanical frequency over the spectra"""
        return float(np.mean(self.omegas))

    def to_params(self, eta_d: float, gamma_rp: float = 0.0) -> ModelParams:
        """Model consistent with the fitted rates at a chosen detection efficiency"""
        return ModelParams.from_fit_rates(self.omega_m, self.gamma_m, self.gamma_tot,
                                          self.gamma_meas, eta_d, gamma_rp)

    def model_values(self, index: int, freqs_hz: np.ndarray) -> np.ndarray:
        return homodyne_psd_from_rates(TWO_PI * np.asarray(freqs_hz), self.thetas[index],
                                       self.omegas[index], self.gamma_m,
                                       self.gamma_tot, self.gamma_meas)

    def summary(self) -> Dict[str, Any]:
        """Flat key/value view in Hz for reports"""
        out: Dict[str, Any] = {}
        for name in SHARED:
            out[f"{name}_hz"] = getattr(self, name) / TWO_PI
            out[f"{name}_hz_err"] = self.errors[name] / TWO_PI
        out["eta_meas"] = self.eta_meas
        out["constraint_violated"] = self.constraint_violated
        out["reduced_chi2"] = self.reduced_chi2
        out["nfev"] = self.nfev
        out["fit_band_low_hz"], out["fit_band_high_hz"] = self.band_hz
        for k, (omega, theta) in enumerate(zip(self.omegas, self.thetas)):
            out[f"omega_m_hz[{k}]"] = omega / TWO_PI
            out[f"omega_m_hz_err[{k}]"] = self.omega_errors[k] / TWO_PI
            out[f"theta[{k}]"] = theta
            out[f"theta_err[{k}]"] = self.theta_errors[k]
        if self.angle_regression is not None:
            out["angle_slope"] = self.angle_regression.slope
            out["angle_offset"] = self.angle_regression.offset
            out["angle_r"] = self.angle_regression.r_value
        return out


def initial_guess(spectra: Sequence[Spectrum], preset: str = "paper-2021") -> FitGuess:
    """
    Rates from a preset, Omega_m from the strongest peak and theta from the
    inferred angles (pi/2 where none is known).
    """
    rates = PRESETS[preset]
    peak_spectrum = max(spectra, key=lambda s: float(s.values.max()))
    omega_peak = TWO_PI * float(peak_spectrum.freqs[int(np.argmax(peak_spectrum.values))])
    return FitGuess(
        gamma_m=TWO_PI * rates["gamma_m_hz"],
        gamma_tot=TWO_PI * rates["gamma_tot_hz"],
        gamma_meas=TWO_PI * rates["gamma_meas_hz"],
        omegas=[omega_peak] * len(spectra),
        thetas=[s.theta_inferred if s.theta_inferred is not None else math.pi / 2 for s in spectra],
    )


def _pack(guess: FitGuess) -> np.ndarray:
    return np.concatenate([
        np.log([guess.gamma_m, guess.gamma_tot, guess.gamma_meas]),
        np.log(np.asarray(guess.omegas, dtype=float)),
        np.asarray(guess.thetas, dtype=float),
    ])


class _Problem:
    """
    Weighted residuals of all spectra within the fit band.

    Welch estimates are compared with the model seen through the taper
    response; spectra without a window are compared with the model itself.
    """

    def __init__(self, spectra: Sequence[Spectrum], band: Band):
        self.count = len(spectra)
        self.omegas: List[np.ndarray] = []
        self.weights: List[Optional[np.ndarray]] = []
        self.data: List[np.ndarray] = []
        for spectrum in spectra:
            mask = spectrum.band_mask(band)
            if mask.sum() < 5:
                raise UsageError(f"Fit band {band} Hz holds too few bins of a spectrum")
            freqs = spectrum.freqs[mask]
            if spectrum.window:
                offsets, weights = window_kernel(spectrum.window)
                freqs = np.abs(freqs[:, None] + spectrum.resolution * offsets[None, :])
                self.weights.append(weights)
            else:
                self.weights.append(None)
            self.omegas.append(TWO_PI * freqs)
            self.data.append(spectrum.values[mask])
        self.size = sum(len(d) for d in self.data)

    def unpack(self, x: np.ndarray) -> Tuple[float, float, float, np.ndarray, np.ndarray]:
        gamma_m, gamma_tot, gamma_meas = np.exp(x[:3])
        n = self.count
        return gamma_m, gamma_tot, gamma_meas, np.exp(x[3:3 + n]), x[3 + n:]

    def residuals(self, x: np.ndarray) -> np.ndarray:
        gamma_m, gamma_tot, gamma_meas, omegas, thetas = self.unpack(x)
        parts = []
        for omega_grid, weights, data, omega_m, theta in zip(self.omegas, self.weights, self.data,
                                                              omegas, thetas):
            model = homodyne_psd_from_rates(omega_grid, theta, omega_m, gamma_m, gamma_tot, gamma_meas)
            if weights is not None:
                model = model @ weights
            parts.append((data - model) / model)
        return np.concatenate(parts)

    def per_spectrum_rms(self, residuals: np.ndarray) -> List[float]:
        out, start = [], 0
        for data in self.data:
            chunk = residuals[start:start + len(data)]
            out.append(float(np.sqrt(np.mean(chunk ** 2))))
            start += len(data)
        return out


def _nearest_branch(theta: float, reference: Optional[float]) -> float:
    """theta mod pi, placed on the branch closest to a reference angle"""
    wrapped = theta % math.pi
    if reference is None:
        return wrapped
    return wrapped + math.pi * round((reference - wrapped) / math.pi)


def angle_regression(fitted: Sequence[float], inferred: Sequence[float]) -> Optional[AngleRegression]:
    """Linear relation fitted = slope * inferred + offset"""
    if len(fitted) < 2 or len(set(inferred)) < 2:
        return None
    reg = linregress(np.asarray(inferred, dtype=float), np.asarray(fitted, dtype=float))
    return AngleRegression(slope=float(reg.slope), offset=float(reg.intercept), r_value=float(reg.rvalue))


def default_fit_band(guess: FitGuess) -> Band:
    centre = float(np.mean(guess.omegas)) / TWO_PI
    half = FIT_DEFAULTS["half_band_hz"]
    return max(centre - half, 0.0), centre + half


def fit_multi(spectra: Sequence[Spectrum], fit_band: Optional[Band] = None,
              init: Optional[FitGuess] = None, max_nfev: int = FIT_DEFAULTS["max_nfev"]) -> FitResult:
    """Weighted nonlinear least squares of the homodyne PSD over all spectra jointly"""
    if len(spectra) < 3:
        raise UsageError(f"Need at least three spectra for the joint fit, got {len(spectra)}")
    inferred = [s.theta_inferred for s in spectra]
    known = [t for t in inferred if t is not None]
    if known and len(set(np.round(known, 12))) < 3:
        raise UsageError("Spectra must span at least three distinct angles")
    guess = init or initial_guess(spectra)
    if len(guess.omegas) != len(spectra) or len(guess.thetas) != len(spectra):
        raise UsageError("Initial guess does not match the number of spectra")
    band = fit_band or default_fit_band(guess)
    problem = _Problem(spectra, band)

    x0 = _pack(guess)
    spectral_logger.info(f"Fitting {len(spectra)} spectra over {band[0]:.0f}-{band[1]:.0f} Hz "
                         f"({problem.size} points)")
    try:
        result = least_squares(problem.residuals, x0, method="trf", x_scale="jac",
                               ftol=FIT_DEFAULTS["ftol"], xtol=FIT_DEFAULTS["xtol"],
                               gtol=FIT_DEFAULTS["gtol"], max_nfev=max_nfev)
    except (ValueError, FloatingPointError) as e:
        raise FitError(f"Fit evaluation failed: {e}", {"x0": x0.tolist()})

    rms = problem.per_spectrum_rms(result.fun)
    if result.status <= 0 or not np.all(np.isfinite(result.x)):
        raise FitError(
            f"Fit did not converge: {result.message}",
            {"status": int(result.status), "nfev": int(result.nfev), "cost": float(result.cost),
             "per_spectrum_rms": rms},
        )

    dof = max(problem.size - len(result.x), 1)
    reduced_chi2 = float(2.0 * result.cost / dof)
    jac = result.jac
    covariance = np.linalg.pinv(jac.T @ jac) * reduced_chi2
    sigma = np.sqrt(np.clip(np.diag(covariance), 0.0, None))

    gamma_m, gamma_tot, gamma_meas, omegas, thetas = problem.unpack(result.x)
    n = len(spectra)
    thetas = np.array([_nearest_branch(t, ref) for t, ref in zip(thetas, inferred)])
    errors = {
        "gamma_m": gamma_m * sigma[0],
        "gamma_tot": gamma_tot * sigma[1],
        "gamma_meas": gamma_meas * sigma[2],
    }

    violated = gamma_meas > gamma_tot
    if violated:
        spectral_logger.warning(
            f"Fitted Gamma_meas exceeds Gamma_tot (eta_meas = {gamma_meas / gamma_tot:.3f}); clamped to 1"
        )

    regression = None
    if len(known) == n:
        regression = angle_regression(list(thetas), known)

    fit = FitResult(
        gamma_m=float(gamma_m), gamma_tot=float(gamma_tot), gamma_meas=float(gamma_meas),
        omegas=omegas, thetas=thetas, errors=errors,
        omega_errors=omegas * sigma[3:3 + n], theta_errors=sigma[3 + n:],
        reduced_chi2=reduced_chi2, nfev=int(result.nfev), constraint_violated=bool(violated),
        angle_regression=regression, band_hz=(float(band[0]), float(band[1])),
        diagnostics={"status": int(result.status), "message": result.message,
                     "per_spectrum_rms": rms},
    )
    spectral_logger.info(
        f"Fit converged after {fit.nfev} evaluations: Gamma_tot/2pi = {gamma_tot / TWO_PI:.1f} Hz, "
        f"Gamma_meas/2pi = {gamma_meas / TWO_PI:.1f} Hz, eta_meas = {fit.eta_meas:.3f}"
    )
    return fit
