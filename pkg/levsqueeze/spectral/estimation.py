"""
Welch spectral estimation and shot-noise normalisation
"""

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Any, Dict, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.signal import get_window, welch

from ..config.constants import SHOT_NOISE_BAND_HZ, WELCH_DEFAULTS
from ..utils.logging import spectral_logger
from ..utils.exceptions import CalibrationError, UsageError

Band = Tuple[float, float]

# Reference segment and sampling of the taper response
KERNEL_SEGMENT = 1024
KERNEL_OVERSAMPLE = 8
KERNEL_HALF_WIDTH = 12


@dataclass
class Spectrum:
    """
    One-sided PSD on a frequency grid in Hz.

    window names the Welch taper when the values are a Welch estimate; exact
    model spectra leave it unset.
    """
    freqs: np.ndarray
    values: np.ndarray
    theta_inferred: Optional[float] = None
    unbalance_voltage: Optional[float] = None
    theta: Optional[float] = None
    window: Optional[str] = None
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.freqs = np.asarray(self.freqs, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.freqs.shape != self.values.shape or self.freqs.ndim != 1:
            raise UsageError("Spectrum frequencies and values must be 1-D arrays of equal length")
        if len(self.freqs) > 1 and not np.all(np.diff(self.freqs) > 0):
            raise UsageError("Spectrum frequencies must be strictly increasing")
        if np.any(self.values < 0):
            raise UsageError("Spectrum values must be non-negative")

    def __len__(self) -> int:
        return len(self.freqs)

    @property
    def resolution(self) -> float:
        return float(self.freqs[1] - self.freqs[0]) if len(self.freqs) > 1 else 0.0

    def band_mask(self, band: Band) -> np.ndarray:
        low, high = band
        return (self.freqs >= low) & (self.freqs <= high)

    def in_band(self, band: Band) -> "Spectrum":
        mask = self.band_mask(band)
        return replace(self, freqs=self.freqs[mask], values=self.values[mask])

    def same_grid(self, other: "Spectrum") -> bool:
        return len(self) == len(other) and np.allclose(self.freqs, other.freqs, rtol=1e-12, atol=0.0)

    def with_values(self, values: np.ndarray, **metadata: Any) -> "Spectrum":
        return replace(self, values=values, metadata={**self.metadata, **metadata})


def segment_length_for(dt: float, resolution_hz: float = WELCH_DEFAULTS["resolution_hz"]) -> int:
    """Shortest segment whose bin spacing is at most resolution_hz"""
    return int(math.ceil(1.0 / (dt * resolution_hz)))


@lru_cache(maxsize=8)
def window_kernel(window: str = WELCH_DEFAULTS["window"], oversample: int = KERNEL_OVERSAMPLE,
                  half_width: int = KERNEL_HALF_WIDTH) -> Tuple[np.ndarray, np.ndarray]:
    """
    Spectral response of a Welch taper as (offsets in bins, weights).

    The expected Welch estimate of a PSD S at bin frequency f is
    sum_j weights[j] * S(f + offsets[j] * resolution). The shape in units of
    bins does not depend on the segment length once it is long, so a fixed
    reference segment is used.
    """
    try:
        taper = get_window(window, KERNEL_SEGMENT)
    except ValueError as e:
        raise UsageError(f"Unknown Welch window '{window}': {e}")
    response = np.abs(np.fft.fft(taper, KERNEL_SEGMENT * oversample)) ** 2
    steps = np.arange(-half_width * oversample, half_width * oversample + 1)
    weights = response[steps % response.size]
    weights = weights / weights.sum()
    offsets = steps / oversample
    offsets.setflags(write=False)
    weights.setflags(write=False)
    return offsets, weights


def welch_psd(series: np.ndarray, dt: float, segment_length: Optional[int] = None,
              overlap: float = WELCH_DEFAULTS["overlap"], window: str = WELCH_DEFAULTS["window"],
              **spectrum_fields: Any) -> Spectrum:
    """
    One-sided Welch PSD; a white series of per-sample variance 1/(2 dt)
    comes out at level 1.
    """
    series = np.asarray(series, dtype=float)
    if series.size == 0:
        raise UsageError("Cannot estimate the spectrum of an empty series")
    if not 0.0 <= overlap < 1.0:
        raise UsageError(f"overlap must lie in [0, 1), got {overlap}")
    nperseg = segment_length or min(segment_length_for(dt), series.size)
    if nperseg > series.size:
        raise UsageError(f"Segment length {nperseg} exceeds series length {series.size}")

    freqs, values = welch(series, fs=1.0 / dt, window=window, nperseg=nperseg,
                          noverlap=int(overlap * nperseg), detrend="constant",
                          return_onesided=True, scaling="density")
    segments = 1 + (series.size - nperseg) // max(nperseg - int(overlap * nperseg), 1)
    spectral_logger.debug(f"Welch PSD: {segments} segments of {nperseg} samples")
    return Spectrum(freqs=freqs, values=values, window=window,
                    metadata={"segment_length": nperseg, "segments": segments}, **spectrum_fields)


def band_variance(spectrum: Spectrum, band: Band = SHOT_NOISE_BAND_HZ) -> float:
    """Integral of the PSD over a band"""
    mask = spectrum.band_mask(band)
    if mask.sum() < 2:
        raise UsageError(f"Band {band} Hz holds fewer than two frequency bins")
    return float(trapezoid(spectrum.values[mask], spectrum.freqs[mask]))


def normalize_to_shot_noise(spectrum: Spectrum, shot_reference: Spectrum,
                            band: Band = SHOT_NOISE_BAND_HZ) -> Spectrum:
    """Divide by the mean of the shot-noise reference over the band"""
    if not spectrum.same_grid(shot_reference):
        raise UsageError("Spectrum and shot-noise reference are on different frequency grids")
    mask = shot_reference.band_mask(band)
    if not mask.any():
        raise UsageError(f"Normalization band {band} Hz contains no frequency bins")
    level = float(np.mean(shot_reference.values[mask]))
    if not level > 0:
        raise CalibrationError(f"Shot-noise reference level over {band} Hz is {level}")
    return spectrum.with_values(spectrum.values / level, shot_noise_level=level)
