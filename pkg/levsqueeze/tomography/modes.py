"""
Temporal-mode extraction: windowed Fourier coefficients of consecutive chunks
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from scipy.signal import get_window

from ..config.constants import TOMOGRAPHY_DEFAULTS, TWO_PI
from ..langevin.config import PhotocurrentRecord
from ..utils.logging import tomo_logger
from ..utils.exceptions import UsageError


@dataclass
class TemporalModeSamples:
    """Complex mode amplitudes of one angle; vacuum s.d. is 1/sqrt(2) per component"""
    r: np.ndarray
    center_freq: float
    chunk_duration: float
    theta: float
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.r)

    @property
    def bin_width(self) -> float:
        return 1.0 / self.chunk_duration

    def components(self, pooled: bool = True) -> np.ndarray:
        """Real and imaginary parts as independent measurements, or the real part alone"""
        if pooled:
            return np.concatenate([self.r.real, self.r.imag])
        return self.r.real.copy()


def mode_filter(n: int, dt: float, center_freq: float, window: str = "hann") -> np.ndarray:
    """
    Weights c w(t) exp(-i Omega t), t measured from the chunk centre, with
    c = sqrt(2 dt / sum w^2) so that unit-PSD white noise gives component variance 1/2.
    """
    w = get_window(window, n)
    t = (np.arange(n) - (n - 1) / 2.0) * dt
    scale = math.sqrt(2.0 * dt / np.sum(w ** 2))
    return scale * w * np.exp(-1j * TWO_PI * center_freq * t)


def extract_modes(record: PhotocurrentRecord, chunk_duration: float = TOMOGRAPHY_DEFAULTS["chunk_duration"],
                  center_freq: float = 70.1e3, window: str = "hann",
                  gamma_m: Optional[float] = None) -> TemporalModeSamples:
    """
    Split the photocurrent into chunks of duration T and project each onto
    the windowed Fourier mode at center_freq (Hz).
    """
    dt = record.dt
    n = int(round(chunk_duration / dt))
    if n < 2:
        raise UsageError(f"Chunk duration {chunk_duration} s is shorter than two samples")
    if not 0 < center_freq < 0.5 / dt:
        raise UsageError(f"Centre frequency {center_freq} Hz outside (0, Nyquist)")
    chunks = len(record) // n
    if chunks == 0:
        raise UsageError(f"Record of {len(record)} samples is shorter than one chunk ({n})")

    if gamma_m is None and "gamma_m_hz" in record.metadata:
        gamma_m = TWO_PI * float(record.metadata["gamma_m_hz"])
    if gamma_m is not None and chunk_duration < 1.0 / gamma_m:
        tomo_logger.warning(
            f"Chunk duration {chunk_duration * 1e3:.2f} ms is below 1/gamma_m = "
            f"{1e3 / gamma_m:.2f} ms; samples are correlated"
        )
    if chunks < TOMOGRAPHY_DEFAULTS["min_chunks"]:
        tomo_logger.warning(f"Only {chunks} chunks at theta = {record.theta:.4f}; statistics are poor")

    kernel = mode_filter(n, dt, center_freq, window)
    r = record.i_theta[:chunks * n].reshape(chunks, n) @ kernel
    tomo_logger.debug(f"Extracted {chunks} modes at {center_freq:.0f} Hz, theta = {record.theta:.4f}")
    return TemporalModeSamples(r=r, center_freq=center_freq, chunk_duration=n * dt,
                               theta=record.theta, metadata={"chunks": chunks, "window": window})
