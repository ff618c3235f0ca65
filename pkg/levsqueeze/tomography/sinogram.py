"""
Sinogram: column-normalised histograms of quadrature samples versus angle
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import curve_fit
from scipy.stats import normaltest

from ..config.constants import TOMOGRAPHY_DEFAULTS, VACUUM_SD
from ..utils.logging import tomo_logger
from ..utils.exceptions import FitError, UsageError
from .modes import TemporalModeSamples


@dataclass
class Sinogram:
    angles: np.ndarray
    bin_edges: np.ndarray
    density: np.ndarray
    variances: np.ndarray
    sample_counts: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        self.angles = np.asarray(self.angles, dtype=float)
        self.bin_edges = np.asarray(self.bin_edges, dtype=float)
        self.density = np.asarray(self.density, dtype=float)
        expected = (len(self.angles), len(self.bin_edges) - 1)
        if self.density.shape != expected:
            raise UsageError(f"Sinogram density shape {self.density.shape} != {expected}")

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])

    @property
    def bin_width(self) -> float:
        return float(self.bin_edges[1] - self.bin_edges[0])

    @property
    def half_range(self) -> float:
        return float(self.bin_edges[-1])

    def column_integrals(self) -> np.ndarray:
        return self.density.sum(axis=1) * self.bin_width

    def column_moments(self) -> Tuple[np.ndarray, np.ndarray]:
        """Mean and variance of every column from the binned densities"""
        weights = self.density * self.bin_width
        centers = self.bin_centers
        mean = weights @ centers
        variance = weights @ centers ** 2 - mean ** 2
        return mean, variance


def symmetric_edges(half_range: float, bin_count: int) -> np.ndarray:
    return np.linspace(-half_range, half_range, bin_count + 1)


def build_sinogram(samples: Sequence[TemporalModeSamples],
                   bin_count: int = TOMOGRAPHY_DEFAULTS["bin_count"],
                   bin_range: Optional[float] = None, pooled: bool = True) -> Sinogram:
    """
    Histogram the mode samples of every angle.

    Without an explicit bin_range the edges span +-4 vacuum s.d., widened to
    +-4 s.d. of the broadest column.
    """
    if len(samples) < TOMOGRAPHY_DEFAULTS["min_angles"]:
        raise UsageError(
            f"Need at least {TOMOGRAPHY_DEFAULTS['min_angles']} angles, got {len(samples)}"
        )
    ordered = sorted(samples, key=lambda s: s.theta)
    values = [s.components(pooled) for s in ordered]
    for s, v in zip(ordered, values):
        if v.size == 0:
            raise UsageError(f"No samples at angle {s.theta:.4f}")

    variances = np.array([np.var(v) for v in values])
    spread = TOMOGRAPHY_DEFAULTS["bin_range_sd"]
    if bin_range is None:
        bin_range = spread * max(VACUUM_SD, math.sqrt(float(variances.max())))
    edges = symmetric_edges(bin_range, bin_count)
    width = edges[1] - edges[0]

    density = np.zeros((len(ordered), bin_count))
    counts = np.zeros(len(ordered), dtype=int)
    for k, v in enumerate(values):
        hist, _ = np.histogram(v, bins=edges)
        inside = hist.sum()
        if inside == 0:
            raise UsageError(f"All samples at angle {ordered[k].theta:.4f} fall outside the bin range")
        if inside < v.size:
            tomo_logger.debug(f"{v.size - inside} samples outside +-{bin_range:.3f} at angle {k}")
        density[k] = hist / (inside * width)
        counts[k] = v.size

    tomo_logger.info(f"Sinogram: {len(ordered)} angles x {bin_count} bins over +-{bin_range:.3f}")
    return Sinogram(
        angles=np.array([s.theta for s in ordered]), bin_edges=edges, density=density,
        variances=variances, sample_counts=counts,
        metadata={"center_freq": ordered[0].center_freq, "pooled": pooled},
    )


def _gaussian_density(x: np.ndarray, mean: float, variance: float) -> np.ndarray:
    variance = abs(variance)
    return np.exp(-(x - mean) ** 2 / (2.0 * variance)) / np.sqrt(2.0 * math.pi * variance)


def fit_column_gaussian(sinogram: Sinogram, index: int) -> Tuple[float, float]:
    """(mean, variance) of a Gaussian fitted to one sinogram column"""
    column = sinogram.density[index]
    means, variances = sinogram.column_moments()
    try:
        popt, _ = curve_fit(_gaussian_density, sinogram.bin_centers, column,
                            p0=[means[index], max(variances[index], 1e-6)])
    except (RuntimeError, ValueError) as e:
        raise FitError(f"Gaussian fit of column {index} failed: {e}")
    return float(popt[0]), float(abs(popt[1]))


def column_normality(samples: TemporalModeSamples, pooled: bool = True) -> float:
    """p-value of the D'Agostino-Pearson normality test"""
    return float(normaltest(samples.components(pooled)).pvalue)
