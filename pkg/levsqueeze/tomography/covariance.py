"""
Gaussian covariance of the reconstructed mode: cuts, moments and analytic reference
"""

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import multivariate_normal, norm

from ..config.constants import TWO_PI, VACUUM_VARIANCE
from ..model.params import ModelParams
from ..model.response import homodyne_psd
from ..utils.logging import tomo_logger
from ..utils.exceptions import UsageError
from .modes import TemporalModeSamples
from .radon import WignerGrid, grid_axis
from .sinogram import Sinogram, fit_column_gaussian

CUT_ANGLES = (0.0, math.pi / 4, math.pi / 2)


@dataclass(frozen=True)
class CovarianceEllipse:
    var_x: float
    var_y: float
    cov_xy: float

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.var_x, self.cov_xy], [self.cov_xy, self.var_y]])

    @property
    def is_physical(self) -> bool:
        return self.var_x > 0 and self.var_y > 0 and abs(self.cov_xy) <= math.sqrt(self.var_x * self.var_y)

    def axes(self) -> Tuple[float, float]:
        """(minor, major) variances"""
        minor, major = np.linalg.eigvalsh(self.matrix)
        return float(minor), float(major)

    @property
    def tilt(self) -> float:
        """Orientation of the major axis in (-pi/2, pi/2]"""
        return 0.5 * math.atan2(2.0 * self.cov_xy, self.var_x - self.var_y)

    def marginal_variance(self, theta: float) -> float:
        """Variance of X cos(theta) - Y sin(theta)"""
        c, s = math.cos(theta), math.sin(theta)
        return c * c * self.var_x + s * s * self.var_y - 2.0 * s * c * self.cov_xy

    def squeezing_db(self) -> float:
        """Minor axis relative to vacuum, in dB (negative when squeezed)"""
        return 10.0 * math.log10(self.axes()[0] / VACUUM_VARIANCE)

    def contour(self, n_sd: float = 2.0, points: int = 200) -> np.ndarray:
        """(points, 2) array on the n_sd ellipse"""
        values, vectors = np.linalg.eigh(self.matrix)
        phi = np.linspace(0.0, TWO_PI, points)
        circle = np.vstack([np.cos(phi), np.sin(phi)])
        return (vectors @ (n_sd * np.sqrt(np.clip(values, 0.0, None))[:, None] * circle)).T

    def to_dict(self) -> dict:
        minor, major = self.axes()
        return {"var_x": self.var_x, "var_y": self.var_y, "cov_xy": self.cov_xy,
                "minor": minor, "major": major, "tilt": self.tilt,
                "physical": self.is_physical}

    @classmethod
    def vacuum(cls) -> "CovarianceEllipse":
        return cls(VACUUM_VARIANCE, VACUUM_VARIANCE, 0.0)


def covariance_from_cuts(v1: float, v2: float, v3: float) -> CovarianceEllipse:
    """<X^2> = V1, <Y^2> = V3, <XY> = (V1 + V3)/2 - V2"""
    for name, value in (("V1", v1), ("V2", v2), ("V3", v3)):
        if not value > 0:
            raise UsageError(f"{name} must be positive, got {value}")
    ellipse = CovarianceEllipse(var_x=v1, var_y=v3, cov_xy=(v1 + v3) / 2.0 - v2)
    if not ellipse.is_physical:
        tomo_logger.warning(f"Cut variances ({v1:.4g}, {v2:.4g}, {v3:.4g}) give an unphysical ellipse")
    return ellipse


def theoretical_covariance(center_freq: float, params: ModelParams) -> CovarianceEllipse:
    """Mode covariance from the homodyne PSD: Var(X_theta) = S(Omega, theta)/2"""
    omega = TWO_PI * center_freq
    v1, v2, v3 = (float(homodyne_psd(omega, theta, params)) / 2.0 for theta in CUT_ANGLES)
    return covariance_from_cuts(v1, v2, v3)


def harmonic_fit(angles: Sequence[float], variances: Sequence[float]) -> Tuple[float, float, float]:
    """Least-squares V(theta) = a + b cos 2theta + c sin 2theta"""
    angles = np.asarray(angles, dtype=float)
    design = np.column_stack([np.ones_like(angles), np.cos(2 * angles), np.sin(2 * angles)])
    if np.linalg.matrix_rank(design) < 3:
        raise UsageError("Need at least three distinct angles (mod pi) for the cut fit")
    coeffs, *_ = np.linalg.lstsq(design, np.asarray(variances, dtype=float), rcond=None)
    return float(coeffs[0]), float(coeffs[1]), float(coeffs[2])


def cut_variances(sinogram: Sinogram, method: str = "moments") -> Tuple[float, float, float]:
    """
    (V(0), V(pi/4), V(pi/2)) from all columns.

    method="moments" uses the sample variances stored with the sinogram,
    "gaussian" fits a Gaussian to each column.
    """
    if method == "moments":
        variances = sinogram.variances
    elif method == "gaussian":
        variances = np.array([fit_column_gaussian(sinogram, k)[1] for k in range(len(sinogram.angles))])
    else:
        raise UsageError(f"Unknown cut method '{method}'")
    a, b, c = harmonic_fit(sinogram.angles, variances)
    return a + b, a + c, a - b


def covariance_from_sinogram(sinogram: Sinogram, method: str = "moments") -> CovarianceEllipse:
    return covariance_from_cuts(*cut_variances(sinogram, method))


def grid_covariance(grid: WignerGrid) -> CovarianceEllipse:
    """Second central moments of a reconstructed grid"""
    x, y = grid.mesh()
    weights = grid.values * grid.pixel ** 2
    total = weights.sum()
    mx, my = (weights * x).sum() / total, (weights * y).sum() / total
    var_x = float((weights * (x - mx) ** 2).sum() / total)
    var_y = float((weights * (y - my) ** 2).sum() / total)
    cov = float((weights * (x - mx) * (y - my)).sum() / total)
    return CovarianceEllipse(var_x=var_x, var_y=var_y, cov_xy=cov)


def gaussian_sinogram(ellipse: CovarianceEllipse, angles: Sequence[float],
                      bin_edges: np.ndarray) -> Sinogram:
    """Exact bin-averaged Gaussian marginals, each column normalised over the bin range"""
    angles = np.asarray(angles, dtype=float)
    width = bin_edges[1] - bin_edges[0]
    variances = np.array([ellipse.marginal_variance(float(t)) for t in angles])
    cdf = norm.cdf(bin_edges[None, :] / np.sqrt(variances)[:, None])
    mass = np.diff(cdf, axis=1)
    density = mass / (mass.sum(axis=1, keepdims=True) * width)
    return Sinogram(angles=angles, bin_edges=bin_edges, density=density, variances=variances,
                    sample_counts=np.zeros(len(angles), dtype=int), metadata={"source": "gaussian"})


def gaussian_wigner(ellipse: CovarianceEllipse, grid_size: int, extent: float) -> WignerGrid:
    axis = grid_axis(grid_size, extent)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    values = multivariate_normal(mean=[0.0, 0.0], cov=ellipse.matrix).pdf(np.dstack([x, y]))
    return WignerGrid(axis=axis, values=values, metadata={"source": "gaussian"})


def sample_modes(ellipse: CovarianceEllipse, angles: Sequence[float], n_chunks: int,
                 center_freq: float = 0.0, chunk_duration: float = 1.0,
                 rng: Optional[np.random.Generator] = None) -> list:
    """Synthetic mode amplitudes whose components have the marginal variance of the ellipse"""
    rng = rng or np.random.default_rng()
    out = []
    for theta in angles:
        sd = math.sqrt(ellipse.marginal_variance(float(theta)))
        r = rng.normal(0.0, sd, n_chunks) + 1j * rng.normal(0.0, sd, n_chunks)
        out.append(TemporalModeSamples(r=r, center_freq=center_freq, chunk_duration=chunk_duration,
                                       theta=float(theta), metadata={"source": "gaussian"}))
    return out
