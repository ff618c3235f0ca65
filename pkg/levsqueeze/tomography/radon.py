"""
Radon geometry, forward projection and inverse reconstructions

Convention: the projection at angle theta is the marginal of
s = X cos(theta) - Y sin(theta). Under this convention the cut relation
<XY> = (V(0) + V(pi/2))/2 - V(pi/4) holds exactly.
"""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np
from scipy import sparse
from scipy.signal import fftconvolve

from ..config.constants import TOMOGRAPHY_DEFAULTS
from ..utils.logging import tomo_logger
from ..utils.exceptions import ReconstructionError, UsageError
from .sinogram import Sinogram

# relative residual change treated as a plateau rather than growth
PLATEAU_TOLERANCE = 1e-6


@dataclass
class WignerGrid:
    """Quasiprobability density; values[i, j] is at (axis[i], axis[j]) = (X, Y)"""
    axis: np.ndarray
    values: np.ndarray
    residuals: List[float] = field(default_factory=list)
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def pixel(self) -> float:
        return float(self.axis[1] - self.axis[0])

    @property
    def extent(self) -> float:
        return float(self.axis[-1] + self.pixel / 2.0)

    def mass(self) -> float:
        return float(self.values.sum() * self.pixel ** 2)

    def mesh(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.axis, self.axis, indexing="ij")


def grid_axis(grid_size: int, extent: float) -> np.ndarray:
    """Pixel centres of a square grid covering [-extent, extent]"""
    pixel = 2.0 * extent / grid_size
    return -extent + pixel * (np.arange(grid_size) + 0.5)


def projection_coordinate(x: np.ndarray, y: np.ndarray, theta: float) -> np.ndarray:
    return x * math.cos(theta) - y * math.sin(theta)


def angle_projector(theta: float, axis: np.ndarray, bin_edges: np.ndarray) -> sparse.csr_matrix:
    """
    Sparse map from grid density to the binned marginal density at one angle.

    Pixel-driven: each pixel deposits its mass onto the two nearest bin
    centres by linear interpolation.
    """
    n_bins = len(bin_edges) - 1
    width = bin_edges[1] - bin_edges[0]
    pixel = axis[1] - axis[0]
    x, y = np.meshgrid(axis, axis, indexing="ij")
    s = projection_coordinate(x, y, theta).ravel()

    position = (s - (bin_edges[0] + width / 2.0)) / width
    lower = np.floor(position).astype(int)
    frac = position - lower
    pixels = np.arange(s.size)

    rows, cols, weights = [], [], []
    for offset, weight in ((0, 1.0 - frac), (1, frac)):
        idx = lower + offset
        ok = (idx >= 0) & (idx < n_bins) & (weight > 0)
        rows.append(idx[ok])
        cols.append(pixels[ok])
        weights.append(weight[ok] * pixel ** 2 / width)
    return sparse.csr_matrix(
        (np.concatenate(weights), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n_bins, s.size),
    )


def system_matrix(angles: np.ndarray, axis: np.ndarray, bin_edges: np.ndarray) -> List[sparse.csr_matrix]:
    return [angle_projector(float(theta), axis, bin_edges) for theta in angles]


def forward_project(grid: WignerGrid, angles: np.ndarray, bin_edges: np.ndarray) -> Sinogram:
    """Radon transform of a grid into a column-normalised sinogram"""
    angles = np.asarray(angles, dtype=float)
    width = bin_edges[1] - bin_edges[0]
    flat = grid.values.ravel()
    density = np.vstack([proj @ flat for proj in system_matrix(angles, grid.axis, bin_edges)])
    totals = density.sum(axis=1, keepdims=True) * width
    if np.any(totals <= 0):
        raise UsageError("Grid has no mass inside the bin range at some angle")
    density = density / totals
    sinogram = Sinogram(angles=angles, bin_edges=bin_edges, density=density,
                        variances=np.zeros(len(angles)), sample_counts=np.zeros(len(angles), dtype=int),
                        metadata={"source": "forward_project"})
    sinogram.variances = sinogram.column_moments()[1]
    return sinogram


def _safe_inverse(values: np.ndarray) -> np.ndarray:
    out = np.zeros_like(values)
    nonzero = values > 0
    out[nonzero] = 1.0 / values[nonzero]
    return out


def _renormalized(values: np.ndarray, pixel: float) -> np.ndarray:
    mass = values.sum() * pixel ** 2
    if not mass > 0:
        raise ReconstructionError(f"Reconstruction has non-positive mass ({mass})")
    return values / mass


def sart_reconstruct(sinogram: Sinogram, grid_size: int = TOMOGRAPHY_DEFAULTS["grid_size"],
                     iterations: int = TOMOGRAPHY_DEFAULTS["iterations"],
                     relaxation: float = TOMOGRAPHY_DEFAULTS["relaxation"]) -> WignerGrid:
    """
    Simultaneous algebraic reconstruction, one angle at a time per sweep:

        W <- W + lambda * P_a^T [(p_a - P_a W) / rowsum_a] / colsum_a
    """
    if not 0.0 < relaxation <= 2.0:
        raise UsageError(f"relaxation must lie in (0, 2], got {relaxation}")
    if iterations < 1:
        raise UsageError(f"iterations must be positive, got {iterations}")
    axis = grid_axis(grid_size, sinogram.half_range)
    projectors = system_matrix(sinogram.angles, axis, sinogram.bin_edges)
    row_inverse = [_safe_inverse(np.asarray(p.sum(axis=1)).ravel()) for p in projectors]
    col_inverse = [_safe_inverse(np.asarray(p.sum(axis=0)).ravel()) for p in projectors]

    w = np.zeros(grid_size * grid_size)
    residuals: List[float] = []
    increases = 0
    window = TOMOGRAPHY_DEFAULTS["divergence_window"]
    for sweep in range(iterations):
        for proj, data, r_inv, c_inv in zip(projectors, sinogram.density, row_inverse, col_inverse):
            correction = (data - proj @ w) * r_inv
            w += relaxation * (proj.T @ correction) * c_inv
        residual = math.sqrt(sum(float(np.sum((data - proj @ w) ** 2))
                                 for proj, data in zip(projectors, sinogram.density)))
        if not math.isfinite(residual):
            raise ReconstructionError("SART produced non-finite values", residuals + [residual])
        increases = increases + 1 if residuals and residual > residuals[-1] * (1.0 + PLATEAU_TOLERANCE) else 0
        residuals.append(residual)
        tomo_logger.debug(f"SART sweep {sweep + 1}: residual {residual:.6g}")
        if increases >= window:
            raise ReconstructionError(
                f"SART residual grew for {window} consecutive sweeps", residuals
            )

    values = _renormalized(w.reshape(grid_size, grid_size), axis[1] - axis[0])
    tomo_logger.info(f"SART: {iterations} sweeps on {grid_size}^2 grid, final residual {residuals[-1]:.4g}")
    return WignerGrid(axis=axis, values=values, residuals=residuals,
                      metadata={"method": "sart", "iterations": iterations, "relaxation": relaxation})


def angle_weights(angles: np.ndarray) -> np.ndarray:
    """Quadrature weights over [0, pi]: trapezoid when both ends are sampled"""
    angles = np.asarray(angles, dtype=float)
    n = len(angles)
    if n > 1 and math.isclose(angles[-1] - angles[0], math.pi, rel_tol=1e-9):
        weights = np.empty(n)
        weights[1:-1] = (angles[2:] - angles[:-2]) / 2.0
        weights[0] = (angles[1] - angles[0]) / 2.0
        weights[-1] = (angles[-1] - angles[-2]) / 2.0
        return weights
    return np.full(n, math.pi / n)


def ramp_kernel(n_bins: int, width: float) -> np.ndarray:
    """Band-limited ramp filter sampled in s on offsets -(n_bins-1)..(n_bins-1)"""
    offsets = np.arange(-(n_bins - 1), n_bins)
    kernel = np.zeros(len(offsets))
    kernel[offsets == 0] = 1.0 / (4.0 * width ** 2)
    odd = offsets % 2 == 1
    kernel[odd] = -1.0 / (np.pi ** 2 * offsets[odd] ** 2 * width ** 2)
    return kernel


def fbp_reconstruct(sinogram: Sinogram, grid_size: int = TOMOGRAPHY_DEFAULTS["grid_size"]) -> WignerGrid:
    """Filtered backprojection with the spatial-domain ramp kernel"""
    width = sinogram.bin_width
    n_bins = len(sinogram.bin_centers)
    kernel = ramp_kernel(n_bins, width)

    axis = grid_axis(grid_size, sinogram.half_range)
    x, y = np.meshgrid(axis, axis, indexing="ij")
    values = np.zeros_like(x)
    for theta, column, weight in zip(sinogram.angles, sinogram.density, angle_weights(sinogram.angles)):
        filtered = width * fftconvolve(column, kernel, mode="full")[n_bins - 1:2 * n_bins - 1]
        s = projection_coordinate(x, y, float(theta))
        values += weight * np.interp(s, sinogram.bin_centers, filtered, left=0.0, right=0.0)

    values = _renormalized(values, axis[1] - axis[0])
    tomo_logger.info(f"FBP on {grid_size}^2 grid from {len(sinogram.angles)} angles")
    return WignerGrid(axis=axis, values=values, metadata={"method": "fbp"})
