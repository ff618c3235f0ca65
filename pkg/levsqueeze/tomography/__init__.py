"""
Temporal-mode tomography of the output light
"""

from .modes import TemporalModeSamples, extract_modes, mode_filter
from .sinogram import Sinogram, build_sinogram, column_normality, fit_column_gaussian, symmetric_edges
from .radon import (
    WignerGrid,
    angle_projector,
    fbp_reconstruct,
    forward_project,
    grid_axis,
    sart_reconstruct,
)
from .covariance import (
    CovarianceEllipse,
    covariance_from_cuts,
    covariance_from_sinogram,
    cut_variances,
    gaussian_sinogram,
    gaussian_wigner,
    grid_covariance,
    harmonic_fit,
    sample_modes,
    theoretical_covariance,
)

__all__ = [
    "TemporalModeSamples", "extract_modes", "mode_filter", "Sinogram", "build_sinogram",
    "column_normality", "fit_column_gaussian", "symmetric_edges", "WignerGrid", "angle_projector",
    "fbp_reconstruct", "forward_project", "grid_axis", "sart_reconstruct", "CovarianceEllipse",
    "covariance_from_cuts", "covariance_from_sinogram", "cut_variances", "gaussian_sinogram",
    "gaussian_wigner", "grid_covariance", "harmonic_fit", "sample_modes", "theoretical_covariance",
]
