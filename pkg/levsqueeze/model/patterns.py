"""
Angular photon densities of the interacting modes and their solid-angle norm
"""

import math
from typing import Tuple, Union

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import trapezoid

from ..config.constants import PATTERN_MIN_RESOLUTION
from ..utils.exceptions import ParameterDomainError, UsageError

PATTERN_AXES = ("x", "y", "z", "dipole")
QUADRATURE_RULES = ("gauss", "trapezoid")

ArrayLike = Union[float, np.ndarray]


def radiation_pattern(axis: str, theta: ArrayLike, phi: ArrayLike,
                      beta_sq: float = 1.0, A: float = 0.0) -> np.ndarray:
    """
    Photon density per steradian along (theta, phi).

    The dipole is polarised along x, so every pattern carries the factor
    (1 - cos^2 phi sin^2 theta).
    """
    if axis not in PATTERN_AXES:
        raise UsageError(f"Unknown pattern axis '{axis}'. Expected one of {PATTERN_AXES}")
    if beta_sq < 0:
        raise ParameterDomainError(f"beta_sq must be non-negative, got {beta_sq}")

    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    sin_theta = np.sin(theta)
    kx = np.cos(phi) * sin_theta
    polarization = 1.0 - kx ** 2

    if axis == "x":
        shape = 15.0 / (8.0 * math.pi) * kx ** 2
    elif axis == "y":
        shape = 15.0 / (16.0 * math.pi) * (np.sin(phi) * sin_theta) ** 2
    elif axis == "z":
        shape = 15.0 / (8.0 * math.pi * (2.0 + 5.0 * A ** 2)) * (np.cos(theta) - A) ** 2
    else:
        shape = 3.0 / (8.0 * math.pi)

    # rounding can leave 1 - kx^2 a hair below zero at the poles of kx
    return beta_sq * np.clip(polarization, 0.0, None) * shape


def pattern_grid(axis: str, n_theta: int = 91, n_phi: int = 181, beta_sq: float = 1.0,
                 A: float = 0.0) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Regular (theta, phi) tabulation; phi includes both 0 and 2 pi"""
    theta = np.linspace(0.0, math.pi, n_theta)
    phi = np.linspace(0.0, 2.0 * math.pi, n_phi)
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    return theta, phi, radiation_pattern(axis, th, ph, beta_sq, A)


def pattern_solid_angle_integral(axis: str, beta_sq: float = 1.0, A: float = 0.0,
                                 quadrature_resolution: int = 512, rule: str = "gauss") -> float:
    """
    Integral of the pattern over the full sphere.

    rule="gauss" uses Gauss-Legendre nodes in cos(theta) with a periodic
    trapezoid in phi, which is exact for these trigonometric polynomials.
    rule="trapezoid" is the product trapezoid on a regular grid including
    both end points (second-order accurate).
    """
    if quadrature_resolution < PATTERN_MIN_RESOLUTION:
        raise ParameterDomainError(
            f"quadrature_resolution must be at least {PATTERN_MIN_RESOLUTION}, "
            f"got {quadrature_resolution}"
        )
    if rule not in QUADRATURE_RULES:
        raise UsageError(f"Unknown quadrature rule '{rule}'. Expected one of {QUADRATURE_RULES}")
    n = quadrature_resolution

    if rule == "gauss":
        u, weights = leggauss(n)
        phi = np.arange(n) * (2.0 * math.pi / n)
        th, ph = np.meshgrid(np.arccos(u), phi, indexing="ij")
        values = radiation_pattern(axis, th, ph, beta_sq, A)
        return float(weights @ values.sum(axis=1) * (2.0 * math.pi / n))

    theta = np.linspace(0.0, math.pi, n)
    phi = np.linspace(0.0, 2.0 * math.pi, n)
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    integrand = radiation_pattern(axis, th, ph, beta_sq, A) * np.sin(th)
    return float(trapezoid(trapezoid(integrand, phi, axis=1), theta))
