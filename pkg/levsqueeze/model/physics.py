"""
Trap frequencies and measurement-disturbance limits of the trapped dipole
"""

import math
from dataclasses import dataclass
from typing import Dict

from ..config.constants import HBAR, HEISENBERG_PRODUCT
from ..utils.exceptions import ParameterDomainError
from .params import PhysicalParams

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class AxisLimits:
    s_imp: float
    s_ff: float

    @property
    def product(self) -> float:
        return self.s_imp * self.s_ff


def trap_frequencies(phys: PhysicalParams) -> Dict[str, float]:
    """Angular trap frequencies of the three axes (rad/s)"""
    stiffness = phys.polarizability * phys.field_amplitude_E0 ** 2
    denominators = {
        "x": phys.mass * phys.waist_x ** 2,
        "y": phys.mass * phys.waist_y ** 2,
        "z": 2.0 * phys.mass * phys.rayleigh_range_zR ** 2,
    }
    for axis, value in denominators.items():
        if not value > 0:
            raise ParameterDomainError(f"Non-positive denominator for axis {axis}: {value}")
    return {f"omega_{axis}": math.sqrt(stiffness / value) for axis, value in denominators.items()}


def _axis_weights(geometric_factor_A: float) -> Dict[str, tuple]:
    # (imprecision weight, backaction weight); the z imprecision weight is
    # the reciprocal of its backaction weight so that S_imp * S_FF is axis-independent
    z_weight = 2.0 + 5.0 * geometric_factor_A ** 2
    return {
        "x": (1.0, 1.0),
        "y": (0.5, 2.0),
        "z": (1.0 / z_weight, z_weight),
    }


def imprecision_backaction(phys: PhysicalParams) -> Dict[str, AxisLimits]:
    """
    Imprecision and photon-recoil PSDs for every axis.

    S_imp = 5/(8 pi) (1/k0^2) (hbar w0 / P) * w_imp
    S_FF  = (1/5) (hbar^2 k0^2 / 2 pi) (P / hbar w0) * w_ff
    with w_ff = (1, 2, 2 + 5A^2).
    """
    photon_energy = HBAR * phys.optical_frequency
    k0_sq = phys.wavenumber_k0 ** 2
    imp_prefactor = 5.0 / (8.0 * math.pi) / k0_sq * photon_energy / phys.scattered_power_P
    ff_prefactor = HBAR ** 2 * k0_sq / (2.0 * math.pi) / 5.0 * phys.scattered_power_P / photon_energy

    return {
        axis: AxisLimits(s_imp=imp_prefactor * w_imp, s_ff=ff_prefactor * w_ff)
        for axis, (w_imp, w_ff) in _axis_weights(phys.geometric_factor_A).items()
    }


def heisenberg_product(phys: PhysicalParams) -> Dict[str, float]:
    """S_imp * S_FF per axis; hbar^2/(16 pi^2) for every geometry"""
    return {axis: limits.product for axis, limits in imprecision_backaction(phys).items()}


def heisenberg_limit() -> float:
    return HEISENBERG_PRODUCT
