"""
Closed-form model of the continuously measured levitated oscillator
"""

from .params import (
    ModelParams,
    PhysicalParams,
    derived_physical,
    dipole_scattered_power,
    geometric_factor,
    silica_nanoparticle,
)
from .response import (
    MeasurementRates,
    SqueezingBand,
    SqueezingOptimum,
    displacement_psd,
    homodyne_psd,
    homodyne_psd_from_rates,
    measurement_rates,
    optimal_angle,
    optimal_squeezing,
    position_variance,
    predicted_spectra,
    squeezing_bandwidth,
    susceptibility,
)
from .physics import AxisLimits, heisenberg_limit, heisenberg_product, imprecision_backaction, trap_frequencies
from .patterns import PATTERN_AXES, pattern_grid, pattern_solid_angle_integral, radiation_pattern


def model_from_fit_rates(omega_m: float, gamma_m: float, gamma_tot: float, gamma_meas: float,
                         eta_d: float, gamma_rp: float = 0.0) -> ModelParams:
    return ModelParams.from_fit_rates(omega_m, gamma_m, gamma_tot, gamma_meas, eta_d, gamma_rp)


__all__ = [
    "ModelParams", "PhysicalParams", "derived_physical", "dipole_scattered_power",
    "geometric_factor", "silica_nanoparticle", "model_from_fit_rates",
    "MeasurementRates", "SqueezingBand", "SqueezingOptimum", "displacement_psd",
    "homodyne_psd", "homodyne_psd_from_rates", "measurement_rates", "optimal_angle",
    "optimal_squeezing", "position_variance", "predicted_spectra", "squeezing_bandwidth",
    "susceptibility", "AxisLimits", "heisenberg_limit", "heisenberg_product",
    "imprecision_backaction", "trap_frequencies", "PATTERN_AXES", "pattern_grid",
    "pattern_solid_angle_integral", "radiation_pattern",
]
