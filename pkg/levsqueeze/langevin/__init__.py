"""
Time-domain simulation of the continuously measured oscillator
"""

from .config import DriveTone, PhotocurrentRecord, SimConfig, TrajectoryBundle
from .detection import (
    OutputQuadratures,
    decorrelated,
    drive_tone_amplitude,
    homodyne_record,
    output_quadratures,
    photocurrent,
    shot_noise_record,
    tone_amplitude,
    with_classical_excess,
)
from .integrators import propagate, propagator
from .simulate import simulate, simulate_ensemble, steady_state_draw

__all__ = [
    "DriveTone", "PhotocurrentRecord", "SimConfig", "TrajectoryBundle",
    "OutputQuadratures", "decorrelated", "drive_tone_amplitude", "homodyne_record",
    "output_quadratures", "photocurrent", "shot_noise_record", "tone_amplitude", "with_classical_excess",
    "propagate", "propagator", "simulate", "simulate_ensemble", "steady_state_draw",
]
