"""
Input-output relations and homodyne photocurrent synthesis
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

import numpy as np
from scipy.signal import get_window

from ..model.params import ModelParams
from ..utils.logging import sim_logger
from ..utils.exceptions import ParameterDomainError, UsageError
from .config import PhotocurrentRecord, SimConfig, TrajectoryBundle
from .simulate import VACUUM_PSD, simulate
from .streams import white_noise


@dataclass
class OutputQuadratures:
    x_out: np.ndarray
    y_out: np.ndarray
    dt: float

    def rotated(self, theta: float) -> np.ndarray:
        """X_out^theta = cos(theta) X_out + sin(theta) Y_out"""
        return math.cos(theta) * self.x_out + math.sin(theta) * self.y_out


def output_quadratures(bundle: TrajectoryBundle,
                       params: Optional[ModelParams] = None) -> OutputQuadratures:
    """x_out = x_in (+ sqrt(2 Gamma_R)), y_out = y_in + sqrt(4 Gamma_qba) q"""
    params = params or bundle.params
    if params != bundle.params:
        raise UsageError("Bundle was simulated with different model parameters")
    x_out = bundle.x_in
    if params.gamma_rp > 0:
        x_out = x_out + math.sqrt(2.0 * params.gamma_rp)
    y_out = bundle.y_in + math.sqrt(4.0 * params.gamma_qba) * bundle.q
    return OutputQuadratures(x_out=x_out, y_out=y_out, dt=bundle.dt)


def photocurrent(quadratures: OutputQuadratures, theta: float, eta_d: float,
                 x_nu: np.ndarray, theta_offset: float = 0.0) -> PhotocurrentRecord:
    """
    i_theta = sqrt(eta_d) X_out^theta + sqrt(1 - eta_d) X_nu

    theta_offset is a constant shift of the effective homodyne angle, modelling
    a weak back-reflection of the trapping beam.
    """
    if not 0.0 <= eta_d <= 1.0:
        raise ParameterDomainError(f"eta_d must lie in [0, 1], got {eta_d}")
    if len(x_nu) != len(quadratures.x_out):
        raise UsageError(
            f"Loss noise length {len(x_nu)} does not match quadratures {len(quadratures.x_out)}"
        )
    effective = theta + theta_offset
    current = math.sqrt(eta_d) * quadratures.rotated(effective) + math.sqrt(1.0 - eta_d) * x_nu
    return PhotocurrentRecord(
        i_theta=current, theta=theta, eta_d=eta_d, dt=quadratures.dt,
        metadata={"theta": theta, "theta_offset": theta_offset, "eta_d": eta_d},
    )


def homodyne_record(bundle: TrajectoryBundle, theta: float, theta_offset: float = 0.0,
                    eta_d: Optional[float] = None) -> PhotocurrentRecord:
    """Photocurrent of a simulated bundle at the model's detection efficiency"""
    eta = bundle.params.eta_d if eta_d is None else eta_d
    record = photocurrent(output_quadratures(bundle), theta, eta, bundle.x_nu, theta_offset)
    record.metadata = {**bundle.metadata, **record.metadata}
    return record


def with_classical_excess(record: PhotocurrentRecord, excess: float, seed: int, trajectory: int,
                          unbalance_voltage: Optional[float] = None) -> PhotocurrentRecord:
    """
    Record with white local-oscillator excess noise added, `excess` in
    shot-noise units (the calibrated background minus 1).
    """
    if excess < 0:
        raise ParameterDomainError(f"Classical excess must be non-negative to simulate, got {excess}")
    metadata = {**record.metadata, "lo_excess": excess, "unbalance_voltage": unbalance_voltage}
    if excess == 0:
        return replace(record, metadata=metadata)
    noise = white_noise(seed, trajectory, "lo_excess", len(record), record.dt, excess * VACUUM_PSD)
    return replace(record, i_theta=record.i_theta + noise, metadata=metadata)


def shot_noise_record(config: SimConfig, theta: float = math.pi / 2,
                      trajectory: int = 0) -> PhotocurrentRecord:
    """Photocurrent of the same configuration with the light-particle coupling switched off"""
    reference = config.with_changes(params=config.params.without_backaction(), drive=None)
    sim_logger.debug(f"Simulating shot-noise reference (seed {config.seed})")
    return homodyne_record(simulate(reference, trajectory), theta, config.theta_offset)


def decorrelated(bundle: TrajectoryBundle) -> TrajectoryBundle:
    """
    Copy whose x_in is redrawn independently of the backaction force.

    The mechanical motion keeps the original drive, so the output amplitude
    quadrature no longer correlates with it.
    """
    redraw = white_noise(bundle.seed, bundle.trajectory, "x_in_redraw", len(bundle),
                         bundle.dt, VACUUM_PSD)
    return replace(bundle, x_in=redraw, metadata={**bundle.metadata, "decorrelated": True})


def tone_amplitude(values: np.ndarray, dt: float, frequency: float) -> float:
    """Lock-in amplitude of a sinusoid at angular frequency `frequency` (Hann-weighted)"""
    values = np.asarray(values, dtype=float)
    window = get_window("hann", len(values))
    t = np.arange(len(values)) * dt
    projection = np.sum(window * values * np.exp(-1j * frequency * t))
    return float(2.0 * np.abs(projection) / np.sum(window))


def drive_tone_amplitude(record: Union[PhotocurrentRecord, TrajectoryBundle],
                         frequency: float) -> float:
    """Tone amplitude in a photocurrent record, or in q of a trajectory bundle"""
    if isinstance(record, PhotocurrentRecord):
        return tone_amplitude(record.i_theta, record.dt, frequency)
    return tone_amplitude(record.q, record.dt, frequency)
