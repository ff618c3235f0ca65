"""
Simulation configuration and time-series containers
"""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional

import numpy as np

from ..config.constants import MAX_OMEGA_DT, TWO_PI
from ..model.params import ModelParams
from ..utils.exceptions import ConfigurationError, UsageError

INTEGRATORS = ("euler", "exact")


@dataclass(frozen=True)
class DriveTone:
    """Sinusoidal force amplitude * sin(frequency * t) added to the momentum equation"""
    amplitude: float
    frequency: float

    def __post_init__(self):
        if not (math.isfinite(self.amplitude) and math.isfinite(self.frequency)):
            raise ConfigurationError(f"Drive tone must be finite, got {self}")
        if self.frequency <= 0:
            raise ConfigurationError(f"Drive frequency must be positive, got {self.frequency}")

    @classmethod
    def from_hz(cls, amplitude: float, frequency_hz: float) -> "DriveTone":
        return cls(amplitude=amplitude, frequency=TWO_PI * frequency_hz)


@dataclass(frozen=True)
class SimConfig:
    params: ModelParams
    dt: float
    n_samples: int
    seed: int
    drive: Optional[DriveTone] = None
    integrator: str = "euler"
    burn_in: float = 0.0
    theta_offset: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ConfigurationError(f"dt must be positive, got {self.dt}")
        if self.dt * self.params.omega_m > MAX_OMEGA_DT:
            raise ConfigurationError(
                f"Time step too coarse: dt*omega_m = {self.dt * self.params.omega_m:.4f} "
                f"exceeds {MAX_OMEGA_DT}"
            )
        if self.n_samples < 2:
            raise ConfigurationError(f"n_samples must be at least 2, got {self.n_samples}")
        if not 0 <= self.seed < 2 ** 64:
            raise ConfigurationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.integrator not in INTEGRATORS:
            raise ConfigurationError(
                f"Unknown integrator '{self.integrator}'. Expected one of {INTEGRATORS}"
            )
        if self.burn_in < 0:
            raise ConfigurationError(f"burn_in must be non-negative, got {self.burn_in}")

    @property
    def duration(self) -> float:
        return self.n_samples * self.dt

    @property
    def burn_in_samples(self) -> int:
        return int(math.ceil(self.burn_in / self.dt))

    def covers_correlation_times(self, count: float = 10.0) -> bool:
        """True when the record spans `count` mechanical damping times"""
        return self.duration * self.params.gamma_m >= count

    def with_changes(self, **changes: Any) -> "SimConfig":
        return replace(self, **changes)

    def metadata(self) -> Dict[str, Any]:
        meta: Dict[str, Any] = {
            "dt": self.dt,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "integrator": self.integrator,
            "burn_in": self.burn_in,
            "theta_offset": self.theta_offset,
        }
        meta.update(self.params.to_hz_dict())
        if self.drive is not None:
            meta["drive_amplitude"] = self.drive.amplitude
            meta["drive_frequency_hz"] = self.drive.frequency / TWO_PI
        return meta


@dataclass
class TrajectoryBundle:
    """Mechanical state and input noise quadratures on a common time grid"""
    q: np.ndarray
    p: np.ndarray
    x_in: np.ndarray
    y_in: np.ndarray
    x_nu: np.ndarray
    dt: float
    params: ModelParams
    seed: int = 0
    trajectory: int = 0
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        lengths = {len(s) for s in (self.q, self.p, self.x_in, self.y_in, self.x_nu)}
        if len(lengths) != 1:
            raise UsageError(f"Trajectory series have unequal lengths: {sorted(lengths)}")

    def __len__(self) -> int:
        return len(self.q)

    @property
    def time(self) -> np.ndarray:
        return np.arange(len(self.q)) * self.dt


@dataclass
class PhotocurrentRecord:
    i_theta: np.ndarray
    theta: float
    eta_d: float
    dt: float
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.i_theta)

    @property
    def time(self) -> np.ndarray:
        return np.arange(len(self.i_theta)) * self.dt
