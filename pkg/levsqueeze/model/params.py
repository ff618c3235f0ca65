"""
Parameter containers for the dynamical model and the laboratory geometry
"""

import math
from dataclasses import dataclass, asdict, replace
from typing import Any, Dict, Optional

from ..config.constants import EPSILON_0, PRESETS, SPEED_OF_LIGHT, TWO_PI
from ..utils.exceptions import ParameterDomainError, UsageError


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless dynamical model; every rate is angular (rad/s)"""
    omega_m: float
    gamma_m: float
    gamma_qba: float
    eta_d: float
    n_bar: float
    gamma_rp: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in asdict(self).values()):
            raise ParameterDomainError(f"Model parameters must be finite (got {self})")
        checks = (
            (self.omega_m > 0, "omega_m must be positive"),
            (self.gamma_m > 0, "gamma_m must be positive"),
            (self.gamma_qba >= 0, "gamma_qba must be non-negative"),
            (0.0 <= self.eta_d <= 1.0, "eta_d must lie in [0, 1]"),
            (self.n_bar >= 0, "n_bar must be non-negative"),
            (self.gamma_rp >= 0, "gamma_rp must be non-negative"),
        )
        for ok, message in checks:
            if not ok:
                raise ParameterDomainError(f"{message} (got {self})")

    @property
    def gamma_tot(self) -> float:
        return self.gamma_qba + self.gamma_m * (self.n_bar + 0.5)

    @property
    def gamma_meas(self) -> float:
        return self.eta_d * self.gamma_qba

    @property
    def eta_meas(self) -> float:
        return self.gamma_meas / self.gamma_tot

    @property
    def equilibrium_shift(self) -> float:
        """Radiation-pressure displacement q_eq (zero in the shifted frame)"""
        return math.sqrt(2.0 * self.gamma_qba * self.gamma_rp) / self.omega_m

    def with_changes(self, **changes: Any) -> "ModelParams":
        return replace(self, **changes)

    def without_backaction(self) -> "ModelParams":
        """Same oscillator with the light-particle coupling switched off"""
        return replace(self, gamma_qba=0.0, gamma_rp=0.0)

    @classmethod
    def from_hz(cls, omega_m_hz: float, gamma_m_hz: float, gamma_qba_hz: float,
                eta_d: float, n_bar: float, gamma_rp_hz: float = 0.0) -> "ModelParams":
        """Build from rates quoted as Omega/(2 pi)"""
        return cls(
            omega_m=TWO_PI * omega_m_hz,
            gamma_m=TWO_PI * gamma_m_hz,
            gamma_qba=TWO_PI * gamma_qba_hz,
            eta_d=eta_d,
            n_bar=n_bar,
            gamma_rp=TWO_PI * gamma_rp_hz,
        )

    @classmethod
    def from_fit_rates(cls, omega_m: float, gamma_m: float, gamma_tot: float,
                       gamma_meas: float, eta_d: float, gamma_rp: float = 0.0) -> "ModelParams":
        """Choose (gamma_qba, n_bar) consistent with the identifiable rate pair"""
        if not 0.0 < eta_d <= 1.0:
            raise ParameterDomainError(f"eta_d must lie in (0, 1], got {eta_d}")
        gamma_qba = gamma_meas / eta_d
        n_bar = (gamma_tot - gamma_qba) / gamma_m - 0.5
        if n_bar < 0:
            raise ParameterDomainError(
                f"Rates inconsistent with eta_d={eta_d}: gamma_qba={gamma_qba:.4g} "
                f"exceeds gamma_tot - gamma_m/2"
            )
        return cls(omega_m=omega_m, gamma_m=gamma_m, gamma_qba=gamma_qba,
                   eta_d=eta_d, n_bar=n_bar, gamma_rp=gamma_rp)

    @classmethod
    def preset(cls, name: str, eta_d: Optional[float] = None) -> "ModelParams":
        """Model of a named preset, e.g. 'paper-2021'"""
        if name not in PRESETS:
            raise UsageError(f"Unknown preset '{name}'. Available: {', '.join(PRESETS)}")
        p = PRESETS[name]
        return cls.from_fit_rates(
            omega_m=TWO_PI * p["omega_m_hz"],
            gamma_m=TWO_PI * p["gamma_m_hz"],
            gamma_tot=TWO_PI * p["gamma_tot_hz"],
            gamma_meas=TWO_PI * p["gamma_meas_hz"],
            eta_d=p["eta_d"] if eta_d is None else eta_d,
            gamma_rp=TWO_PI * p["gamma_rp_hz"],
        )

    def to_hz_dict(self) -> Dict[str, float]:
        return {
            "omega_m_hz": self.omega_m / TWO_PI,
            "gamma_m_hz": self.gamma_m / TWO_PI,
            "gamma_qba_hz": self.gamma_qba / TWO_PI,
            "eta_d": self.eta_d,
            "n_bar": self.n_bar,
            "gamma_rp_hz": self.gamma_rp / TWO_PI,
            "gamma_tot_hz": self.gamma_tot / TWO_PI,
            "gamma_meas_hz": self.gamma_meas / TWO_PI,
            "eta_meas": self.eta_meas,
        }


@dataclass(frozen=True)
class PhysicalParams:
    """Laboratory quantities of the trapped dipole (SI units)"""
    mass: float
    polarizability: float
    field_amplitude_E0: float
    waist_x: float
    waist_y: float
    rayleigh_range_zR: float
    wavenumber_k0: float
    scattered_power_P: float
    geometric_factor_A: float

    def __post_init__(self):
        positive = ("mass", "polarizability", "field_amplitude_E0", "waist_x", "waist_y",
                    "rayleigh_range_zR", "wavenumber_k0", "scattered_power_P")
        for name in positive:
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterDomainError(f"{name} must be strictly positive, got {value}")
        if not math.isfinite(self.geometric_factor_A):
            raise ParameterDomainError("geometric_factor_A must be finite")

    @property
    def wavelength(self) -> float:
        return TWO_PI / self.wavenumber_k0

    @property
    def optical_frequency(self) -> float:
        """Angular frequency omega_0 = c k_0"""
        return SPEED_OF_LIGHT * self.wavenumber_k0

    def with_changes(self, **changes: Any) -> "PhysicalParams":
        return replace(self, **changes)


def geometric_factor(wavenumber_k0: float, rayleigh_range_zR: float) -> float:
    """A = 1 - 1/(k_0 z_R)"""
    return 1.0 - 1.0 / (wavenumber_k0 * rayleigh_range_zR)


def dipole_scattered_power(polarizability: float, field_amplitude_E0: float,
                           wavenumber_k0: float) -> float:
    """P = omega_0^4 alpha^2 E_0^2 / (12 pi eps_0 c^3)"""
    omega_0 = SPEED_OF_LIGHT * wavenumber_k0
    return (omega_0 ** 4 * polarizability ** 2 * field_amplitude_E0 ** 2
            / (12.0 * math.pi * EPSILON_0 * SPEED_OF_LIGHT ** 3))


def derived_physical(mass: float, polarizability: float, field_amplitude_E0: float,
                     waist_x: float, waist_y: float, rayleigh_range_zR: float,
                     wavelength: float) -> PhysicalParams:
    """PhysicalParams with A and P derived from the focal geometry and the dipole"""
    if wavelength <= 0:
        raise ParameterDomainError(f"wavelength must be positive, got {wavelength}")
    k0 = TWO_PI / wavelength
    return PhysicalParams(
        mass=mass,
        polarizability=polarizability,
        field_amplitude_E0=field_amplitude_E0,
        waist_x=waist_x,
        waist_y=waist_y,
        rayleigh_range_zR=rayleigh_range_zR,
        wavenumber_k0=k0,
        scattered_power_P=dipole_scattered_power(polarizability, field_amplitude_E0, k0),
        geometric_factor_A=geometric_factor(k0, rayleigh_range_zR),
    )


def silica_nanoparticle(diameter: float = 100e-9, wavelength: float = 1550e-9,
                        trap_frequency_z_hz: float = 73.25e3, numerical_aperture: float = 0.75,
                        density: float = 1850.0, permittivity: float = 2.07) -> PhysicalParams:
    """
    Representative tweezer geometry.

    E_0 is not quoted experimentally; it is solved from the requested
    longitudinal trap frequency, Omega_z^2 = alpha E_0^2 / (2 m z_R^2).
    """
    radius = diameter / 2.0
    mass = density * 4.0 / 3.0 * math.pi * radius ** 3
    alpha = 4.0 * math.pi * EPSILON_0 * radius ** 3 * (permittivity - 1.0) / (permittivity + 2.0)
    waist = wavelength / (math.pi * numerical_aperture)
    z_r = math.pi * waist ** 2 / wavelength
    e0 = TWO_PI * trap_frequency_z_hz * z_r * math.sqrt(2.0 * mass / alpha)
    return derived_physical(
        mass=mass,
        polarizability=alpha,
        field_amplitude_E0=e0,
        waist_x=waist * 1.1,
        waist_y=waist,
        rayleigh_range_zR=z_r,
        wavelength=wavelength,
    )
