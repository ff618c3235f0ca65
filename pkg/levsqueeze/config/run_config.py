"""
Run configuration: INI files, presets and command-line overrides

Frequencies and rates are given in Hz (keys ending in _hz) and converted
with an explicit 2 pi. Precedence: defaults < preset < file < overrides.
"""

import configparser
import hashlib
import json
import math
import re
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

from .constants import (
    FIT_DEFAULTS,
    PRESETS,
    SHOT_NOISE_BAND_HZ,
    TOMOGRAPHY_DEFAULTS,
    TWO_PI,
    WELCH_DEFAULTS,
)
from .settings import settings
from ..model.params import ModelParams, PhysicalParams, derived_physical, silica_nanoparticle
from ..utils.exceptions import ConfigurationError, UsageError

MODES = ("simulate", "fit", "tomography", "patterns", "pipeline")
DEFAULT_ANGLES = "0, pi/8, pi/4, 3pi/8, pi/2, 3pi/4, 0.9pi"
_ANGLE_TOKEN = re.compile(r"^([0-9.eE+-]*)\*?pi(?:/([0-9.]+))?$")


def parse_angles(text: str) -> Tuple[float, ...]:
    """
    Comma-separated angles in rad; tokens may be multiples of pi ("3pi/8",
    "0.9pi") and "uniform:N" expands to N angles spanning [0, pi].
    """
    text = text.strip()
    if text.startswith("uniform:"):
        try:
            n = int(text.split(":", 1)[1])
        except ValueError:
            raise ConfigurationError(f"Bad uniform angle grid '{text}'")
        if n < 2:
            raise ConfigurationError("A uniform angle grid needs at least two angles")
        return tuple(math.pi * k / (n - 1) for k in range(n))

    angles = []
    for token in (t.strip().replace(" ", "") for t in text.split(",") if t.strip()):
        match = _ANGLE_TOKEN.match(token)
        try:
            if match:
                coefficient = float(match.group(1)) if match.group(1) not in ("", "+", "-") else \
                    (-1.0 if match.group(1) == "-" else 1.0)
                divisor = float(match.group(2)) if match.group(2) else 1.0
                angles.append(coefficient * math.pi / divisor)
            else:
                angles.append(float(token))
        except ValueError:
            raise ConfigurationError(f"Cannot parse angle '{token}'")
    if not angles:
        raise ConfigurationError("Empty angle list")
    for angle in angles:
        if not -1e-12 <= angle <= math.pi + 1e-12:
            raise ConfigurationError(f"Angle {angle} outside [0, pi]")
    return tuple(angles)


@dataclass(frozen=True)
class SimulationSection:
    dt: float
    n_samples: int
    integrator: str = "euler"
    burn_in: float = 0.0
    theta_offset: float = 0.0
    drive_amplitude: float = 0.0
    drive_frequency_hz: float = 90.0e3


@dataclass(frozen=True)
class SpectralSection:
    resolution_hz: float = WELCH_DEFAULTS["resolution_hz"]
    overlap: float = WELCH_DEFAULTS["overlap"]
    window: str = WELCH_DEFAULTS["window"]
    shot_band_hz: Tuple[float, float] = SHOT_NOISE_BAND_HZ
    fit_half_band_hz: float = FIT_DEFAULTS["half_band_hz"]
    max_nfev: int = FIT_DEFAULTS["max_nfev"]


@dataclass(frozen=True)
class CalibrationSection:
    c0: float = 1.0
    c1: float = 0.0
    c2: float = 0.0
    v_off: float = 0.0
    v_amp: float = 1.0
    unbalance_voltage: float = 0.0
    unbalance_min: Optional[float] = None
    unbalance_max: Optional[float] = None
    parabola_file: Optional[str] = None
    angle_sweep_file: Optional[str] = None


@dataclass(frozen=True)
class TomographySection:
    mode_frequencies_hz: Tuple[float, ...] = PRESETS["paper-2021"]["mode_frequencies_hz"]
    chunk_duration: float = TOMOGRAPHY_DEFAULTS["chunk_duration"]
    n_chunks: int = 1000
    bin_count: int = TOMOGRAPHY_DEFAULTS["bin_count"]
    bin_range: Optional[float] = None
    grid_size: int = TOMOGRAPHY_DEFAULTS["grid_size"]
    iterations: int = TOMOGRAPHY_DEFAULTS["iterations"]
    relaxation: float = TOMOGRAPHY_DEFAULTS["relaxation"]
    angles: str = "uniform:19"


@dataclass(frozen=True)
class PatternSection:
    n_theta: int = 91
    n_phi: int = 181
    beta_sq: float = 1.0
    geometric_factor_A: Optional[float] = None
    quadrature_resolution: int = 512


@dataclass(frozen=True)
class RunConfig:
    params: ModelParams
    simulation: SimulationSection
    spectral: SpectralSection
    tomography: TomographySection
    patterns: PatternSection
    physical: PhysicalParams
    calibration: Optional[CalibrationSection] = None
    angles: Tuple[float, ...] = parse_angles(DEFAULT_ANGLES)
    seed: int = 0
    output_dir: Path = Path("runs")
    fmt: str = "binary"
    preset: Optional[str] = None
    source: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Resolved configuration; output location and source file are not part of it"""
        out = {
            "model": self.params.to_hz_dict(),
            "simulation": asdict(self.simulation),
            "spectral": asdict(self.spectral),
            "tomography": asdict(self.tomography),
            "patterns": asdict(self.patterns),
            "physical": asdict(self.physical),
            "calibration": asdict(self.calibration) if self.calibration else None,
            "angles": list(self.angles),
            "seed": self.seed,
            "format": self.fmt,
        }
        return out

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.to_dict(), sort_keys=True, default=str)
        return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()

    @property
    def tomography_angles(self) -> Tuple[float, ...]:
        return parse_angles(self.tomography.angles)

    def with_changes(self, **changes: Any) -> "RunConfig":
        return replace(self, **changes)


def default_dt(params: ModelParams, omega_dt: float = 0.02) -> float:
    return omega_dt / params.omega_m


def _section(parser: configparser.ConfigParser, name: str) -> Mapping[str, str]:
    return parser[name] if parser.has_section(name) else {}


def _float(values: Mapping[str, str], key: str, default: Optional[float]) -> Optional[float]:
    if key not in values:
        return default
    try:
        return float(values[key])
    except ValueError:
        raise ConfigurationError(f"'{key}' must be a number, got '{values[key]}'")


def _int(values: Mapping[str, str], key: str, default: int) -> int:
    if key not in values:
        return default
    try:
        return int(float(values[key]))
    except ValueError:
        raise ConfigurationError(f"'{key}' must be an integer, got '{values[key]}'")


def _relative_to(config_path: Optional[Path], value: Optional[str]) -> Optional[str]:
    """File named in an INI section, resolved against the directory of that INI file"""
    if not value:
        return None
    target = Path(value)
    if not target.is_absolute() and config_path is not None:
        target = config_path.parent / target
    return str(target)


def _model_from_section(values: Mapping[str, str], base: ModelParams) -> ModelParams:
    hz = base.to_hz_dict()
    omega_m = TWO_PI * _float(values, "omega_m_hz", hz["omega_m_hz"])
    gamma_m = TWO_PI * _float(values, "gamma_m_hz", hz["gamma_m_hz"])
    gamma_rp = TWO_PI * _float(values, "gamma_rp_hz", hz["gamma_rp_hz"])
    eta_d = _float(values, "eta_d", base.eta_d)
    if "gamma_tot_hz" in values or "gamma_meas_hz" in values:
        return ModelParams.from_fit_rates(
            omega_m=omega_m, gamma_m=gamma_m,
            gamma_tot=TWO_PI * _float(values, "gamma_tot_hz", hz["gamma_tot_hz"]),
            gamma_meas=TWO_PI * _float(values, "gamma_meas_hz", hz["gamma_meas_hz"]),
            eta_d=eta_d, gamma_rp=gamma_rp,
        )
    return ModelParams(
        omega_m=omega_m, gamma_m=gamma_m,
        gamma_qba=TWO_PI * _float(values, "gamma_qba_hz", hz["gamma_qba_hz"]),
        eta_d=eta_d, n_bar=_float(values, "n_bar", base.n_bar), gamma_rp=gamma_rp,
    )


def _physical_from_section(values: Mapping[str, str]) -> PhysicalParams:
    explicit = ("mass", "polarizability", "field_amplitude_E0", "waist_x", "waist_y",
                "rayleigh_range_zR", "wavelength")
    if all(key in values for key in explicit):
        return derived_physical(**{key: _float(values, key, None) for key in explicit})
    return silica_nanoparticle(
        diameter=_float(values, "diameter", 100e-9),
        wavelength=_float(values, "wavelength", 1550e-9),
        trap_frequency_z_hz=_float(values, "trap_frequency_z_hz", PRESETS["paper-2021"]["omega_m_hz"]),
        numerical_aperture=_float(values, "numerical_aperture", 0.75),
    )


def load_run_config(path: Optional[Path] = None, preset: Optional[str] = None,
                    overrides: Optional[Dict[str, Any]] = None) -> RunConfig:
    """Resolve a RunConfig from defaults, an optional preset, an INI file and overrides"""
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";", "#"))
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigurationError(f"Config file not found: {path}")
        try:
            parser.read(path, encoding="utf-8")
        except configparser.Error as e:
            raise ConfigurationError(f"Malformed config file {path}: {e}")

    run = _section(parser, "run")
    preset = overrides.get("preset") or preset or run.get("preset") or "paper-2021"
    if preset not in PRESETS:
        raise UsageError(f"Unknown preset '{preset}'. Available: {', '.join(PRESETS)}")
    preset_values = PRESETS[preset]

    try:
        params = _model_from_section(_section(parser, "model"), ModelParams.preset(preset))

        sim = _section(parser, "simulation")
        simulation = SimulationSection(
            dt=_float(sim, "dt", default_dt(params)),
            n_samples=int(overrides.get("n_samples") or _int(sim, "n_samples", 2 ** 21)),
            integrator=sim.get("integrator", "euler"),
            burn_in=_float(sim, "burn_in", 0.0),
            theta_offset=_float(sim, "theta_offset", 0.0),
            drive_amplitude=_float(sim, "drive_amplitude", 0.0),
            drive_frequency_hz=_float(sim, "drive_frequency_hz", preset_values["drive_frequency_hz"]),
        )

        spect = _section(parser, "spectral")
        spectral = SpectralSection(
            resolution_hz=_float(spect, "resolution_hz", WELCH_DEFAULTS["resolution_hz"]),
            overlap=_float(spect, "overlap", WELCH_DEFAULTS["overlap"]),
            window=spect.get("window", WELCH_DEFAULTS["window"]),
            shot_band_hz=(_float(spect, "shot_band_low_hz", SHOT_NOISE_BAND_HZ[0]),
                          _float(spect, "shot_band_high_hz", SHOT_NOISE_BAND_HZ[1])),
            fit_half_band_hz=_float(spect, "fit_half_band_hz", FIT_DEFAULTS["half_band_hz"]),
            max_nfev=_int(spect, "max_nfev", FIT_DEFAULTS["max_nfev"]),
        )

        calibration = None
        if parser.has_section("calibration"):
            cal = parser["calibration"]
            calibration = CalibrationSection(
                c0=_float(cal, "c0", 1.0), c1=_float(cal, "c1", 0.0), c2=_float(cal, "c2", 0.0),
                v_off=_float(cal, "v_off", 0.0), v_amp=_float(cal, "v_amp", 1.0),
                unbalance_voltage=_float(cal, "unbalance_voltage", 0.0),
                unbalance_min=_float(cal, "unbalance_min", None),
                unbalance_max=_float(cal, "unbalance_max", None),
                parabola_file=_relative_to(path, cal.get("parabola_file")),
                angle_sweep_file=_relative_to(path, cal.get("angle_sweep_file")),
            )

        tomo = _section(parser, "tomography")
        freqs = tomo.get("mode_frequencies_hz")
        tomography = TomographySection(
            mode_frequencies_hz=tuple(float(f) for f in freqs.split(",")) if freqs
            else tuple(preset_values["mode_frequencies_hz"]),
            chunk_duration=_float(tomo, "chunk_duration", TOMOGRAPHY_DEFAULTS["chunk_duration"]),
            n_chunks=_int(tomo, "n_chunks", 1000),
            bin_count=_int(tomo, "bin_count", TOMOGRAPHY_DEFAULTS["bin_count"]),
            bin_range=_float(tomo, "bin_range", None),
            grid_size=_int(tomo, "grid_size", TOMOGRAPHY_DEFAULTS["grid_size"]),
            iterations=_int(tomo, "iterations", TOMOGRAPHY_DEFAULTS["iterations"]),
            relaxation=_float(tomo, "relaxation", TOMOGRAPHY_DEFAULTS["relaxation"]),
            angles=tomo.get("angles", "uniform:19"),
        )
        parse_angles(tomography.angles)

        pat = _section(parser, "patterns")
        patterns = PatternSection(
            n_theta=_int(pat, "n_theta", 91), n_phi=_int(pat, "n_phi", 181),
            beta_sq=_float(pat, "beta_sq", 1.0),
            geometric_factor_A=_float(pat, "geometric_factor_A", None),
            quadrature_resolution=_int(pat, "quadrature_resolution", 512),
        )
        physical = _physical_from_section(_section(parser, "physical"))
    except (ValueError, TypeError) as e:
        raise ConfigurationError(f"Invalid configuration value: {e}")

    angles_text = overrides.get("angles") or run.get("angles", DEFAULT_ANGLES)
    seed = overrides.get("seed")
    if seed is None:
        seed = _int(run, "seed", settings.default_seed)
    fmt = overrides.get("fmt") or run.get("format", "binary")
    if fmt not in ("csv", "binary"):
        raise ConfigurationError(f"format must be csv or binary, got '{fmt}'")

    return RunConfig(
        params=params, simulation=simulation, spectral=spectral, tomography=tomography,
        patterns=patterns, physical=physical, calibration=calibration,
        angles=parse_angles(angles_text) if isinstance(angles_text, str) else tuple(angles_text),
        seed=int(seed),
        output_dir=Path(overrides.get("output_dir") or run.get("output_dir") or settings.output_dir),
        fmt=fmt, preset=preset, source=str(path) if path else None,
    )
