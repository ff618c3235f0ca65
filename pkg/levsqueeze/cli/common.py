"""
Shared helpers of the subcommands
"""

import argparse
import math
from pathlib import Path
from typing import Any, Dict, Optional

from ..config.run_config import RunConfig
from ..langevin.config import DriveTone, SimConfig
from ..spectral import CalibrationModel, calibrate_angle_sweep, check_excess_bound, fit_calibration_parabola
from ..storage import Provenance, load_angle_sweep, load_calibration_sweep
from ..utils.exceptions import ConfigurationError


def add_common_arguments(parser: argparse.ArgumentParser) -> None:
    """Flags accepted by every subcommand"""
    parser.add_argument("--config", type=Path, help="INI configuration file")
    parser.add_argument("--preset", help="parameter preset (default paper-2021)")
    parser.add_argument("--seed", type=int, help="master seed of the random streams")
    parser.add_argument("--angles", help="homodyne angles, e.g. '0, pi/8, 3pi/8' or 'uniform:19'")
    parser.add_argument("--out", dest="output_dir", type=Path, help="output directory")
    parser.add_argument("--format", dest="fmt", choices=("csv", "binary"),
                        help="format of large arrays (default binary)")
    parser.add_argument("--csv", dest="fmt", action="store_const", const="csv",
                        help="shorthand for --format csv")
    parser.add_argument("--samples", type=int, help="samples per simulated record")
    parser.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"),
                        help="override LEVSQUEEZE_LOG_LEVEL")


def provenance(config: RunConfig, command: str) -> Provenance:
    return Provenance(config_hash=config.config_hash, seed=config.seed, command=command,
                      extra={"preset": config.preset or ""})


def sim_config(config: RunConfig) -> SimConfig:
    """SimConfig of the [simulation] section"""
    section = config.simulation
    drive = None
    if section.drive_amplitude:
        drive = DriveTone.from_hz(section.drive_amplitude, section.drive_frequency_hz)
    return SimConfig(
        params=config.params,
        dt=section.dt,
        n_samples=section.n_samples,
        seed=config.seed,
        drive=drive,
        integrator=section.integrator,
        burn_in=section.burn_in,
        theta_offset=section.theta_offset,
    )


def config_sections(config: RunConfig) -> Dict[str, Dict[str, Any]]:
    """Resolved configuration as report sections"""
    resolved = config.to_dict()
    sections = {"model": resolved["model"], "simulation": resolved["simulation"]}
    sections["run"] = {"seed": config.seed, "angles": list(config.angles),
                       "format": config.fmt, "preset": config.preset or ""}
    return sections


def calibration_model(config: RunConfig) -> Optional[CalibrationModel]:
    """
    Local-oscillator calibration of the [calibration] section, if any.

    A parabola_file (unbalance sweep) replaces c0, c1, c2 and the unbalance
    range; an angle_sweep_file replaces v_off and v_amp.
    """
    section = config.calibration
    if section is None:
        return None
    v_off, v_amp = section.v_off, section.v_amp
    if section.angle_sweep_file:
        v_off, v_amp = calibrate_angle_sweep(load_angle_sweep(Path(section.angle_sweep_file)))
    if section.parabola_file:
        u, r = load_calibration_sweep(Path(section.parabola_file))
        return fit_calibration_parabola(u, r, v_off, v_amp)

    low = -math.inf if section.unbalance_min is None else section.unbalance_min
    high = math.inf if section.unbalance_max is None else section.unbalance_max
    if low > high:
        raise ConfigurationError(f"unbalance_min {low} exceeds unbalance_max {high}")
    calib = CalibrationModel(c0=section.c0, c1=section.c1, c2=section.c2, v_off=v_off, v_amp=v_amp,
                             unbalance_range=(low, high))
    check_excess_bound(calib)
    return calib
