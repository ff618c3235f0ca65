"""
simulate: photocurrent records at the configured homodyne angles
"""

import argparse
from pathlib import Path
from typing import List, Tuple

from ...config.run_config import RunConfig
from ...langevin import (
    PhotocurrentRecord,
    homodyne_record,
    shot_noise_record,
    simulate,
    with_classical_excess,
)
from ...storage import save_record, write_report
from ...utils.formatters import format_angle, format_angular
from ...utils.logging import cli_logger
from ..common import add_common_arguments, calibration_model, config_sections, provenance, sim_config
from ..decorators import tracked_command

RECORD_DIR = "records"
SHOT_NOISE_NAME = "shot_noise"


def record_name(index: int) -> str:
    return f"photocurrent_{index:02d}"


def simulate_records(config: RunConfig) -> Tuple[List[PhotocurrentRecord], PhotocurrentRecord]:
    """
    One independent trajectory per angle plus a shot-noise reference.

    Trajectory k feeds angle k; the reference uses the next trajectory index.
    With a [calibration] section every angle record carries the calibrated
    local-oscillator excess at the configured unbalance voltage; the
    reference is taken at balance and carries none.
    """
    sim = sim_config(config)
    calib = calibration_model(config)
    records = []
    for k, theta in enumerate(config.angles):
        cli_logger.info(f"Simulating angle {k + 1}/{len(config.angles)}: {format_angle(theta)}")
        bundle = simulate(sim, trajectory=k)
        record = homodyne_record(bundle, theta, sim.theta_offset)
        if calib is not None:
            u = config.calibration.unbalance_voltage
            record = with_classical_excess(record, calib.excess(u), sim.seed, k, u)
        records.append(record)
    shot = shot_noise_record(sim, trajectory=len(config.angles))
    return records, shot


def write_records(config: RunConfig, records: List[PhotocurrentRecord], shot: PhotocurrentRecord,
                  command: str) -> List[Path]:
    header = provenance(config, command).header()
    out_dir = config.output_dir / RECORD_DIR
    paths = [save_record(record, out_dir / record_name(k), {**header, "angle_index": k}, config.fmt)
             for k, record in enumerate(records)]
    paths.append(save_record(shot, out_dir / SHOT_NOISE_NAME,
                             {**header, "reference": "shot_noise"}, config.fmt))
    return paths


def run_simulate(config: RunConfig) -> List[Path]:
    """Photocurrent files for every angle, a shot-noise record and a metadata report"""
    sim = sim_config(config)
    cli_logger.info(
        f"Simulating {len(config.angles)} angles x {sim.n_samples} samples "
        f"(dt = {sim.dt:.4g} s, Omega_m/2pi = {format_angular(config.params.omega_m)})"
    )
    records, shot = simulate_records(config)
    paths = write_records(config, records, shot, "simulate")

    sections = config_sections(config)
    sections["records"] = {Path(p).name: records[k].theta if k < len(records) else "shot_noise"
                           for k, p in enumerate(paths)}
    header = provenance(config, "simulate").header()
    paths.append(write_report(config.output_dir / "simulate_report.txt", sections, header))
    return paths


def register_simulate_command(subparsers: argparse._SubParsersAction) -> None:
    """Register the simulate subcommand"""
    parser = subparsers.add_parser("simulate", help="simulate homodyne photocurrents")
    add_common_arguments(parser)

    @tracked_command("simulate")
    def handler(config: RunConfig, args: argparse.Namespace) -> List[Path]:
        return run_simulate(config)

    parser.set_defaults(handler=handler)
