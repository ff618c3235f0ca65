"""
pipeline: simulate, estimate spectra, fit and tomograph in one run
"""

import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from ...config.constants import TOMOGRAPHY_DEFAULTS, TWO_PI
from ...config.run_config import RunConfig
from ...langevin import PhotocurrentRecord, drive_tone_amplitude
from ...spectral import (
    Spectrum,
    infer_angle,
    normalize_to_shot_noise,
    segment_length_for,
    sensitivity_curve,
    subtract_classical_noise,
    welch_psd,
)
from ...storage import save_spectrum, write_report
from ...utils.logging import cli_logger
from ..common import add_common_arguments, calibration_model, config_sections, provenance, sim_config
from ..decorators import tracked_command
from .fit import fit_spectra
from .simulate import simulate_records, write_records
from .tomography import tomograph

SPECTRUM_DIR = "spectra"


def record_spectra(config: RunConfig, records: Sequence[PhotocurrentRecord],
                   shot: PhotocurrentRecord) -> List[Spectrum]:
    """
    Welch spectra normalised to the shot-noise record.

    With a calibration the angle is inferred from the DC voltage it predicts
    and the classical excess is subtracted; otherwise the nominal angle is used.
    """
    section = config.spectral
    dt = shot.dt
    segment = min(segment_length_for(dt, section.resolution_hz), len(shot))
    reference = welch_psd(shot.i_theta, dt, segment, section.overlap, section.window)
    calib = calibration_model(config)

    spectra = []
    for record in records:
        theta_inferred = record.theta
        unbalance: Optional[float] = None
        if calib is not None:
            theta_inferred = infer_angle(calib.voltage_at(record.theta), calib)
            unbalance = config.calibration.unbalance_voltage
        raw = welch_psd(record.i_theta, dt, segment, section.overlap, section.window,
                        theta=record.theta, theta_inferred=theta_inferred, unbalance_voltage=unbalance)
        spectrum = normalize_to_shot_noise(raw, reference, section.shot_band_hz)
        if calib is not None:
            spectrum = subtract_classical_noise(spectrum, calib)
        spectra.append(spectrum)
    return spectra


def sensitivity_section(config: RunConfig, records: Sequence[PhotocurrentRecord]) -> Optional[Dict[str, Any]]:
    """Drive-tone response versus angle, when a drive is configured"""
    sim = sim_config(config)
    if sim.drive is None:
        return None
    if len(records) < 4:
        cli_logger.warning("Drive tone configured but fewer than 4 angles; skipping sensitivity fit")
        return None
    responses = [(record.theta, drive_tone_amplitude(record, sim.drive.frequency)) for record in records]
    fit = sensitivity_curve(responses)
    section: Dict[str, Any] = {
        "amplitude": fit.amplitude,
        "theta_offset": fit.theta_offset,
        "minimum_angle": fit.minimum_angle,
        "shift_from_pi": fit.shift_from_pi,
        "drive_frequency_hz": sim.drive.frequency / TWO_PI,
    }
    for k, (theta, amplitude) in enumerate(responses):
        section[f"response[{k}]"] = [theta, amplitude]
    return section


def tomography_stage(config: RunConfig, records: Sequence[PhotocurrentRecord]) -> Dict[str, Any]:
    """
    Whether the records can feed the tomography stage: enough angles and at
    least the minimum number of chunks per angle.
    """
    min_angles = TOMOGRAPHY_DEFAULTS["min_angles"]
    min_chunks = TOMOGRAPHY_DEFAULTS["min_chunks"]
    chunk_samples = max(int(round(config.tomography.chunk_duration / records[0].dt)), 1)
    chunks = len(records[0]) // chunk_samples
    stage: Dict[str, Any] = {"angles": len(records), "chunks_per_angle": chunks, "min_chunks": min_chunks}
    if len(records) < min_angles:
        stage["skipped"] = f"{len(records)} angles, need {min_angles}"
    elif chunks < min_chunks:
        stage["skipped"] = f"{chunks} chunks per angle, need {min_chunks}"
        stage["n_samples_needed"] = min_chunks * chunk_samples
    return stage


def run_pipeline(config: RunConfig) -> List[Path]:
    """simulate -> welch -> normalize -> fit -> tomography, with a summary report"""
    header = provenance(config, "pipeline").header()
    records, shot = simulate_records(config)
    paths = write_records(config, records, shot, "pipeline")

    spectra = record_spectra(config, records, shot)
    sources = []
    for k, spectrum in enumerate(spectra):
        path = save_spectrum(spectrum, config.output_dir / SPECTRUM_DIR / f"spectrum_{k:02d}", header)
        paths.append(path)
        sources.append(str(path))

    fit, fit_paths = fit_spectra(config, spectra, sources, "pipeline")
    paths.extend(fit_paths)

    sections = config_sections(config)
    sections["fit"] = {key: value for key, value in fit.summary().items() if "[" not in key}
    truth = config.params.to_hz_dict()
    sections["ground_truth"] = {key: truth[key] for key in
                                ("gamma_m_hz", "gamma_tot_hz", "gamma_meas_hz", "eta_meas")}

    sensitivity = sensitivity_section(config, records)
    if sensitivity is not None:
        sections["sensitivity"] = sensitivity

    stage = tomography_stage(config, records)
    if "skipped" in stage:
        cli_logger.warning(f"Tomography skipped: {stage['skipped']}")
    else:
        paths.extend(tomograph(config, records, "pipeline"))
        stage.update({"report": "tomography_report.txt",
                      "mode_frequencies_hz": list(config.tomography.mode_frequencies_hz)})
    sections["tomography"] = stage

    paths.append(write_report(config.output_dir / "pipeline_report.txt", sections, header))
    return paths


def register_pipeline_command(subparsers: argparse._SubParsersAction) -> None:
    """Register the pipeline subcommand"""
    parser = subparsers.add_parser("pipeline", help="simulate, fit and tomograph in one run")
    add_common_arguments(parser)

    @tracked_command("pipeline")
    def handler(config: RunConfig, args: argparse.Namespace) -> List[Path]:
        return run_pipeline(config)

    parser.set_defaults(handler=handler)
