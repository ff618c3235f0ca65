"""
tomography: sinograms, Wigner grids and covariance ellipses of temporal modes
"""

import argparse
from pathlib import Path
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ...config.run_config import RunConfig
from ...langevin import PhotocurrentRecord
from ...tomography import (
    CovarianceEllipse,
    TemporalModeSamples,
    build_sinogram,
    covariance_from_sinogram,
    extract_modes,
    grid_covariance,
    sample_modes,
    sart_reconstruct,
    theoretical_covariance,
)
from ...storage import load_record, save_sinogram, save_wigner, write_report, write_table
from ...utils.formatters import format_frequency, frequency_tag
from ...utils.logging import cli_logger
from ...utils.exceptions import UsageError
from ..common import add_common_arguments, provenance
from ..decorators import tracked_command

TOMOGRAPHY_DIR = "tomography"
SYNTHETIC_STREAM = 101


def _ellipse_section(ellipse: CovarianceEllipse) -> Dict[str, object]:
    section = dict(ellipse.to_dict())
    section["squeezing_db"] = ellipse.squeezing_db()
    return section


def mode_samples_from_records(config: RunConfig, records: Sequence[PhotocurrentRecord],
                              center_freq: float) -> List[TemporalModeSamples]:
    section = config.tomography
    return [extract_modes(record, section.chunk_duration, center_freq,
                          gamma_m=config.params.gamma_m) for record in records]


def synthetic_mode_samples(config: RunConfig, center_freq: float, index: int) -> List[TemporalModeSamples]:
    """Gaussian mode samples drawn from the model covariance at center_freq"""
    key = np.random.SeedSequence([config.seed, SYNTHETIC_STREAM, index])
    rng = np.random.Generator(np.random.Philox(key))
    ellipse = theoretical_covariance(center_freq, config.params)
    return sample_modes(ellipse, config.tomography_angles, config.tomography.n_chunks,
                        center_freq, config.tomography.chunk_duration, rng)


def reconstruct_mode(config: RunConfig, samples: Sequence[TemporalModeSamples], center_freq: float,
                     command: str) -> Tuple[Dict[str, Dict[str, object]], List[Path]]:
    """Sinogram, SART grid and ellipse files of one temporal mode"""
    section = config.tomography
    header = provenance(config, command).header(center_freq_hz=center_freq)
    tag = frequency_tag(center_freq)
    out_dir = config.output_dir / TOMOGRAPHY_DIR

    sinogram = build_sinogram(samples, section.bin_count, section.bin_range)
    grid = sart_reconstruct(sinogram, section.grid_size, section.iterations, section.relaxation)
    measured = covariance_from_sinogram(sinogram)
    from_grid = grid_covariance(grid)
    model = theoretical_covariance(center_freq, config.params)
    vacuum = CovarianceEllipse.vacuum()

    paths = [
        save_sinogram(sinogram, out_dir / f"sinogram_{tag}", header),
        save_wigner(grid, out_dir / f"wigner_{tag}", header, config.fmt),
    ]
    contours = {"measured": measured.contour(), "model": model.contour(), "vacuum": vacuum.contour()}
    columns = {}
    for name, points in contours.items():
        columns[f"{name}_x"] = points[:, 0]
        columns[f"{name}_y"] = points[:, 1]
    paths.append(write_table(out_dir / f"ellipse_{tag}", columns, {**header, "n_sd": 2.0}, "csv"))

    minor, _ = measured.axes()
    cli_logger.info(
        f"Mode at {format_frequency(center_freq)}: minor variance {minor:.4f} "
        f"({measured.squeezing_db():+.2f} dB vs vacuum)"
    )
    sections = {
        f"measured_{tag}": _ellipse_section(measured),
        f"grid_{tag}": {**_ellipse_section(from_grid), "final_residual": grid.residuals[-1],
                        "sweeps": len(grid.residuals)},
        f"model_{tag}": _ellipse_section(model),
        f"sinogram_{tag}": {"angles": len(sinogram.angles), "bins": len(sinogram.bin_centers),
                            "bin_range": sinogram.half_range,
                            "samples_per_angle": int(sinogram.sample_counts.min())},
    }
    return sections, paths


def tomograph(config: RunConfig, records: Sequence[PhotocurrentRecord], command: str,
              synthetic: bool = False) -> List[Path]:
    """Every configured mode frequency, then one ellipse report with the vacuum reference"""
    if not synthetic and len(records) < 5:
        raise UsageError(f"Tomography needs photocurrents for at least 5 angles, got {len(records)}")
    sections: Dict[str, Dict[str, object]] = {"vacuum": _ellipse_section(CovarianceEllipse.vacuum())}
    paths: List[Path] = []
    for index, center_freq in enumerate(config.tomography.mode_frequencies_hz):
        if synthetic:
            samples = synthetic_mode_samples(config, center_freq, index)
        else:
            samples = mode_samples_from_records(config, records, center_freq)
        mode_sections, mode_paths = reconstruct_mode(config, samples, center_freq, command)
        sections.update(mode_sections)
        paths.extend(mode_paths)
    header = provenance(config, command).header(synthetic=synthetic)
    paths.append(write_report(config.output_dir / "tomography_report.txt", sections, header))
    return paths


def run_tomography(config: RunConfig, inputs: Sequence[Path], synthetic: bool = False) -> List[Path]:
    """Sinogram, Wigner grid and ellipse report from photocurrent files (or model samples)"""
    if inputs and synthetic:
        raise UsageError("Give photocurrent files or --synthetic, not both")
    if not inputs and not synthetic:
        raise UsageError("No photocurrent files given (use --synthetic for model samples)")
    records = [load_record(Path(p)) for p in inputs]
    return tomograph(config, records, "tomography", synthetic)


def register_tomography_command(subparsers: argparse._SubParsersAction) -> None:
    """Register the tomography subcommand"""
    parser = subparsers.add_parser("tomography", help="reconstruct temporal-mode Wigner functions")
    add_common_arguments(parser)
    parser.add_argument("inputs", nargs="*", type=Path, help="photocurrent record files")
    parser.add_argument("--synthetic", action="store_true",
                        help="sample modes from the model covariance instead of records")

    @tracked_command("tomography")
    def handler(config: RunConfig, args: argparse.Namespace) -> List[Path]:
        return run_tomography(config, args.inputs, args.synthetic)

    parser.set_defaults(handler=handler)
