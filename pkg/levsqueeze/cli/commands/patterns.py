"""
patterns: information radiation patterns and measurement limits
"""

import argparse
from pathlib import Path
from typing import Any, Dict, List

from ...config.constants import TWO_PI
from ...config.run_config import RunConfig
from ...model import (
    PATTERN_AXES,
    heisenberg_limit,
    imprecision_backaction,
    pattern_grid,
    pattern_solid_angle_integral,
    trap_frequencies,
)
from ...storage import save_pattern_grid, write_report
from ...utils.logging import cli_logger
from ..common import add_common_arguments, provenance
from ..decorators import tracked_command

PATTERN_DIR = "patterns"


def pattern_factor(config: RunConfig) -> float:
    """Explicit A from [patterns], otherwise the one of the physical geometry"""
    if config.patterns.geometric_factor_A is not None:
        return config.patterns.geometric_factor_A
    return config.physical.geometric_factor_A


def run_patterns(config: RunConfig) -> List[Path]:
    """Per-axis pattern grids plus a report of integrals and Heisenberg products"""
    section = config.patterns
    A = pattern_factor(config)
    header = provenance(config, "patterns").header(geometric_factor_A=A, beta_sq=section.beta_sq)
    out_dir = config.output_dir / PATTERN_DIR

    paths: List[Path] = []
    integrals: Dict[str, Any] = {}
    for axis in PATTERN_AXES:
        theta, phi, values = pattern_grid(axis, section.n_theta, section.n_phi, section.beta_sq, A)
        paths.append(save_pattern_grid(theta, phi, values, out_dir / f"pattern_{axis}",
                                       {**header, "axis": axis}))
        integrals[axis] = pattern_solid_angle_integral(axis, section.beta_sq, A,
                                                       section.quadrature_resolution)

    reference = heisenberg_limit()
    sections: Dict[str, Dict[str, Any]] = {"integrals": integrals}
    for axis, limits in imprecision_backaction(config.physical).items():
        sections[f"limits_{axis}"] = {
            "s_imp": limits.s_imp,
            "s_ff": limits.s_ff,
            "product": limits.product,
            "product_over_limit": limits.product / reference,
        }
        cli_logger.info(f"Axis {axis}: S_imp*S_FF = {limits.product / reference:.12f} x hbar^2/16pi^2")
    sections["trap"] = {f"{name}_hz": value / TWO_PI
                        for name, value in trap_frequencies(config.physical).items()}
    sections["physical"] = {
        "geometric_factor_A": config.physical.geometric_factor_A,
        "scattered_power_P": config.physical.scattered_power_P,
        "wavelength": config.physical.wavelength,
        "heisenberg_limit": reference,
    }
    paths.append(write_report(config.output_dir / "patterns_report.txt", sections, header))
    return paths


def register_patterns_command(subparsers: argparse._SubParsersAction) -> None:
    """Register the patterns subcommand"""
    parser = subparsers.add_parser("patterns", help="tabulate radiation patterns and limits")
    add_common_arguments(parser)

    @tracked_command("patterns")
    def handler(config: RunConfig, args: argparse.Namespace) -> List[Path]:
        return run_patterns(config)

    parser.set_defaults(handler=handler)
