"""
Argument parser with one subparser per command
"""

import argparse

from .. import __version__
from .commands import (
    register_fit_command,
    register_patterns_command,
    register_pipeline_command,
    register_simulate_command,
    register_tomography_command,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levsqueeze",
        description="Ponderomotive squeezing laboratory: simulation, spectral fitting, "
                    "tomography and radiation patterns",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", metavar="COMMAND")
    subparsers.required = True

    register_simulate_command(subparsers)
    register_fit_command(subparsers)
    register_tomography_command(subparsers)
    register_patterns_command(subparsers)
    register_pipeline_command(subparsers)
    return parser
