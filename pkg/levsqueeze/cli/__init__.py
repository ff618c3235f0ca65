"""
Command-line front end
"""

from .commands import run_fit, run_patterns, run_pipeline, run_simulate, run_tomography
from .decorators import tracked_command
from .parser import build_parser

__all__ = [
    "build_parser", "tracked_command",
    "run_fit", "run_patterns", "run_pipeline", "run_simulate", "run_tomography",
]
