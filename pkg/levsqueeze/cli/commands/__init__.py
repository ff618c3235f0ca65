"""
Subcommand modules; each exposes run_<name> and register_<name>_command
"""

from .fit import register_fit_command, run_fit
from .patterns import register_patterns_command, run_patterns
from .pipeline import register_pipeline_command, run_pipeline
from .simulate import register_simulate_command, run_simulate
from .tomography import register_tomography_command, run_tomography

__all__ = [
    "register_fit_command", "register_patterns_command", "register_pipeline_command",
    "register_simulate_command", "register_tomography_command",
    "run_fit", "run_patterns", "run_pipeline", "run_simulate", "run_tomography",
]
