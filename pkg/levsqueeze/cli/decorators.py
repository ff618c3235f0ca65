"""
Decorators for CLI commands with timing and run-ledger tracking
"""

import time
from functools import wraps
from typing import Callable, List

from .. import __version__
from ..config.constants import EXIT_CODES
from ..monitoring.metrics import RunMonitor
from ..utils.formatters import format_duration_ms
from ..utils.logging import cli_logger
from ..utils.exceptions import LabError


def tracked_command(name: str) -> Callable:
    """
    Wrap a handler(config, args) -> list of artifact paths.

    Every call is timed, logged and appended to the run ledger of the
    configured output directory; exceptions propagate unchanged.
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(config, args) -> List:
            start_time = time.time()
            success = True
            exit_code = 0
            error_message = None
            artifacts: List = []

            cli_logger.debug(f"Starting command: {name}")
            try:
                artifacts = list(func(config, args) or [])
                return artifacts
            except LabError as e:
                success = False
                exit_code = e.exit_code
                error_message = str(e)
                raise
            except Exception as e:
                success = False
                exit_code = EXIT_CODES["error"]
                error_message = str(e)
                raise
            finally:
                elapsed_ms = (time.time() - start_time) * 1000
                RunMonitor(config.output_dir).log_run(
                    command=name,
                    execution_time_ms=elapsed_ms,
                    success=success,
                    exit_code=exit_code,
                    seed=config.seed,
                    config_hash=config.config_hash,
                    version=__version__,
                    artifact_count=len(artifacts),
                    error_message=error_message,
                    input_params={"inputs": [str(p) for p in getattr(args, "inputs", []) or []],
                                  "source": config.source},
                )
                cli_logger.info(
                    f"Command {name} {'completed' if success else 'failed'} in "
                    f"{format_duration_ms(elapsed_ms)} ({len(artifacts)} artifacts)"
                )
        return wrapper
    return decorator
