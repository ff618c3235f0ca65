"""
Logging configuration for the levsqueeze laboratory

Handlers live on the package logger "levsqueeze"; every component logger
is a child that only carries a level and propagates its records upward.
"""

import logging
import sys
from pathlib import Path
from typing import Dict, Optional

from ..config.settings import settings

PACKAGE = "levsqueeze"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"


def _level(name: str) -> int:
    return getattr(logging, name.upper(), logging.INFO)


def _configure_package_logger() -> logging.Logger:
    """Attach the stderr handler (and the optional file handler) exactly once"""
    package = logging.getLogger(PACKAGE)
    if package.handlers:
        return package

    package.setLevel(_level(settings.log_level))
    formatter = logging.Formatter(LOG_FORMAT, datefmt=DATE_FORMAT)

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(formatter)
    package.addHandler(console)

    log_dir: Optional[Path] = settings.log_dir
    if log_dir is not None:
        try:
            log_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            package.warning(f"Log directory {log_dir} unavailable, logging to stderr only: {e}")
        else:
            file_handler = logging.FileHandler(log_dir / f"{PACKAGE}.log")
            file_handler.setFormatter(formatter)
            package.addHandler(file_handler)
    return package


class LabLogger:
    """Component logger of one part of the lab (model, langevin, ...)"""

    _registry: Dict[str, "LabLogger"] = {}

    def __init__(self, component: str, level: Optional[str] = None):
        _configure_package_logger()
        self.component = component
        self.logger = logging.getLogger(f"{PACKAGE}.{component}")
        if level:
            self.set_level(level)
        LabLogger._registry[component] = self

    def set_level(self, level: str):
        self.logger.setLevel(_level(level))

    def debug(self, message: str, **kwargs):
        self.logger.debug(message, **kwargs)

    def info(self, message: str, **kwargs):
        self.logger.info(message, **kwargs)

    def warning(self, message: str, **kwargs):
        self.logger.warning(message, **kwargs)

    def error(self, message: str, **kwargs):
        self.logger.error(message, **kwargs)


# Component loggers
model_logger = LabLogger("model")
sim_logger = LabLogger("langevin")
spectral_logger = LabLogger("spectral")
tomo_logger = LabLogger("tomography")
cli_logger = LabLogger("cli")
storage_logger = LabLogger("storage")
monitoring_logger = LabLogger("monitoring")
database_logger = LabLogger("database")


def get_logger(component: str, level: Optional[str] = None) -> LabLogger:
    """Registered logger of a component, created on first use"""
    existing = LabLogger._registry.get(component)
    if existing is not None:
        if level:
            existing.set_level(level)
        return existing
    return LabLogger(component, level)


def set_global_level(level: str):
    """One level for the package logger and every component"""
    logging.getLogger(PACKAGE).setLevel(_level(level))
    for lab_logger in LabLogger._registry.values():
        lab_logger.logger.setLevel(logging.NOTSET)
