"""
Custom exceptions for the levsqueeze laboratory

Every class carries the exit code the command line reports for it.
"""

from typing import Any, Dict, List, Optional

from ..config.constants import EXIT_CODES


class LabError(Exception):
    """Base exception for laboratory errors"""
    exit_code = EXIT_CODES["error"]


class UsageError(LabError):
    """Invalid call: bad tags, mismatched inputs, empty data"""
    exit_code = EXIT_CODES["usage"]


class ConfigurationError(LabError):
    """Configuration validation error"""
    exit_code = EXIT_CODES["configuration"]


class ParameterDomainError(ConfigurationError):
    """Parameter outside its physical domain"""
    pass


class NumericalError(LabError):
    """Numerical procedure failed"""
    exit_code = EXIT_CODES["numerical"]


class CalibrationError(NumericalError):
    """Spectral calibration could not be applied"""
    pass


class FitError(NumericalError):
    """Least-squares fit failed to converge"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class ReconstructionError(NumericalError):
    """Tomographic reconstruction diverged"""

    def __init__(self, message: str, residuals: Optional[List[float]] = None):
        super().__init__(message)
        self.residuals = list(residuals or [])


class DataIOError(LabError):
    """Artifact or ledger read/write error"""
    exit_code = EXIT_CODES["io"]
