"""
Artifact storage with provenance headers
"""

from .artifacts import (
    FORMATS,
    Provenance,
    read_csv,
    read_npz,
    read_report,
    read_table,
    write_csv,
    write_npz,
    write_report,
    write_table,
)
from .records import (
    load_angle_sweep,
    load_calibration_sweep,
    load_record,
    load_sinogram,
    load_spectrum,
    load_wigner,
    save_pattern_grid,
    save_record,
    save_sinogram,
    save_spectrum,
    save_wigner,
)

__all__ = [
    "FORMATS", "Provenance", "read_csv", "read_npz", "read_report", "read_table",
    "write_csv", "write_npz", "write_report", "write_table",
    "load_angle_sweep", "load_calibration_sweep", "load_record", "load_sinogram", "load_spectrum",
    "load_wigner", "save_pattern_grid", "save_record", "save_sinogram", "save_spectrum", "save_wigner",
]
