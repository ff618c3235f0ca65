"""
Domain artifacts: photocurrents, spectra, sinograms, Wigner grids and pattern tables
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Tuple

import numpy as np

from ..langevin.config import PhotocurrentRecord
from ..spectral.estimation import Spectrum
from ..tomography.radon import WignerGrid
from ..tomography.sinogram import Sinogram
from ..utils.exceptions import DataIOError
from .artifacts import read_table, write_table


def save_record(record: PhotocurrentRecord, path: Path, header: Mapping[str, Any],
                fmt: str = "binary") -> Path:
    """Time series with columns t, value"""
    meta = {**record.metadata, **header, "dt": record.dt, "theta": record.theta,
            "eta_d": record.eta_d, "n_samples": len(record)}
    return write_table(path, {"t": record.time, "value": record.i_theta}, meta, fmt)


def load_record(path: Path) -> PhotocurrentRecord:
    columns, header = read_table(path)
    try:
        return PhotocurrentRecord(
            i_theta=np.asarray(columns["value"], dtype=float),
            theta=float(header["theta"]), eta_d=float(header["eta_d"]), dt=float(header["dt"]),
            metadata=dict(header),
        )
    except KeyError as e:
        raise DataIOError(f"{path} is not a photocurrent record (missing {e})")


def save_spectrum(spectrum: Spectrum, path: Path, header: Mapping[str, Any]) -> Path:
    """Spectrum CSV: freq_hz, psd_sn_units"""
    meta: Dict[str, Any] = {**header}
    for key in ("theta_inferred", "unbalance_voltage", "theta"):
        value = getattr(spectrum, key)
        if value is not None:
            meta[key] = value
    if spectrum.window:
        meta["welch_window"] = spectrum.window
    return write_table(path, {"freq_hz": spectrum.freqs, "psd_sn_units": spectrum.values}, meta, "csv")


def load_spectrum(path: Path) -> Spectrum:
    columns, header = read_table(path)
    if "freq_hz" not in columns or "psd_sn_units" not in columns:
        raise DataIOError(f"{path} is not a spectrum file")

    def optional(key: str) -> Optional[float]:
        value = header.get(key)
        return None if value is None else float(value)

    return Spectrum(freqs=columns["freq_hz"], values=columns["psd_sn_units"],
                    theta_inferred=optional("theta_inferred"),
                    unbalance_voltage=optional("unbalance_voltage"),
                    theta=optional("theta"), window=header.get("welch_window"),
                    metadata=dict(header))


def load_calibration_sweep(path: Path) -> Tuple[np.ndarray, np.ndarray]:
    """(unbalance_voltage, relative_variance) columns of a local-oscillator unbalance sweep"""
    columns, _ = read_table(path)
    try:
        return columns["unbalance_voltage"], columns["relative_variance"]
    except KeyError as e:
        raise DataIOError(f"{path} is not a calibration sweep (missing column {e})")


def load_angle_sweep(path: Path) -> np.ndarray:
    """DC voltages recorded while the homodyne angle is swept"""
    columns, _ = read_table(path)
    if "v_dc" not in columns:
        raise DataIOError(f"{path} is not an angle sweep (missing column v_dc)")
    return columns["v_dc"]

def save_sinogram(sinogram: Sinogram, path: Path, header: Mapping[str, Any], fmt: str = "csv") -> Path:
    """Long format: angle_rad, bin_center, density"""
    angles = np.repeat(sinogram.angles, len(sinogram.bin_centers))
    centers = np.tile(sinogram.bin_centers, len(sinogram.angles))
    meta = {**header, "angles": len(sinogram.angles), "bins": len(sinogram.bin_centers),
            "bin_range": sinogram.half_range}
    return write_table(path, {"angle_rad": angles, "bin_center": centers,
                              "density": sinogram.density.ravel()}, meta, fmt)


def load_sinogram(path: Path) -> Sinogram:
    columns, header = read_table(path)
    angles = np.unique(columns["angle_rad"])
    centers = np.unique(columns["bin_center"])
    width = centers[1] - centers[0]
    edges = np.append(centers - width / 2.0, centers[-1] + width / 2.0)
    density = np.asarray(columns["density"]).reshape(len(angles), len(centers))
    sinogram = Sinogram(angles=angles, bin_edges=edges, density=density,
                        variances=np.zeros(len(angles)), sample_counts=np.zeros(len(angles), dtype=int),
                        metadata=dict(header))
    sinogram.variances = sinogram.column_moments()[1]
    return sinogram


def save_wigner(grid: WignerGrid, path: Path, header: Mapping[str, Any], fmt: str = "binary") -> Path:
    """Dense grid; CSV in long format x, y, w"""
    meta = {**header, "grid_size": len(grid.axis), "extent": grid.extent,
            "method": grid.metadata.get("method", "")}
    if grid.residuals:
        meta["final_residual"] = grid.residuals[-1]
    if fmt == "binary":
        return write_table(path, {"axis": grid.axis, "values": grid.values}, meta, fmt)
    x, y = grid.mesh()
    return write_table(path, {"x": x.ravel(), "y": y.ravel(), "w": grid.values.ravel()}, meta, fmt)


def load_wigner(path: Path) -> WignerGrid:
    columns, header = read_table(path)
    if "values" in columns:
        return WignerGrid(axis=columns["axis"], values=columns["values"], metadata=dict(header))
    axis = np.unique(columns["x"])
    return WignerGrid(axis=axis, values=np.asarray(columns["w"]).reshape(len(axis), len(axis)),
                      metadata=dict(header))


def save_pattern_grid(theta: np.ndarray, phi: np.ndarray, values: np.ndarray, path: Path,
                      header: Mapping[str, Any]) -> Path:
    """Long format: theta_rad, phi_rad, rho"""
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    return write_table(path, {"theta_rad": th.ravel(), "phi_rad": ph.ravel(), "rho": values.ravel()},
                       header, "csv")
