"""
fit: joint homodyne-spectrum fit and predicted spectra
"""

import argparse
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ...config.constants import TWO_PI
from ...config.run_config import RunConfig
from ...model import (
    ModelParams,
    homodyne_psd_from_rates,
    optimal_squeezing,
    predicted_spectra,
    squeezing_bandwidth,
)
from ...spectral import (
    FitResult,
    Spectrum,
    fit_multi,
    initial_guess,
    subtract_classical_noise,
)
from ...storage import load_spectrum, write_report, write_table
from ...utils.formatters import format_db
from ...utils.logging import cli_logger
from ...utils.exceptions import FitError, ParameterDomainError, UsageError
from ..common import add_common_arguments, calibration_model, provenance
from ..decorators import tracked_command

PREDICTED_THETAS = 73
PREDICTED_FREQS = 501


def load_spectra(config: RunConfig, inputs: Sequence[Path]) -> List[Spectrum]:
    """Spectrum files in shot-noise units, classical excess removed when a calibration is configured"""
    if not inputs:
        raise UsageError("No spectrum files given")
    spectra = [load_spectrum(Path(p)) for p in inputs]
    calib = calibration_model(config)
    if calib is not None:
        default_u = config.calibration.unbalance_voltage
        spectra = [subtract_classical_noise(s, calib, s.unbalance_voltage
                                            if s.unbalance_voltage is not None else default_u)
                   for s in spectra]
    return spectra


def fitted_params(fit: FitResult, eta_d: float) -> Optional[ModelParams]:
    """A model consistent with the fitted rates; eta_d = 1 when the configured one is not"""
    for eta in (eta_d, 1.0):
        try:
            return fit.to_params(eta_d=eta)
        except ParameterDomainError:
            continue
    return None


def predicted_grid(fit: FitResult, params: Optional[ModelParams]) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    thetas = np.linspace(0.0, np.pi, PREDICTED_THETAS)
    freqs = np.linspace(fit.band_hz[0], fit.band_hz[1], PREDICTED_FREQS)
    if params is not None:
        values = predicted_spectra(params, thetas, TWO_PI * freqs)
    else:
        values = homodyne_psd_from_rates(TWO_PI * freqs[None, :], thetas[:, None], fit.omega_m,
                                         fit.gamma_m, fit.gamma_tot, fit.gamma_meas)
    return thetas, freqs, values


def fit_spectra(config: RunConfig, spectra: Sequence[Spectrum], sources: Sequence[str],
                command: str = "fit") -> Tuple[FitResult, List[Path]]:
    """Fit, then write the report, the predicted-spectra grid and the fitted curves"""
    header = provenance(config, command).header()
    out_dir = config.output_dir
    guess = initial_guess(spectra, config.preset or "paper-2021")
    centre = float(np.mean(guess.omegas)) / TWO_PI
    half = config.spectral.fit_half_band_hz
    band = (max(centre - half, 0.0), centre + half)

    try:
        fit = fit_multi(spectra, fit_band=band, init=guess, max_nfev=config.spectral.max_nfev)
    except FitError as e:
        diagnostics = {key: value for key, value in e.diagnostics.items()}
        diagnostics["message"] = str(e)
        write_report(out_dir / "fit_diagnostics.txt",
                     {"diagnostics": diagnostics, "inputs": {f"input[{k}]": s for k, s in enumerate(sources)}},
                     header)
        cli_logger.error(f"Fit failed; diagnostics written to {out_dir / 'fit_diagnostics.txt'}")
        raise

    paths: List[Path] = []
    params = fitted_params(fit, config.params.eta_d)
    sections = {"fit": fit.summary(), "inputs": {f"input[{k}]": s for k, s in enumerate(sources)}}
    calib = calibration_model(config)
    if calib is not None:
        sections["calibration"] = {**calib.to_dict(),
                                   "unbalance_voltage": config.calibration.unbalance_voltage}
    if params is not None:
        optimum = optimal_squeezing(params)
        bandwidth = squeezing_bandwidth(params)
        sections["squeezing"] = {
            "min_psd": optimum.min_psd,
            "min_psd_db": format_db(optimum.min_psd),
            "frequency_hz": optimum.omega / TWO_PI,
            "theta": optimum.theta,
            "band_low_hz": bandwidth.omega_low / TWO_PI,
            "band_high_hz": bandwidth.omega_high / TWO_PI,
            "band_width_hz": bandwidth.width_hz,
            "model_eta_d": params.eta_d,
        }
    paths.append(write_report(out_dir / "fit_report.txt", sections, header))

    thetas, freqs, values = predicted_grid(fit, params)
    th, fr = np.meshgrid(thetas, freqs, indexing="ij")
    paths.append(write_table(out_dir / "predicted_spectra",
                             {"theta_rad": th.ravel(), "freq_hz": fr.ravel(),
                              "psd_sn_units": values.ravel()},
                             {**header, "thetas": len(thetas), "freqs": len(freqs)}, "csv"))

    for k, spectrum in enumerate(spectra):
        section = spectrum.in_band(fit.band_hz)
        paths.append(write_table(out_dir / "fit_curves" / f"fit_curve_{k:02d}",
                                 {"freq_hz": section.freqs, "psd_sn_units": section.values,
                                  "model_sn_units": fit.model_values(k, section.freqs)},
                                 {**header, "theta_fit": float(fit.thetas[k]), "source": sources[k]},
                                 "csv"))
    cli_logger.info(f"eta_meas = {fit.eta_meas:.3f} (reduced chi2 {fit.reduced_chi2:.3g})")
    return fit, paths


def run_fit(config: RunConfig, inputs: Sequence[Path]) -> List[Path]:
    """FitResult report plus the predicted-PSD grid from the fitted rates"""
    spectra = load_spectra(config, inputs)
    _, paths = fit_spectra(config, spectra, [str(p) for p in inputs])
    return paths


def register_fit_command(subparsers: argparse._SubParsersAction) -> None:
    """Register the fit subcommand"""
    parser = subparsers.add_parser("fit", help="fit shot-noise normalised spectra")
    add_common_arguments(parser)
    parser.add_argument("inputs", nargs="*", type=Path, help="spectrum CSV files")

    @tracked_command("fit")
    def handler(config: RunConfig, args: argparse.Namespace) -> List[Path]:
        return run_fit(config, args.inputs)

    parser.set_defaults(handler=handler)
