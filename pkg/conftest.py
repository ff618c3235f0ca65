"""
Shared fixtures for the levsqueeze test suite
"""

import pytest

from levsqueeze.database.connection import db_manager
from levsqueeze.langevin import SimConfig
from levsqueeze.model import ModelParams, silica_nanoparticle


@pytest.fixture
def paper_params():
    return ModelParams.preset("paper-2021")


@pytest.fixture
def broad_params():
    """Low-Q oscillator whose spectra converge within a few seconds of simulated time"""
    return ModelParams.from_hz(omega_m_hz=1.0e3, gamma_m_hz=100.0, gamma_qba_hz=200.0,
                               eta_d=0.8, n_bar=0.0)


@pytest.fixture
def small_config(paper_params):
    return SimConfig(params=paper_params, dt=0.02 / paper_params.omega_m, n_samples=2 ** 16, seed=1234)


@pytest.fixture
def broad_config(broad_params):
    return SimConfig(params=broad_params, dt=0.02 / broad_params.omega_m, n_samples=2 ** 21, seed=77)


@pytest.fixture
def physical():
    return silica_nanoparticle()


@pytest.fixture(autouse=True)
def isolated_output(tmp_path, monkeypatch):
    """Keep default output directories and the run ledger inside tmp_path"""
    out = tmp_path / "runs"
    monkeypatch.setenv("LEVSQUEEZE_OUTPUT_DIR", str(out))
    yield out
    db_manager.close_connections()


@pytest.fixture
def write_ini(tmp_path):
    """Write an INI file from a dict of sections"""
    def _write(sections, name="run.ini"):
        lines = []
        for section, values in sections.items():
            lines.append(f"[{section}]")
            lines.extend(f"{key} = {value}" for key, value in values.items())
            lines.append("")
        path = tmp_path / name
        path.write_text("\n".join(lines), encoding="utf-8")
        return path
    return _write
