"""
Langevin integration of the measured oscillator
"""

import time
from concurrent.futures import ThreadPoolExecutor
from typing import List, Optional

import numpy as np

from ..config.settings import settings
from ..utils.logging import sim_logger
from ..utils.exceptions import ConfigurationError, NumericalError
from .config import SimConfig, TrajectoryBundle
from .integrators import propagate, propagator
from .streams import stream, white_noise

VACUUM_PSD = 0.5


def steady_state_draw(config: SimConfig, trajectory: int = 0) -> np.ndarray:
    """(q, p) from the stationary Gaussian with variance Gamma_tot/gamma_m each"""
    variance = config.params.gamma_tot / config.params.gamma_m
    return stream(config.seed, trajectory, "initial").standard_normal(2) * np.sqrt(variance)


def simulate(config: SimConfig, trajectory: int = 0) -> TrajectoryBundle:
    """
    Integrate q' = Omega p, p' = -Omega q - gamma p + xi + sqrt(4 Gamma_qba) X_in (+ drive).

    The X_in realisation driving the backaction is returned in the bundle so
    that the output amplitude quadrature reuses it.
    """
    params = config.params
    n_burn = config.burn_in_samples
    n = config.n_samples + n_burn
    dt = config.dt
    start_time = time.time()

    if not config.covers_correlation_times():
        sim_logger.warning(
            f"Record of {config.duration:.3g} s spans fewer than 10 damping times "
            f"(1/gamma_m = {1.0 / params.gamma_m:.3g} s)"
        )

    thermal_psd = params.gamma_m * (params.n_bar + 0.5) * 2.0
    xi = white_noise(config.seed, trajectory, "thermal", n, dt, thermal_psd)
    x_in = white_noise(config.seed, trajectory, "x_in", n, dt, VACUUM_PSD)
    y_in = white_noise(config.seed, trajectory, "y_in", n, dt, VACUUM_PSD)
    x_nu = white_noise(config.seed, trajectory, "x_nu", n, dt, VACUUM_PSD)

    force = xi + np.sqrt(4.0 * params.gamma_qba) * x_in
    if config.drive is not None:
        t = (np.arange(n) - n_burn) * dt
        force = force + config.drive.amplitude * np.sin(config.drive.frequency * t)

    q0, p0 = steady_state_draw(config, trajectory)
    m, g = propagator(params.omega_m, params.gamma_m, dt, config.integrator)
    q, p = propagate(m, g, force, q0, p0)

    if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p))):
        raise NumericalError("Integration produced non-finite values; reduce dt")

    keep = slice(n_burn, None)
    bundle = TrajectoryBundle(
        q=q[keep], p=p[keep], x_in=x_in[keep], y_in=y_in[keep], x_nu=x_nu[keep],
        dt=dt, params=params, seed=config.seed, trajectory=trajectory,
        metadata=config.metadata(),
    )
    sim_logger.debug(
        f"Simulated trajectory {trajectory}: {config.n_samples} samples "
        f"({config.integrator}) in {time.time() - start_time:.2f}s"
    )
    return bundle


def simulate_ensemble(config: SimConfig, n_trajectories: int,
                      workers: Optional[int] = None) -> List[TrajectoryBundle]:
    """Independent trajectories 0..n-1; results do not depend on the worker count"""
    if n_trajectories < 1:
        raise ConfigurationError(f"n_trajectories must be positive, got {n_trajectories}")
    workers = workers or settings.workers
    sim_logger.info(f"Simulating {n_trajectories} trajectories with {workers} worker(s)")

    if workers == 1:
        return [simulate(config, k) for k in range(n_trajectories)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda k: simulate(config, k), range(n_trajectories)))
