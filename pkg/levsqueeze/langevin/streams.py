"""
Counter-based random streams keyed by (seed, trajectory, channel)
"""

import numpy as np

CHANNELS = {
    "initial": 0,
    "thermal": 1,
    "x_in": 2,
    "y_in": 3,
    "x_nu": 4,
    "x_in_redraw": 5,
    "lo_excess": 6,
}


def stream(seed: int, trajectory: int, channel: str) -> np.random.Generator:
    """Independent Philox generator for one noise channel of one trajectory"""
    key = np.random.SeedSequence([int(seed), int(trajectory), CHANNELS[channel]])
    return np.random.Generator(np.random.Philox(key))


def white_noise(seed: int, trajectory: int, channel: str, n: int, dt: float,
                two_sided_psd: float) -> np.ndarray:
    """Sampled delta-correlated noise: per-sample variance psd/dt"""
    scale = np.sqrt(two_sided_psd / dt)
    return stream(seed, trajectory, channel).standard_normal(n) * scale
