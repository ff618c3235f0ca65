"""
Discrete propagators of the damped oscillator and their IIR realisation

Each scheme is a linear update x[n+1] = M x[n] + G f[n] on x = (q, p), with
f the total force sample. The update is evaluated as a second-order IIR
filter per coordinate, seeded with the fictitious state M^-1 x[0] so that the
first output reproduces M x[0] + G f[0] exactly.
"""

from typing import Tuple

import numpy as np
from scipy.linalg import expm
from scipy.signal import lfilter, lfiltic

from ..utils.exceptions import ConfigurationError


def propagator(omega_m: float, gamma_m: float, dt: float,
               scheme: str = "euler") -> Tuple[np.ndarray, np.ndarray]:
    """Transition matrix M and force gain G for one step"""
    if scheme == "euler":
        # momentum first, then position with the updated momentum
        w = omega_m * dt
        damp = 1.0 - gamma_m * dt
        m = np.array([[1.0 - w ** 2, w * damp],
                      [-w, damp]])
        g = np.array([omega_m * dt ** 2, dt])
        return m, g
    if scheme == "exact":
        drift = np.array([[0.0, omega_m],
                          [-omega_m, -gamma_m]])
        m = expm(drift * dt)
        return m, m @ np.array([0.0, dt])
    raise ConfigurationError(f"Unknown integrator '{scheme}'")


def _filter_coordinate(force: np.ndarray, b: np.ndarray, a: np.ndarray,
                       current: float, previous: float) -> np.ndarray:
    zi = lfiltic(b, a, y=[current, previous])
    out, _ = lfilter(b, a, force, zi=zi)
    return out


def propagate(m: np.ndarray, g: np.ndarray, force: np.ndarray,
              q0: float, p0: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Run the linear update over len(force) samples.

    Returns q and p with q[0] = q0, p[0] = p0; the last force sample is
    not used.
    """
    trace = m[0, 0] + m[1, 1]
    det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
    if not det > 0:
        raise ConfigurationError(f"Propagator is singular (det = {det})")
    a = np.array([1.0, -trace, det])
    b_q = np.array([g[0], m[0, 1] * g[1] - m[1, 1] * g[0]])
    b_p = np.array([g[1], m[1, 0] * g[0] - m[0, 0] * g[1]])

    q_prev = (m[1, 1] * q0 - m[0, 1] * p0) / det
    p_prev = (-m[1, 0] * q0 + m[0, 0] * p0) / det

    n = len(force)
    q = np.empty(n)
    p = np.empty(n)
    q[0], p[0] = q0, p0
    if n > 1:
        q[1:] = _filter_coordinate(force[:-1], b_q, a, q0, q_prev)
        p[1:] = _filter_coordinate(force[:-1], b_p, a, p0, p_prev)
    return q, p
