"""
Formatting helpers for log lines and reports
"""

import math
from typing import Union

from ..config.constants import TWO_PI


def format_frequency(value_hz: Union[int, float]) -> str:
    """Human readable frequency in Hz/kHz/MHz"""
    try:
        value = float(value_hz)
    except (ValueError, TypeError):
        return str(value_hz)
    magnitude = abs(value)
    if magnitude >= 1e6:
        return f"{value / 1e6:.3f} MHz"
    elif magnitude >= 1e3:
        return f"{value / 1e3:.2f} kHz"
    return f"{value:.1f} Hz"


def format_angular(omega: float) -> str:
    """Angular frequency shown as Omega/2pi"""
    return format_frequency(omega / TWO_PI)


def format_angle(theta: float) -> str:
    """Angle in rad with its multiple of pi"""
    return f"{theta:.4f} rad ({theta / math.pi:.3f} pi)"


def format_db(ratio: float) -> str:
    if not ratio > 0:
        return "-inf dB"
    return f"{10.0 * math.log10(ratio):+.2f} dB"


def format_duration_ms(milliseconds: float) -> str:
    """Format duration in milliseconds to human readable format"""
    if milliseconds < 1000:
        return f"{milliseconds:.0f}ms"
    elif milliseconds < 60000:
        return f"{milliseconds/1000:.1f}s"
    else:
        return f"{milliseconds/60000:.1f}m"


def frequency_tag(value_hz: float) -> str:
    """Filename-safe tag such as '70p1kHz'"""
    return f"{value_hz / 1e3:.1f}kHz".replace(".", "p")
