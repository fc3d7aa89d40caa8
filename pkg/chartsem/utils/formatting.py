"""
Number formatting shared by insights, queries and chart labels.
"""

import math

import numpy as np


def format_sig(value: float, digits: int = 4) -> str:
    """
    Render a number with a fixed count of significant digits.

    Trailing zeros are kept so the rendering is platform-stable,
    e.g. 120 -> "120.0", 5 -> "5.000", 1234567 -> "1235000.0".
    """
    value = float(value)
    if value == 0.0 or not math.isfinite(value):
        return "0.0" if value == 0.0 else str(value)
    text = np.format_float_positional(value, precision=digits, unique=False,
                                      fractional=False, trim='k')
    if text.endswith('.'):
        text += '0'
    return text


def format_tick(value: float) -> str:
    """Compact axis tick label (3 significant digits, no trailing zeros)."""
    value = float(value)
    if value == 0.0:
        return "0"
    text = np.format_float_positional(value, precision=3, unique=False,
                                      fractional=False, trim='-')
    return text
