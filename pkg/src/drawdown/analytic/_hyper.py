"""Overflow-free hyperbolic building blocks.

Everything is written in terms of ``q = exp(-|x|)`` so that arguments far
beyond 700 neither overflow nor lose the ratios the laws are made of.
"""

from __future__ import annotations

import math

import numpy as np

LOG2 = math.log(2.0)
# Above this argument the textbook cosh/sinh overflow in double precision.
LOG_SWITCH = 700.0


def as_output(x):
    """Return a Python float for 0-d input, the array otherwise."""
    x = np.asarray(x, dtype=float)
    return float(x) if x.ndim == 0 else x


def sech(x):
    x = np.abs(np.asarray(x, dtype=float))
    q = np.exp(-x)
    return 2.0 * q / (1.0 + q * q)


def one_minus_sech(x):
    """1 - 1/cosh(x) without cancellation near 0."""
    x = np.abs(np.asarray(x, dtype=float))
    q = np.exp(-x)
    return np.expm1(-x) ** 2 / (1.0 + q * q)


def tanh_half(x):
    """tanh(x/2) = (cosh x - 1)/sinh x."""
    return np.tanh(0.5 * np.asarray(x, dtype=float))


def coth_minus_one(x):
    """coth(x) - 1 for x > 0 (``inf`` at 0)."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return 2.0 * np.exp(-2.0 * x) / -np.expm1(-2.0 * x)


def log_cosh(x):
    x = np.abs(np.asarray(x, dtype=float))
    return x + np.log1p(np.exp(-2.0 * x)) - LOG2


def log_sinh(x):
    """log(sinh x) for x > 0."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        return x + np.log(-np.expm1(-2.0 * x)) - LOG2


def sinh_ratio(x, y):
    """sinh(x)/sinh(y) for x, y > 0, stable for large arguments."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.exp(x - y) * np.expm1(-2.0 * x) / np.expm1(-2.0 * y)


def v_kernel(x):
    """(cosh x - 1) / (cosh x (cosh x + 1)), written in q = exp(-x)."""
    x = np.abs(np.asarray(x, dtype=float))
    q = np.exp(-x)
    return 2.0 * q * np.expm1(-x) ** 2 / ((1.0 + q * q) * (1.0 + q) ** 2)
