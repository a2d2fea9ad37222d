"""Scale function, two-sided exit probabilities and exponential-time marginals."""

from __future__ import annotations

import math

import numpy as np

from drawdown.analytic._hyper import LOG_SWITCH, as_output
from drawdown.errors import DomainError

__all__ = [
    "SERIES_SWITCH",
    "scale",
    "inv_scale",
    "scale_ratio",
    "hit_before",
    "log_psi",
    "psi",
    "exp_time_marginal_survival",
    "log_exp_time_marginal_survival",
]

# Below this |mu * x| the scale function is evaluated by its Taylor series.
SERIES_SWITCH = 1e-8


def scale(mu: float, x):
    """Scale function S(x) = (1 - exp(-2 mu x)) / (2 mu) of BM(mu), S = x at mu = 0."""
    x = np.asarray(x, dtype=float)
    t = mu * x
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        direct = -np.expm1(-2.0 * t) / (2.0 * mu) if mu != 0 else x
        series = x - t * x + (2.0 / 3.0) * t * t * x
    return as_output(np.where(np.abs(t) < SERIES_SWITCH, series, direct))


def inv_scale(mu: float, x):
    """1 / S(x) for x > 0 without overflow (tends to 0 or 2|mu| as x grows)."""
    x = np.asarray(x, dtype=float)
    m = abs(mu)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        if mu == 0:
            out = 1.0 / x
        elif mu > 0:
            out = 2.0 * m / -np.expm1(-2.0 * m * x)
        else:
            out = 2.0 * m * np.exp(-2.0 * m * x) / -np.expm1(-2.0 * m * x)
        small = np.abs(mu * x) < SERIES_SWITCH
        out = np.where(small, 1.0 / (x - mu * x * x), out)
    return as_output(out)


def scale_ratio(mu: float, x, y):
    """S(x) / S(y) for x, y > 0, stable for large |mu| x."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    m = abs(mu)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        if mu == 0:
            out = x / y
        elif mu > 0:
            out = np.expm1(-2.0 * m * x) / np.expm1(-2.0 * m * y)
        else:
            out = np.exp(2.0 * m * (x - y)) * np.expm1(-2.0 * m * x) / np.expm1(-2.0 * m * y)
        small = (np.abs(mu * x) < SERIES_SWITCH) & (np.abs(mu * y) < SERIES_SWITCH)
        out = np.where(small, x * (1.0 - mu * x) / (y * (1.0 - mu * y)), out)
    return as_output(out)


def hit_before(mu: float, x, a: float, b: float):
    """P_x(H_a < H_b) for BM(mu) started at x in [a, b]."""
    if not a < b:
        raise DomainError("need a < b")
    x = np.asarray(x, dtype=float)
    if np.any(x < a) or np.any(x > b):
        raise DomainError("x must lie in [a, b]")
    # S(b) - S(x) = exp(-2 mu x) S(b - x)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        out = np.exp(-2.0 * mu * (x - a)) * np.asarray(scale(mu, b - x)) / scale(mu, b - a)
        out = np.where(x <= a, 1.0, np.where(x >= b, 0.0, out))
    return as_output(np.clip(out, 0.0, 1.0))


def _check_psi(a, lam):
    if not lam > 0:
        raise DomainError("lambda must be > 0")
    if np.any(np.asarray(a) < 0):
        raise DomainError("a must be >= 0")


def log_psi(a, nu: float, lam: float):
    """log of psi_lambda(a; nu), finite for arbitrarily large a."""
    _check_psi(a, lam)
    a = np.asarray(a, dtype=float)
    k = math.sqrt(2.0 * lam + nu * nu)
    e = np.exp(-2.0 * a * k)
    inner = 0.5 * (1.0 + e) + 0.5 * (nu / k) * (-np.expm1(-2.0 * a * k))
    return as_output(-nu * a + a * k + np.log(inner))


def psi(a, nu: float, lam: float):
    """psi_lambda(a; nu) = e^{-nu a} (cosh(a k) + (nu/k) sinh(a k)), k = sqrt(2 lam + nu^2).

    Beyond ``a k > 700`` the value is formed from :func:`log_psi` (and may be
    ``inf``); use :func:`log_psi` directly there.
    """
    _check_psi(a, lam)
    a = np.asarray(a, dtype=float)
    k = math.sqrt(2.0 * lam + nu * nu)
    big = a * k > LOG_SWITCH
    with np.errstate(over="ignore"):
        safe = np.where(big, 0.0, a)
        direct = np.exp(-nu * safe) * (np.cosh(safe * k) + (nu / k) * np.sinh(safe * k))
        out = np.where(big, np.exp(np.asarray(log_psi(np.where(big, a, 0.0), nu, lam))), direct)
    return as_output(out)


def _side_drift(mu: float, side: str) -> float:
    if side == "increase":
        return mu
    if side == "decrease":
        return -mu
    raise DomainError("side must be 'increase' or 'decrease'")


def exp_time_marginal_survival(lam: float, mu: float, a, side: str = "increase"):
    """P(D+_T > a) = 1/psi(a; mu) or P(D-_T > a) = 1/psi(a; -mu), T ~ Exp(lam)."""
    return as_output(np.exp(-np.asarray(log_psi(a, _side_drift(mu, side), lam))))


def log_exp_time_marginal_survival(lam: float, mu: float, a, side: str = "increase"):
    return as_output(-np.asarray(log_psi(a, _side_drift(mu, side), lam)))
