"""Laws of driftless Brownian motion killed at an independent Exp(lambda) time T.

Notation: ``c = sqrt(2 lambda)``; ``I``/``S`` are the infimum/supremum on
[0, T], ``H_I``/``H_S`` the first times they are attained.  "Ordered" laws
are restricted to the event ``{H_I < H_S}``, which coincides with
``{D+_T >= D-_T}``.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special

from drawdown.analytic._hyper import (
    as_output,
    coth_minus_one,
    one_minus_sech,
    sech,
    v_kernel,
)
from drawdown.analytic.types import LawRecord
from drawdown.errors import DomainError


__all__ = [
    "exp_time_dplus_cdf",
    "v_function",
    "exp_time_joint_cdf",
    "exp_time_joint_survival_crossterm",
    "exp_time_cross_probability",
    "exp_time_joint_survival",
    "exp_time_joint_density",
    "ordered_joint_cdf",
    "ordered_dplus_density",
    "ordered_dplus_cdf",
    "ordered_dminus_cdf",
    "exp_time_ordered_laws",
    "inf_sup_density",
    "inf_density",
    "inf_first_density",
    "inf_terminal_density",
    "hinf_density",
    "hinf_cdf",
    "inf_sup_laws",
    "segment1_cdf",
    "segment2_cdf",
    "segment3_cdf",
    "segment_dminus_cdfs",
    "overshoot_density",
    "overshoot_cdf",
    "terminal_gap_density",
    "terminal_gap_cdf",
    "reduced_joint_density",
    "reduced_y_density",
    "reduced_y_survival",
    "reduced_variables",
    "reduced_xy_laws",
]


def _root(lam: float) -> float:
    if not lam > 0:
        raise DomainError("lambda must be > 0")
    return math.sqrt(2.0 * lam)


def _nonneg(**kw):
    for name, x in kw.items():
        if np.any(~(np.asarray(x, dtype=float) >= 0)):
            raise DomainError(f"{name} must be >= 0")


def _coth_exp(c, lo, hi):
    """exp(-(hi - lo) c coth(c lo)), with the lo = 0 and hi = inf limits."""
    lo = np.asarray(lo, dtype=float)
    gap = np.asarray(hi, dtype=float) - lo
    with np.errstate(all="ignore"):
        coth = 1.0 + coth_minus_one(c * lo)
        out = np.exp(-gap * c * coth)
    out = np.where(gap == 0, 1.0, out)
    return np.where(lo == 0, np.where(gap == 0, 1.0, 0.0), out)


# -- marginals ---------------------------------------------------------------


def exp_time_dplus_cdf(lam: float, alpha):
    """P(D+_T < alpha) = 1 - 1/cosh(alpha c); D-_T has the same law."""
    c = _root(lam)
    _nonneg(alpha=alpha)
    return as_output(one_minus_sech(c * np.asarray(alpha, dtype=float)))


# -- joint law of (D+_T, D-_T) ----------------------------------------------


def v_function(lam: float, alpha, beta):
    """The cross term v(alpha, beta) for alpha <= beta.

    ``v(alpha, beta) = P(D+_T > beta, D-_T < alpha) = P(D+_T < alpha, D-_T > beta)``.
    """
    c = _root(lam)
    _nonneg(alpha=alpha, beta=beta)
    alpha, beta = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float))
    if np.any(alpha > beta):
        raise DomainError("v(alpha, beta) needs alpha <= beta")
    with np.errstate(all="ignore"):
        out = v_kernel(c * alpha) * _coth_exp(c, alpha, beta)
    return as_output(np.where(alpha == 0, 0.0, out))


def exp_time_joint_cdf(lam: float, alpha, beta):
    """F(alpha, beta) = P(D+_T < alpha, D-_T < beta); symmetric in its arguments."""
    c = _root(lam)
    _nonneg(alpha=alpha, beta=beta)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    lo = np.minimum(alpha, beta)
    hi = np.maximum(alpha, beta)
    q = np.exp(-c * lo)
    with np.errstate(all="ignore"):
        # u(lo, hi) = (1 - sech) - v = (1 - sech) (1 - 2q/(1+q)^2 * exp(...))
        out = one_minus_sech(c * lo) * (1.0 - 2.0 * q / (1.0 + q) ** 2 * _coth_exp(c, lo, hi))
    out = np.where(lo == 0, 0.0, out)
    return as_output(np.clip(out, 0.0, 1.0))


def exp_time_joint_survival_crossterm(lam: float, alpha, beta):
    """v(alpha ^ beta, alpha v beta) = P(D+_T > alpha v beta, D-_T < alpha ^ beta).

    This equals ``P(D+_T > alpha, D-_T < beta)`` only when ``alpha >= beta``;
    :func:`exp_time_cross_probability` covers both orderings.
    """
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    _nonneg(alpha=alpha, beta=beta)
    return v_function(lam, np.minimum(alpha, beta), np.maximum(alpha, beta))


def exp_time_cross_probability(lam: float, alpha, beta):
    """P(D+_T > alpha, D-_T < beta) for any ordering of the arguments."""
    c = _root(lam)
    _nonneg(alpha=alpha, beta=beta)
    out = one_minus_sech(c * np.asarray(beta, dtype=float)) - np.asarray(exp_time_joint_cdf(lam, alpha, beta))
    return as_output(np.clip(out, 0.0, 1.0))


def exp_time_joint_survival(lam: float, alpha, beta):
    """P(D+_T > alpha, D-_T > beta) = 1/cosh(c (alpha v beta)) - v(alpha ^ beta, alpha v beta)."""
    c = _root(lam)
    _nonneg(alpha=alpha, beta=beta)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    lo = np.minimum(alpha, beta)
    hi = np.maximum(alpha, beta)
    out = sech(c * hi) - np.asarray(v_function(lam, lo, hi))
    return as_output(np.clip(out, 0.0, 1.0))


def exp_time_joint_density(lam: float, alpha, beta):
    """Density f(alpha v beta, alpha ^ beta) of (D+_T, D-_T) at (alpha, beta).

    Zero outside the open quadrant, so it can be handed to quadrature as is.
    """
    c = _root(lam)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if np.any(np.isnan(alpha)) or np.any(np.isnan(beta)):
        raise DomainError("alpha and beta must be numbers")
    x = np.maximum(alpha, beta)
    y = np.minimum(alpha, beta)
    inside = y > 0
    y = np.where(inside, y, 1.0)
    q = np.exp(-c * y)
    with np.errstate(all="ignore"):
        pref = 2.0 * lam * 4.0 * q * q / (1.0 + q) ** 4
        inv_sh = 2.0 * q / -np.expm1(-2.0 * c * y)
        out = pref * (2.0 + (x - y) * c * inv_sh) * _coth_exp(c, y, x)
    return as_output(np.where(inside, np.nan_to_num(out, nan=0.0, posinf=0.0), 0.0))


# -- laws on {H_I < H_S} ------------------------------------------------------


def ordered_joint_cdf(lam: float, alpha, beta):
    """P(D+_T < alpha, D-_T < beta, H_I < H_S)."""
    c = _root(lam)
    _nonneg(alpha=alpha, beta=beta)
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    lo = np.minimum(alpha, beta)
    with np.errstate(all="ignore"):
        first = 0.5 * np.tanh(0.5 * c * lo) ** 2
        second = v_kernel(c * beta) * (1.0 - _coth_exp(c, beta, np.maximum(alpha, beta)))
    out = first + np.where(beta < alpha, second, 0.0)
    return as_output(out)


def ordered_dplus_density(lam: float, alpha):
    """Density of D+_T on {H_I < H_S}: c (cosh - 1)^2 / sinh^3 at alpha c."""
    c = _root(lam)
    _nonneg(alpha=alpha)
    h = 0.5 * c * np.asarray(alpha, dtype=float)
    # (ch x - 1)^2 / sh^3 x = sh(x/2) / (2 ch^3(x/2))
    return as_output(0.5 * c * np.tanh(h) * sech(h) ** 2)


def ordered_dplus_cdf(lam: float, alpha):
    """P(D+_T < alpha, H_I < H_S) = (cosh - 1) / (2 (cosh + 1))."""
    c = _root(lam)
    _nonneg(alpha=alpha)
    return as_output(0.5 * np.tanh(0.5 * c * np.asarray(alpha, dtype=float)) ** 2)


def ordered_dminus_cdf(lam: float, beta):
    """P(D-_T < beta, H_I < H_S) = (cosh - 1)(cosh + 2) / (2 (cosh + 1) cosh)."""
    c = _root(lam)
    _nonneg(beta=beta)
    x = c * np.asarray(beta, dtype=float)
    return as_output(0.5 * np.tanh(0.5 * x) ** 2 * (1.0 + 2.0 * sech(x)))


def exp_time_ordered_laws(lam: float, alpha: float, beta: float) -> LawRecord:
    """All four laws on {H_I < H_S} evaluated at (alpha, beta)."""
    return LawRecord(
        {
            "joint_cdf": ordered_joint_cdf(lam, alpha, beta),
            "dplus_density": ordered_dplus_density(lam, alpha),
            "dplus_cdf": ordered_dplus_cdf(lam, alpha),
            "dminus_cdf": ordered_dminus_cdf(lam, beta),
        }
    )


# -- infimum / supremum -------------------------------------------------------


def _check_ab(a, b):
    if np.any(~(np.asarray(a, dtype=float) < 0)):
        raise DomainError("a must be < 0")
    if np.any(~(np.asarray(b, dtype=float) > 0)):
        raise DomainError("b must be > 0")


def inf_sup_density(lam: float, a, b):
    """Joint density of (I_T, S_T): lam cosh((b + a) c/2) / cosh^3((b - a) c/2)."""
    c = _root(lam)
    _check_ab(a, b)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    s = np.abs(0.5 * (b + a) * c)
    d = 0.5 * (b - a) * c
    return as_output(4.0 * lam * np.exp(s - 3.0 * d) * (1.0 + np.exp(-2.0 * s)) / (1.0 + np.exp(-2.0 * d)) ** 3)


def inf_density(lam: float, a):
    """Density of I_T: c exp(a c) on a < 0."""
    c = _root(lam)
    if np.any(~(np.asarray(a, dtype=float) < 0)):
        raise DomainError("a must be < 0")
    return as_output(c * np.exp(c * np.asarray(a, dtype=float)))


def inf_first_density(lam: float, a, b):
    """Density of (I_T, S_T) on {H_I < H_S}:
    2 lam (cosh((b-a)c) - 1) sinh(b c) / sinh^3((b-a)c)."""
    c = _root(lam)
    _check_ab(a, b)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    r = np.exp(-2.0 * c * b)
    num = 2.0 * np.expm1(-c * (b - a)) ** 2 * (1.0 - r)
    den = (-np.expm1(-2.0 * c * (b - a))) ** 3
    return as_output(2.0 * lam * num / den * np.exp(c * (2.0 * a - b)))


def inf_terminal_density(lam: float, a, z):
    """Joint density of (I_T, X_T): 2 lam exp(2 a c) exp(-z c) for a < 0, z > a."""
    c = _root(lam)
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=float)
    if np.any(~(a < 0)):
        raise DomainError("a must be < 0")
    return as_output(np.where(z > a, 2.0 * lam * np.exp(2.0 * a * c - z * c), 0.0))


def hinf_density(lam: float, s):
    """Density of H_I (and of T - H_I): Gamma(1/2, lam), sqrt(lam/(pi s)) exp(-lam s)."""
    _root(lam)
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sqrt(lam / (math.pi * s)) * np.exp(-lam * s)
    return as_output(np.where(s > 0, out, 0.0))


def hinf_cdf(lam: float, s):
    _root(lam)
    s = np.asarray(s, dtype=float)
    return as_output(special.gammainc(0.5, lam * np.maximum(s, 0.0)))


def inf_sup_laws(lam: float, a: float, b: float, z: float | None = None, s: float | None = None) -> LawRecord:
    """Densities of the infimum/supremum family at (a, b); z and s are optional."""
    values = {
        "inf_sup_density": inf_sup_density(lam, a, b),
        "inf_density": inf_density(lam, a),
        "inf_first_density": inf_first_density(lam, a, b),
    }
    if z is not None:
        values["inf_terminal_density"] = inf_terminal_density(lam, a, z)
    if s is not None:
        values["hinf_density"] = hinf_density(lam, s)
    return LawRecord(values)


# -- conditional drawdowns of the three segments -----------------------------


def _segment_args(lam, d, a, b):
    c = _root(lam)
    _check_ab(a, b)
    d, a, b = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (d, a, b)))
    return c, d, a, b


def segment1_cdf(lam: float, d, a, b):
    """f1: P(D- before H_I < d | H_I < H_S, I_T = a, S_T = b) for -a < d < b - a."""
    c, d, a, b = _segment_args(lam, d, a, b)
    with np.errstate(all="ignore"):
        out = (
            np.expm1(-2.0 * c * (a + d))
            * np.expm1(-2.0 * c * (b - a))
            / (np.expm1(-2.0 * c * d) * np.expm1(-2.0 * c * b))
        )
    out = np.where(d <= -a, 0.0, np.where(d >= b - a, 1.0, out))
    return as_output(np.clip(out, 0.0, 1.0))


def segment2_cdf(lam: float, d, a, b):
    """f2: law of the maximum decrease between H_I and H_S, 0 < d < b - a."""
    c, d, a, b = _segment_args(lam, d, a, b)
    span = b - a
    with np.errstate(all="ignore"):
        # in logs: as d -> 0 the ratio blows up while the exponential dies faster
        log_ratio = np.log(-np.expm1(-2.0 * c * span)) - np.log(-np.expm1(-2.0 * c * d))
        out = np.exp(log_ratio - (span - d) * c * coth_minus_one(c * d))
    out = np.where(d <= 0, 0.0, np.where(d >= span, 1.0, out))
    return as_output(np.clip(out, 0.0, 1.0))


def segment3_cdf(lam: float, d, a, b):
    """f3: law of the maximum decrease after H_S, 0 < d < b - a."""
    c, d, a, b = _segment_args(lam, d, a, b)
    span = b - a
    with np.errstate(all="ignore"):
        out = np.tanh(0.5 * c * d) / np.tanh(0.5 * c * span)
    out = np.where(d <= 0, 0.0, np.where(d >= span, 1.0, out))
    return as_output(np.clip(out, 0.0, 1.0))


def segment_dminus_cdfs(lam: float, a: float, b: float, d: float) -> tuple[float, float, float]:
    """(f1, f2, f3) at d; each clamps to 0 below and 1 above its range."""
    return (segment1_cdf(lam, d, a, b), segment2_cdf(lam, d, a, b), segment3_cdf(lam, d, a, b))


def overshoot_density(lam: float, a, b, x):
    """Density of S_T - X_T given S_T = b, I_T = a, H_I < H_S: truncated exponential."""
    c = _root(lam)
    _check_ab(a, b)
    span = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    out = c * np.exp(-c * np.maximum(x, 0.0)) / -np.expm1(-c * span)
    return as_output(np.where((x > 0) & (x < span), out, 0.0))


def overshoot_cdf(lam: float, a, b, x):
    c = _root(lam)
    _check_ab(a, b)
    span = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    x = np.clip(np.asarray(x, dtype=float), 0.0, span)
    return as_output(np.expm1(-c * x) / np.expm1(-c * span))


def terminal_gap_density(lam: float, a, b, x):
    """Density of S_T - X_T given S_T = b, I_T = a, H_I < H_S.

    After H_S the path is Brownian motion from b killed at T, H_a and H_b
    and conditioned to die at T, so X_T has density proportional to the
    killed Green function sinh((x - a) sqrt(2 lambda)).  This differs from
    the truncated exponential :func:`overshoot_density`.
    """
    c = _root(lam)
    _check_ab(a, b)
    span = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    x = np.asarray(x, dtype=float)
    inside = (x > 0) & (x < span)
    r = np.where(inside, span - x, 0.0)
    # c sinh(c r) / (cosh(c L) - 1), written in exponentials of -c(L - r)
    with np.errstate(over="ignore"):
        out = c * np.exp(-c * (span - r)) * -np.expm1(-2.0 * c * r) / np.expm1(-c * span) ** 2
    return as_output(np.where(inside, out, 0.0))


def terminal_gap_cdf(lam: float, a, b, x):
    """CDF of :func:`terminal_gap_density`: (cosh cL - cosh c(L - x)) / (cosh cL - 1)."""
    c = _root(lam)
    _check_ab(a, b)
    span = np.asarray(b, dtype=float) - np.asarray(a, dtype=float)
    x = np.clip(np.asarray(x, dtype=float), 0.0, span)
    # (1 - e^{-cx})(1 - e^{-c(2L - x)}) / (1 - e^{-cL})^2
    return as_output(np.expm1(-c * x) * np.expm1(-c * (2.0 * span - x)) / np.expm1(-c * span) ** 2)


# -- reduced variables --------------------------------------------------------


def reduced_joint_density(x, y):
    """Density of (X, Y) given H_I < H_S: 2 (2 + x) / (1 + y)^2 exp(-x y)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return as_output(np.where((x > 0) & (y > 1), 2.0 * (2.0 + x) / (1.0 + y) ** 2 * np.exp(-x * y), 0.0))


def reduced_y_density(y):
    y = np.asarray(y, dtype=float)
    with np.errstate(all="ignore"):
        out = 2.0 * (2.0 * y + 1.0) / (y * (1.0 + y)) ** 2
    return as_output(np.where(y > 1, out, 0.0))


def reduced_y_survival(u):
    u = np.asarray(u, dtype=float)
    with np.errstate(all="ignore"):
        out = 2.0 / (u * (1.0 + u))
    return as_output(np.where(u > 1, out, 1.0))


def reduced_variables(lam: float, d_plus, d_minus):
    """Map (D+_T, D-_T) on {H_I < H_S} to X = c (D+ - D-)/sinh(c D-), Y = cosh(c D-)."""
    c = _root(lam)
    d_plus = np.asarray(d_plus, dtype=float)
    d_minus = np.asarray(d_minus, dtype=float)
    return c * (d_plus - d_minus) / np.sinh(c * d_minus), np.cosh(c * d_minus)


def reduced_xy_laws(x: float, y: float) -> LawRecord:
    if not x > 0:
        raise DomainError("x must be > 0")
    if not y > 1:
        raise DomainError("y must be > 1")
    return LawRecord(
        {
            "joint_density": reduced_joint_density(x, y),
            "y_density": reduced_y_density(y),
            "y_survival": reduced_y_survival(y),
        }
    )
