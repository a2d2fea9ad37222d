"""Goodness-of-fit statistics with fixed thresholds.

Every check compares a statistic with a threshold made of a sampling part
(asymptotic critical value at level ``alpha``) plus an optional declared
allowance for discretization bias.  A check passes when the statistic is
strictly below the threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special, stats

from drawdown.errors import DomainError, InsufficientSampleError

__all__ = [
    "KS_CRITICAL",
    "KsResult",
    "StatResult",
    "ks_critical",
    "ks_one_sample",
    "ks_two_sample",
    "pivotal_uniform_check",
    "correlation_check",
    "rank_product_check",
    "chi_square_check",
    "grid_deviation",
]

# Asymptotic Kolmogorov critical values c(alpha): P(sqrt(n) D_n > c) = alpha.
KS_CRITICAL = {0.01: 1.628, 0.05: 1.358, 0.10: 1.224}
MIN_KS_SAMPLES = 10


def ks_critical(alpha: float) -> float:
    if alpha in KS_CRITICAL:
        return KS_CRITICAL[alpha]
    if not 0 < alpha < 1:
        raise DomainError("alpha must lie in (0, 1)")
    return float(special.kolmogi(alpha))


@dataclass(frozen=True)
class KsResult:
    """Kolmogorov-Smirnov outcome; ``m`` is set for two-sample tests."""

    statistic: float
    n: int
    threshold: float
    passed: bool
    m: int | None = None
    allowance: float = 0.0


@dataclass(frozen=True)
class StatResult:
    """Outcome of a non-KS check (correlation, chi-square, moment)."""

    statistic: float
    threshold: float
    passed: bool
    n: int
    df: int | None = None


def _sorted_finite(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=float).ravel()
    if np.any(np.isnan(x)):
        raise DomainError("samples contain NaN")
    return np.sort(x)


def ks_one_sample(
    samples,
    cdf: Callable[[np.ndarray], np.ndarray],
    alpha: float = 0.01,
    allowance: float = 0.0,
    censor_at: float | None = None,
) -> KsResult:
    """One-sample KS distance sup |F_n - F| against a reference CDF.

    With ``censor_at = c`` values at or above ``c`` (including ``inf``)
    are only known to exceed ``c``; the supremum is then taken over
    ``x < c``, where the empirical CDF is still exact.
    """
    x = _sorted_finite(samples)
    n = x.size
    if n < MIN_KS_SAMPLES:
        raise DomainError(f"KS needs at least {MIN_KS_SAMPLES} samples, got {n}")
    if censor_at is not None:
        x = x[x < censor_at]
    k = x.size
    stat = 0.0
    if k:
        f = np.clip(np.asarray(cdf(x), dtype=float), 0.0, 1.0)
        i = np.arange(1, k + 1)
        stat = max(float(np.max(i / n - f)), float(np.max(f - (i - 1) / n)))
    if censor_at is not None and math.isfinite(censor_at):
        stat = max(stat, abs(k / n - float(cdf(np.array([censor_at]))[0])))
    thr = ks_critical(alpha) / math.sqrt(n) + allowance
    return KsResult(stat, n, thr, stat < thr, allowance=allowance)


def ks_two_sample(x, y, alpha: float = 0.01, allowance: float = 0.0) -> KsResult:
    """Two-sample KS distance with threshold c(alpha) sqrt((n + m)/(n m))."""
    a = _sorted_finite(x)
    b = _sorted_finite(y)
    n, m = a.size, b.size
    if min(n, m) < MIN_KS_SAMPLES:
        raise DomainError(f"KS needs at least {MIN_KS_SAMPLES} samples per side")
    stat = float(stats.ks_2samp(a, b, method="asymp").statistic)
    thr = ks_critical(alpha) * math.sqrt((n + m) / (n * m)) + allowance
    return KsResult(stat, n, thr, stat < thr, m=m, allowance=allowance)


def pivotal_uniform_check(
    samples,
    conditional_cdf: Callable[..., np.ndarray],
    conditions: tuple = (),
    alpha: float = 0.01,
    allowance: float = 0.0,
) -> KsResult:
    """Map each sample through its own conditional CDF and test uniformity.

    ``conditions`` are arrays aligned with ``samples`` (for example the
    infimum and supremum of each path); ``conditional_cdf(value, *conds)``
    is evaluated element-wise.
    """
    u = np.asarray(conditional_cdf(np.asarray(samples, dtype=float), *conditions), dtype=float)
    return ks_one_sample(u, lambda v: np.clip(v, 0.0, 1.0), alpha, allowance)


def correlation_check(x, y, k: float = 4.0) -> StatResult:
    """Independence proxy: Pearson |r| < k / sqrt(n)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    if n < MIN_KS_SAMPLES or y.size != n:
        raise DomainError("need two aligned samples of size >= 10")
    r = float(np.corrcoef(x, y)[0, 1])
    thr = k / math.sqrt(n)
    return StatResult(abs(r), thr, abs(r) < thr, n)


def _product_uniform_cdf(z):
    z = np.clip(z, 1e-300, 1.0)
    return z - z * np.log(z)


def rank_product_check(x, y, alpha: float = 0.01) -> KsResult:
    """Independence check on rank transforms.

    With ``U``, ``V`` the normalized ranks, independence makes ``U V`` the
    product of two independent uniforms, whose CDF is ``z - z log z``.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.size
    u = stats.rankdata(x) / (n + 1)
    v = stats.rankdata(y) / (n + 1)
    return ks_one_sample(u * v, _product_uniform_cdf, alpha)


def chi_square_check(observed, expected, alpha: float = 0.01, min_expected: float = 20.0) -> StatResult:
    """Pearson chi-square goodness of fit over cells with given expectations.

    Raises :class:`InsufficientSampleError` if any expected count is below
    ``min_expected``.
    """
    o = np.asarray(observed, dtype=float).ravel()
    e = np.asarray(expected, dtype=float).ravel()
    if o.shape != e.shape:
        raise DomainError("observed and expected must have the same shape")
    if np.any(e < min_expected):
        raise InsufficientSampleError(
            f"smallest expected cell count {float(e.min()):.3g} is below {min_expected}"
        )
    stat = float(np.sum((o - e) ** 2 / e))
    df = o.size - 1
    thr = float(stats.chi2.ppf(1.0 - alpha, df))
    return StatResult(stat, thr, stat < thr, int(o.sum()), df)


def grid_deviation(empirical, reference, n: int, k: float = 4.0, allowance: float = 0.0) -> StatResult:
    """Max |empirical - reference| over a grid of probabilities, against k / sqrt(n)."""
    d = float(np.max(np.abs(np.asarray(empirical, dtype=float) - np.asarray(reference, dtype=float))))
    thr = k / math.sqrt(n) + allowance
    return StatResult(d, thr, d < thr, n)
