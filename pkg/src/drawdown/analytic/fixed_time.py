"""P(D-_t > a) for driftless Brownian motion at a fixed time t.

``{D-_t > a}`` has the same probability as the two-sided exit
``{H_a ^ H_{-a} < t}``.  Two series are available: an alternating sum of
Gaussian tails, which converges fastest for small ``t / a^2``, and the
reflection (method of images) sum, which is preferable for large ``t / a^2``.
"""

from __future__ import annotations

import math

from scipy import special

from drawdown.analytic.types import EvalResult
from drawdown.errors import ConvergenceError, DomainError

__all__ = [
    "MAX_TERMS",
    "FORM_SWITCH",
    "fixed_time_dminus_survival",
    "survival_tail_series",
    "survival_image_series",
]

MAX_TERMS = 100_000
# t / a^2 at or below which the tail series is used.
FORM_SWITCH = 1.0


def _check(t, a, tol):
    for name, x in (("t", t), ("a", a), ("tol", tol)):
        if not (x > 0):
            raise DomainError(f"{name} must be > 0")


def survival_tail_series(t: float, a: float, tol: float = 1e-13) -> EvalResult:
    """2 sum_k (-1)^k erfc((2k+1) a / sqrt(2t)).

    Each term is twice the probability that one side is hit before ``t``
    after ``k`` reflections.  Summation stops once the next term is below
    ``tol / 2``; the terms decrease, so that term bounds the remainder.
    """
    _check(t, a, tol)
    scale = a / math.sqrt(2.0 * t)
    total = 0.0
    for k in range(MAX_TERMS):
        term = 2.0 * special.erfc((2 * k + 1) * scale)
        total += term if k % 2 == 0 else -term
        nxt = 2.0 * special.erfc((2 * k + 3) * scale)
        if nxt < tol / 2:
            return EvalResult.of(min(max(total, 0.0), 1.0), abs_err_bound=nxt)
    raise ConvergenceError(f"tail series did not reach tol={tol} in {MAX_TERMS} terms")


def survival_image_series(t: float, a: float, tol: float = 1e-13) -> EvalResult:
    """1 - sum_{k in Z} [g(4ka) - g(4ka + 2a)] with g(c) = P(c - a < B_t < c + a).

    The images are added in symmetric pairs until the mass beyond
    ``(4K + 1) a`` is below ``tol``.
    """
    _check(t, a, tol)
    root = math.sqrt(t)

    def g(c):
        # Phi((a + c)/sqrt t) - Phi((c - a)/sqrt t), written through the smaller tail
        hi = (c + a) / root
        lo = (c - a) / root
        if lo > 0:
            return special.ndtr(-lo) - special.ndtr(-hi)
        return special.ndtr(hi) - special.ndtr(lo)

    inside = g(0.0) - g(2.0 * a)
    for k in range(1, MAX_TERMS):
        inside += g(4.0 * k * a) - g(4.0 * k * a + 2.0 * a)
        inside += g(-4.0 * k * a) - g(-4.0 * k * a + 2.0 * a)
        bound = 2.0 * special.ndtr(-(4 * k + 1) * a / root)
        if bound < tol:
            return EvalResult.of(min(max(1.0 - inside, 0.0), 1.0), abs_err_bound=bound)
    raise ConvergenceError(f"image series did not reach tol={tol} in {MAX_TERMS} terms")


def fixed_time_dminus_survival(t: float, a: float, tol: float = 1e-12) -> EvalResult:
    """P_0(D-_t > a), using whichever series converges faster at ``t / a^2``."""
    _check(t, a, tol)
    if math.isinf(a):
        return EvalResult.of(0.0)
    if t / (a * a) <= FORM_SWITCH:
        return survival_tail_series(t, a, tol)
    return survival_image_series(t, a, tol)
