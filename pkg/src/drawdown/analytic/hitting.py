"""Maximum decrease of BM(mu) and BES(3, mu) stopped at the first hitting of a level."""

from __future__ import annotations

import math

import numpy as np

from drawdown.analytic._hyper import as_output
from drawdown.analytic.scale import inv_scale, scale_ratio
from drawdown.errors import DomainError

__all__ = [
    "hitting_total_mass",
    "hitting_dminus_cdf",
    "hitting_dminus_constrained_cdf",
    "hitting_joint_cdf",
    "bes3_dminus_cdf",
]


def _positive(name, x):
    if np.any(~(np.asarray(x, dtype=float) > 0)):
        raise DomainError(f"{name} must be > 0")


def hitting_total_mass(mu: float, beta: float) -> float:
    """P(H_beta < inf) for BM(mu) from 0: 1 for mu >= 0, exp(-2|mu| beta) otherwise."""
    _positive("beta", beta)
    return 1.0 if mu >= 0 else math.exp(-2.0 * abs(mu) * beta)


def hitting_dminus_cdf(mu: float, beta: float, u):
    """P(D-_{H_beta} < u) = exp(-beta / S^{-mu}(u)).

    The jump intensity of excursions below the maximum deeper than ``u`` is
    ``1/S^{-mu}(u)``.  For ``mu < 0`` the level may never be reached and the
    law is defective: its mass is ``exp(-2|mu| beta)``.
    """
    _positive("beta", beta)
    _positive("u", u)
    u = np.asarray(u, dtype=float)
    return as_output(np.exp(-beta * np.asarray(inv_scale(-mu, u))))


def hitting_dminus_constrained_cdf(mu: float, alpha: float, beta: float, u):
    """P(D-_{H_beta} < u, H_beta < H_{-alpha}) for BM(mu) from 0.

    Three regimes: ``u <= alpha`` (floor not binding), ``alpha <= u <=
    alpha + beta`` and ``u >= alpha + beta`` (only the floor matters).
    """
    if not alpha >= 0:
        raise DomainError("alpha must be >= 0")
    _positive("beta", beta)
    _positive("u", u)
    u = np.asarray(u, dtype=float)
    with np.errstate(all="ignore"):
        low = np.exp(-beta * np.asarray(inv_scale(-mu, u)))
        if math.isinf(alpha):
            return as_output(low)
        mid = np.asarray(scale_ratio(mu, alpha, u)) * np.exp(
            -(beta + alpha - u) * np.asarray(inv_scale(-mu, u))
        )
        high = scale_ratio(mu, alpha, alpha + beta) if alpha > 0 else 0.0
        mid = np.where(alpha > 0, mid, 0.0)
        out = np.where(u <= alpha, low, np.where(u >= alpha + beta, high, mid))
    return as_output(np.clip(out, 0.0, 1.0))


def hitting_joint_cdf(mu: float, beta: float, u, v):
    """P(D-_{H_beta} < u, D+_{H_beta} < v) for mu >= 0 and v >= beta.

    Uses ``{D+_{H_beta} < v} = {H_beta < H_{-(v - beta)}}``, so this is the
    constrained law with floor depth ``v - beta``.
    """
    if mu < 0:
        raise DomainError("mu must be >= 0")
    _positive("beta", beta)
    v = np.asarray(v, dtype=float)
    if np.any(v < beta):
        raise DomainError("v must be >= beta")
    if v.ndim == 0:
        return hitting_dminus_constrained_cdf(mu, float(v) - beta, beta, u)
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), v)
    out = np.array([hitting_dminus_constrained_cdf(mu, vi - beta, beta, ui) for ui, vi in zip(u.ravel(), v.ravel())])
    return out.reshape(u.shape)


def bes3_dminus_cdf(mu: float, beta: float, u):
    """P(D-_{H_beta} < u) for BES(3, mu) started at 0, 0 < u <= beta.

    Evaluated as ``S^mu(beta)/S^mu(u) * exp(-(beta - u)/S^{-mu}(u))``, which is
    the same quantity as ``S^{-mu}(beta)/S^{-mu}(u) exp(-(beta-u)/S^{-mu}(u)
    - 2 mu (beta - u))`` without the overflowing ratio.
    """
    if mu < 0:
        raise DomainError("mu must be >= 0")
    _positive("beta", beta)
    u = np.asarray(u, dtype=float)
    if np.any(~(u > 0)) or np.any(u > beta):
        raise DomainError("u must lie in (0, beta]")
    with np.errstate(all="ignore"):
        out = np.asarray(scale_ratio(mu, beta, u)) * np.exp(-(beta - u) * np.asarray(inv_scale(-mu, u)))
    out = np.where(u >= beta, 1.0, out)
    return as_output(np.clip(out, 0.0, 1.0))
