"""Closed-form laws of the maximum increase and decrease of BM(mu).

All functions are pure and vectorize over array arguments where that makes
sense; scalar input gives a Python float.
"""

from __future__ import annotations

from drawdown.analytic.fixed_time import (
    fixed_time_dminus_survival,
    survival_image_series,
    survival_tail_series,
)
from drawdown.analytic.hitting import (
    bes3_dminus_cdf,
    hitting_dminus_cdf,
    hitting_dminus_constrained_cdf,
    hitting_joint_cdf,
    hitting_total_mass,
)
from drawdown.analytic.killed import *  # noqa: F401,F403
from drawdown.analytic.killed import __all__ as _killed_all
from drawdown.analytic.moments import dirichlet_beta, dplus_moment, moments_and_correlation
from drawdown.analytic.scale import (
    exp_time_marginal_survival,
    hit_before,
    log_exp_time_marginal_survival,
    log_psi,
    psi,
    scale,
)
from drawdown.analytic.types import EvalResult, HittingSpec, KillingRate, LawRecord, ModelParams

__all__ = [
    "EvalResult",
    "HittingSpec",
    "KillingRate",
    "LawRecord",
    "ModelParams",
    "bes3_dminus_cdf",
    "dirichlet_beta",
    "dplus_moment",
    "exp_time_marginal_survival",
    "fixed_time_dminus_survival",
    "hit_before",
    "hitting_dminus_cdf",
    "hitting_dminus_constrained_cdf",
    "hitting_joint_cdf",
    "hitting_total_mass",
    "log_exp_time_marginal_survival",
    "log_psi",
    "moments_and_correlation",
    "psi",
    "scale",
    "survival_image_series",
    "survival_tail_series",
    *_killed_all,
]
