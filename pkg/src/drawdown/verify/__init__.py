"""Statistical checks of the closed forms against simulation, and identity suites."""

from drawdown.verify.report import Check, SuiteReport, clean_json, dumps
from drawdown.verify.stats import (
    KS_CRITICAL,
    KsResult,
    StatResult,
    chi_square_check,
    correlation_check,
    grid_deviation,
    ks_critical,
    ks_one_sample,
    ks_two_sample,
    pivotal_uniform_check,
    rank_product_check,
)
from drawdown.verify.suites import (
    DISCRETIZATION_ALLOWANCE,
    SUITES,
    SuiteConfig,
    consistency_suite,
    decomposition_suite,
    formula_suite,
    moment_suite,
    run_suite,
    run_suites,
)

__all__ = [
    "Check",
    "SuiteReport",
    "clean_json",
    "dumps",
    "KS_CRITICAL",
    "KsResult",
    "StatResult",
    "chi_square_check",
    "correlation_check",
    "grid_deviation",
    "ks_critical",
    "ks_one_sample",
    "ks_two_sample",
    "pivotal_uniform_check",
    "rank_product_check",
    "DISCRETIZATION_ALLOWANCE",
    "SUITES",
    "SuiteConfig",
    "consistency_suite",
    "decomposition_suite",
    "formula_suite",
    "moment_suite",
    "run_suite",
    "run_suites",
]
