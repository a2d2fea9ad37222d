"""Test statistics, reports and the analytic consistency suite."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from drawdown.errors import DomainError, InsufficientSampleError
from drawdown.verify import (
    Check,
    SuiteConfig,
    SuiteReport,
    chi_square_check,
    consistency_suite,
    correlation_check,
    dumps,
    ks_one_sample,
    ks_two_sample,
    moment_suite,
    pivotal_uniform_check,
    rank_product_check,
    run_suite,
    run_suites,
)

uniform_cdf = lambda x: np.clip(x, 0, 1)  # noqa: E731


class TestKs:
    def test_lattice_statistic_is_one_over_n(self):
        n = 1000
        r = ks_one_sample(np.arange(1, n + 1) / n, uniform_cdf)
        assert r.statistic == pytest.approx(1 / n)
        assert r.threshold == pytest.approx(1.628 / math.sqrt(n))
        assert r.passed

    def test_wrong_law_fails(self):
        u = np.random.default_rng(0).random(10_000)
        r = ks_one_sample(u, lambda x: x**2)
        assert r.statistic == pytest.approx(0.25, abs=0.02)
        assert not r.passed

    def test_inverse_transform_samples_pass(self):
        rng = np.random.default_rng(1)
        x = -np.log(rng.random(5000)) / 2.0
        assert ks_one_sample(x, lambda v: 1 - np.exp(-2 * v)).passed

    def test_allowance_widens_threshold(self):
        r = ks_one_sample(np.linspace(0.01, 1, 100), uniform_cdf, allowance=0.01)
        assert r.threshold == pytest.approx(0.1628 + 0.01)

    def test_too_few_samples(self):
        with pytest.raises(DomainError):
            ks_one_sample(np.arange(9) / 9, uniform_cdf)

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            ks_one_sample(np.r_[np.linspace(0, 1, 20), np.nan], uniform_cdf)

    def test_censoring(self):
        rng = np.random.default_rng(2)
        x = rng.random(4000) * 2.0
        x[x > 1.5] = np.inf
        r = ks_one_sample(x, lambda v: np.clip(v / 2, 0, 1), censor_at=1.5)
        assert r.passed and r.n == 4000

    def test_two_sample(self):
        rng = np.random.default_rng(3)
        a, b = rng.normal(size=3000), rng.normal(size=2000)
        r = ks_two_sample(a, b)
        assert r.passed and r.m == 2000
        assert r.threshold == pytest.approx(1.628 * math.sqrt(5000 / 6e6))
        assert not ks_two_sample(a, b + 0.3).passed

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(0, 1), min_size=10, max_size=200))
    def test_statistic_bounds(self, xs):
        r = ks_one_sample(xs, uniform_cdf)
        assert 1 / (2 * len(xs)) - 1e-12 <= r.statistic <= 1
        assert r.passed == (r.statistic < r.threshold)


class TestOtherChecks:
    def test_pivot(self):
        rng = np.random.default_rng(4)
        scale = rng.random(3000) + 0.5
        x = rng.exponential(scale)
        assert pivotal_uniform_check(x, lambda v, s: 1 - np.exp(-v / s), (scale,)).passed
        assert not pivotal_uniform_check(x, lambda v, s: 1 - np.exp(-v), (scale,)).passed

    def test_correlation_on_independent_gammas(self):
        rng = np.random.default_rng(5)
        x, y = rng.gamma(0.5, 2.0, 20_000), rng.gamma(0.5, 2.0, 20_000)
        r = correlation_check(x, y)
        assert r.passed and r.threshold == pytest.approx(4 / math.sqrt(20_000))
        assert not correlation_check(x, x + y).passed

    def test_rank_product(self):
        rng = np.random.default_rng(6)
        x, y = rng.random(5000), rng.random(5000)
        assert rank_product_check(x, y).passed
        assert not rank_product_check(x, x + 0.3 * y).passed

    def test_chi_square(self):
        rng = np.random.default_rng(7)
        e = np.full(10, 500.0)
        assert chi_square_check(rng.multinomial(5000, np.full(10, 0.1)), e).passed
        with pytest.raises(InsufficientSampleError):
            chi_square_check([5, 5], [5, 5])


class TestReport:
    def test_control_logic(self):
        rep = SuiteReport("demo", {"seed": 1}, allowed_failures=1)
        rep.add(Check("a", "ks", 0.1, 0.2, True))
        rep.add(Check("b", "ks", 0.3, 0.2, False))
        assert rep.passed
        rep.add(Check("ctl", "ks", 0.1, 0.2, True, negative_control=True))
        assert not rep.passed and not rep.controls_ok

    def test_json_is_strict(self):
        rep = SuiteReport("demo", {"seed": 1, "cap": math.inf})
        rep.add(Check("a", "identity", 0.0, 1e-12, True))
        doc = json.loads(rep.to_json())
        assert doc["config"]["cap"] == "inf" and doc["pass"] is True
        with pytest.raises(DomainError):
            dumps({"x": float("nan")})


def test_consistency_suite_passes_and_reproduces():
    a = consistency_suite()
    assert a.passed, "\n".join(a.summary_lines())
    assert len([c for c in a.checks if not c.negative_control]) >= 20
    assert any(c.negative_control for c in a.checks)
    assert a.to_json() == consistency_suite().to_json()


def test_config_echo_omits_workers():
    echo = SuiteConfig(workers=4, seed=9).echo("moments")
    assert echo == {"seed": 9, "n_paths": 200_000, "dt": 1e-4, "lambda": 0.5, "mu": 0.0}


def test_small_moment_run_is_refused():
    with pytest.raises(InsufficientSampleError):
        moment_suite(SuiteConfig(n_paths=100, dt=1e-3))


def test_unknown_suite():
    with pytest.raises(DomainError):
        run_suite("everything")
    assert [r.suite for r in run_suites("consistency")] == ["consistency"]


def test_config_validation():
    with pytest.raises(DomainError):
        SuiteConfig(n_paths=3)
    with pytest.raises(DomainError):
        SuiteConfig(lam=0.0)
