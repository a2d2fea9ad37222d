"""Acceptance criteria 1-6.

The Monte Carlo suites run once at their full default sizes and are shared
between the tests below; expect several minutes on one core.
"""

from __future__ import annotations

import json
import math
import time

import pytest

from drawdown import analytic as A
from drawdown import cli
from drawdown.verify import SuiteConfig, consistency_suite, decomposition_suite, formula_suite, moment_suite

# Printed reference constants
CATALAN = 0.915966
MEAN, SECOND, CROSS, VAR, RHO = 1.25331, 1.83193, 1.44564, 0.26113, -0.47936

c1 = pytest.mark.criterion(1, "analytic constants")
c2 = pytest.mark.criterion(2, "identity suite")
c3 = pytest.mark.criterion(3, "Monte Carlo vs closed forms")
c4 = pytest.mark.criterion(4, "fixed-time moments by Monte Carlo")
c5 = pytest.mark.criterion(5, "decomposition suite")
c6 = pytest.mark.criterion(6, "determinism across worker counts")


@pytest.fixture(scope="module")
def formulas():
    return formula_suite(SuiteConfig(lam=0.5, n_paths=10_000, dt=1e-4))


@pytest.fixture(scope="module")
def moments():
    return moment_suite(SuiteConfig(n_paths=200_000, dt=1e-4))


@pytest.fixture(scope="module")
def decomposition():
    return decomposition_suite(SuiteConfig(lam=0.5, n_paths=100_000, dt=1e-4))


def _check(report, name):
    (found,) = [c for c in report.checks if c.name == name]
    return found


# -- 1 ------------------------------------------------------------------------


@c1
def test_constants():
    start = time.perf_counter()
    beta2 = A.dirichlet_beta(2)
    m = A.moments_and_correlation()
    elapsed = time.perf_counter() - start
    assert abs(beta2 - CATALAN) < 1e-6
    assert abs(m.mean - MEAN) < 1e-4
    assert abs(m.second_moment - SECOND) < 1e-4
    assert abs(m.cross_moment - CROSS) < 1e-4
    assert abs(m.variance - VAR) < 1e-4
    assert abs(m.rho - RHO) < 1e-4
    assert elapsed < 1.0


# -- 2 ------------------------------------------------------------------------

IDENTITY_CHECKS = [
    "ordered split: G(a,b) + G(b,a) = F(a,b), G the law on {H_I < H_S}",
    "ordered marginals: P(D+ < a, H_I < H_S) + P(D- < a, H_I < H_S) = 1 - sech",
    "symmetry F(a,b) = F(b,a)",
    "continuity of the constrained hitting law at u = alpha, alpha + beta",
    "continuity of the joint hitting law at u = v - beta, v",
    "joint density integrates to F",
    "fixed-time tail and image series agree",
    "E(D+_1) = sqrt(pi/2)",
    "E((D+_1)^2) = 2 beta(2)",
    "scaling F(lam; a, b) = F(k^2 lam; a/k, b/k), k = 0.5",
    "scaling F(lam; a, b) = F(k^2 lam; a/k, b/k), k = 3.0",
]


@c2
def test_identity_suite():
    start = time.perf_counter()
    rep = consistency_suite()
    elapsed = time.perf_counter() - start
    assert rep.passed, "\n".join(rep.summary_lines())
    for name in IDENTITY_CHECKS:
        assert _check(rep, name).passed
    assert _check(rep, "joint density integrates to F").threshold <= 1e-6
    assert _check(rep, "fixed-time tail and image series agree").threshold <= 1e-10
    assert _check(rep, "E(D+_1) = sqrt(pi/2)").threshold <= 1e-12
    assert elapsed < 30.0


# -- 3 ------------------------------------------------------------------------

KS_NAMES = [
    "D+_T vs 1 - sech",
    "D-_{H_1} vs exp(-1/u), censored above 10",
    "BES(3) D-_{H_2} by SDE vs closed form",
    "BES(3) D-_{H_2} by rejection vs closed form",
    "BES(3) SDE vs rejection (two-sample)",
]


@c3
@pytest.mark.slow
@pytest.mark.parametrize("name", KS_NAMES)
def test_ks_against_closed_forms(formulas, name):
    chk = _check(formulas, name)
    n = chk.n
    if chk.detail.get("m"):
        m = chk.detail["m"]
        expected = 1.628 * math.sqrt((n + m) / (n * m)) + 0.01
    else:
        expected = 1.628 / math.sqrt(n) + 0.01
    assert n == 10_000
    assert chk.threshold == pytest.approx(expected, rel=1e-12)
    assert chk.passed, f"{name}: {chk.statistic} vs {chk.threshold}"


@c3
@pytest.mark.slow
def test_joint_hitting_grid(formulas):
    chk = _check(formulas, "joint (D-, D+) at H_1 on a 5x5 grid")
    assert chk.threshold == pytest.approx(4 / math.sqrt(10_000) + 0.01)
    assert chk.passed


@c3
@pytest.mark.slow
def test_formula_suite_passes(formulas):
    assert formulas.passed, "\n".join(formulas.summary_lines())


# -- 4 ------------------------------------------------------------------------


@c4
@pytest.mark.slow
def test_rho(moments):
    est = _check(moments, "rho(D+_1, D-_1)").detail["estimate"]
    assert abs(est - RHO) < 0.02


@c4
@pytest.mark.slow
def test_mean(moments):
    chk = _check(moments, "E(D+_1)")
    assert chk.n == 200_000
    assert abs(chk.detail["estimate"] - MEAN) < 3 * chk.detail["std_err"] + 0.01


@c4
@pytest.mark.slow
def test_moment_suite_passes(moments):
    assert moments.passed, "\n".join(moments.summary_lines())


# -- 5 ------------------------------------------------------------------------


@c5
@pytest.mark.slow
def test_decomposition(decomposition):
    ordinary = [c for c in decomposition.checks if not c.negative_control]
    controls = [c for c in decomposition.checks if c.negative_control]
    assert len(ordinary) >= 15
    assert controls and all(not c.passed for c in controls)
    assert len(decomposition.failures) <= 1, "\n".join(decomposition.summary_lines())
    assert decomposition.passed


# -- 6 ------------------------------------------------------------------------


@c6
@pytest.mark.slow
def test_formula_report_independent_of_workers(formulas):
    again = formula_suite(SuiteConfig(lam=0.5, n_paths=10_000, dt=1e-4, workers=3))
    assert again.to_json() == formulas.to_json()


@c6
@pytest.mark.parametrize("command", [
    ["simulate", "--paths", "2000", "--dt", "1e-3", "--seed", "5"],
    ["simulate", "--paths", "2000", "--dt", "1e-3", "--seed", "5", "--aggregate", "d_plus", "--format", "json"],
    ["verify", "--suite", "consistency", "--seed", "5"],
])
def test_cli_output_independent_of_workers(command, tmp_path, capsys):
    outputs = []
    for workers in ("1", "1", "4"):
        dest = tmp_path / f"out-{len(outputs)}"
        assert cli.main(command + ["--workers", workers, "--out", str(dest)]) == 0
        outputs.append(dest.read_bytes())
    capsys.readouterr()
    assert outputs[0] == outputs[1] == outputs[2]
    if command[-1] == "json":
        json.loads(outputs[0])
