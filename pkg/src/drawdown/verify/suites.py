"""Verification suites: analytic identities and Monte Carlo adjudication.

Each suite takes a :class:`SuiteConfig`, derives one seed per
sub-experiment from ``config.seed`` and returns a :class:`SuiteReport`.
Reports contain no timings or worker counts, so a rerun with the same
configuration reproduces them byte for byte.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special

from drawdown import analytic as A
from drawdown.errors import DomainError, InsufficientSampleError
from drawdown.simulate import (
    Horizon,
    McConfig,
    PathTable,
    bes3_sample,
    derive_seed,
    hitting_sample,
    simulate_paths,
)
from drawdown.verify.report import Check, SuiteReport
from drawdown.verify.stats import (
    KsResult,
    StatResult,
    chi_square_check,
    correlation_check,
    grid_deviation,
    ks_one_sample,
    ks_two_sample,
    pivotal_uniform_check,
    rank_product_check,
)

__all__ = [
    "SUITES",
    "DISCRETIZATION_ALLOWANCE",
    "SuiteConfig",
    "consistency_suite",
    "formula_suite",
    "decomposition_suite",
    "moment_suite",
    "run_suite",
    "run_suites",
]

SUITES = ("consistency", "formulas", "decomposition", "moments")

# Declared sup-norm allowance for grid discretization in the formula suite.
DISCRETIZATION_ALLOWANCE = 0.01
# Conditioning levels closer to the start than this many grid standard
# deviations are not resolved by the path grid and are left out of the
# conditional (pivotal) checks.
RESOLUTION_FLOOR = 5.0

_DEFAULT_PATHS = {"formulas": 10_000, "decomposition": 100_000, "moments": 200_000}


@dataclass(frozen=True)
class SuiteConfig:
    """Settings shared by the suites.

    ``n_paths = None`` selects each suite's default sample size.  ``workers``
    only affects speed and is not echoed in reports.
    """

    n_paths: int | None = None
    dt: float = 1e-4
    seed: int = 42
    lam: float = 0.5
    mu: float = 0.0
    workers: int = 1

    def __post_init__(self):
        if self.n_paths is not None and self.n_paths < 10:
            raise DomainError("n_paths must be >= 10")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DomainError("dt must be > 0")
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError("lambda must be > 0")
        if not math.isfinite(self.mu):
            raise DomainError("mu must be finite")

    def paths(self, suite: str) -> int:
        return self.n_paths if self.n_paths is not None else _DEFAULT_PATHS[suite]

    def echo(self, suite: str, **extra) -> dict:
        d = {"seed": int(self.seed), "n_paths": self.paths(suite) if suite in _DEFAULT_PATHS else 0,
             "dt": self.dt, "lambda": self.lam, "mu": self.mu}
        d.update(extra)
        return d


# -- helpers ------------------------------------------------------------------


def _from_ks(name: str, r: KsResult, control: bool = False, **detail) -> Check:
    if r.m is not None:
        detail["m"] = r.m
    if r.allowance:
        detail["allowance"] = r.allowance
    return Check(name, "ks", float(r.statistic), float(r.threshold), bool(r.passed), r.n, control, detail)


def _from_stat(name: str, kind: str, r: StatResult, control: bool = False, **detail) -> Check:
    if r.df is not None:
        detail["df"] = r.df
    return Check(name, kind, float(r.statistic), float(r.threshold), bool(r.passed), r.n, control, detail)


def _identity(name: str, err: float, tol: float, control: bool = False) -> Check:
    err = float(err)
    return Check(name, "identity", err, tol, bool(err <= tol), None, control)


def _max_err(a, b) -> float:
    return float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float))))


def _ecdf_at(x: np.ndarray, points) -> np.ndarray:
    """P_n(X < p) for each p."""
    xs = np.sort(x)
    return np.searchsorted(xs, np.asarray(points, dtype=float), side="left") / xs.size


_GL_X, _GL_W = np.polynomial.legendre.leggauss(64)


def _gl(f: Callable, lo: float, hi: float) -> float:
    x = 0.5 * (hi - lo) * _GL_X + 0.5 * (hi + lo)
    return float(0.5 * (hi - lo) * np.dot(_GL_W, f(x)))


def _gl2(f: Callable, x0: float, x1: float, y0: float, y1: float) -> float:
    x = 0.5 * (x1 - x0) * _GL_X + 0.5 * (x1 + x0)
    y = 0.5 * (y1 - y0) * _GL_X + 0.5 * (y1 + y0)
    xx, yy = np.meshgrid(x, y, indexing="ij")
    return float(0.25 * (x1 - x0) * (y1 - y0) * np.einsum("i,j,ij", _GL_W, _GL_W, f(xx, yy)))


def _gl_triangle(f: Callable, m: float) -> float:
    """Integral of f(x, y) over 0 < y < x < m, with y = x s."""
    x = 0.5 * m * (_GL_X + 1.0)
    s = 0.5 * (_GL_X + 1.0)
    xx, ss = np.meshgrid(x, s, indexing="ij")
    vals = f(xx, xx * ss) * xx
    return float(0.25 * m * np.einsum("i,j,ij", _GL_W, _GL_W, vals))


def _joint_density_mass(lam: float, alpha: float, beta: float) -> float:
    """Integral of the (D+, D-) density over [0, alpha] x [0, beta].

    The density has a kink on the diagonal, so the square below min(alpha,
    beta) is split into two triangles.
    """
    f = lambda x, y: A.exp_time_joint_density(lam, x, y)
    m = min(alpha, beta)
    total = _gl_triangle(f, m) + _gl_triangle(lambda x, y: f(y, x), m)
    if alpha > m:
        total += _gl2(f, m, alpha, 0.0, beta)
    if beta > m:
        total += _gl2(f, 0.0, alpha, m, beta)
    return total


# -- consistency (no Monte Carlo) ---------------------------------------------


def consistency_suite(config: SuiteConfig | None = None) -> SuiteReport:
    """Identities among the closed forms; no simulation."""
    config = config or SuiteConfig()
    lam = config.lam
    c = math.sqrt(2.0 * lam)
    rep = SuiteReport("consistency", config.echo("consistency"))
    g = np.array([0.05, 0.3, 0.7, 1.0, 1.6, 2.5, 4.0, 7.0]) / c
    al, be = np.meshgrid(g, g, indexing="ij")

    F = A.exp_time_joint_cdf(lam, al, be)
    rep.add(_identity("ordered split: G(a,b) + G(b,a) = F(a,b), G the law on {H_I < H_S}",
                      _max_err(A.ordered_joint_cdf(lam, al, be) + A.ordered_joint_cdf(lam, be, al), F), 1e-12))
    rep.add(_identity("ordered marginals: P(D+ < a, H_I < H_S) + P(D- < a, H_I < H_S) = 1 - sech",
                      _max_err(A.ordered_dplus_cdf(lam, g) + A.ordered_dminus_cdf(lam, g), A.exp_time_dplus_cdf(lam, g)),
                      1e-12))
    rep.add(_identity("symmetry F(a,b) = F(b,a)", _max_err(F, A.exp_time_joint_cdf(lam, be, al)), 1e-14))
    rep.add(_identity("marginal limit F(a, inf) = 1 - sech",
                      _max_err(A.exp_time_joint_cdf(lam, g, 60.0 / c), A.exp_time_dplus_cdf(lam, g)), 1e-12))
    rep.add(_identity("inclusion-exclusion for the joint survival",
                      _max_err(A.exp_time_joint_survival(lam, al, be),
                               1.0 - A.exp_time_dplus_cdf(lam, al) - A.exp_time_dplus_cdf(lam, be) + F), 1e-12))
    upper = al >= be
    rep.add(_identity("cross probability = crossterm v(b, a) for a >= b",
                      _max_err(A.exp_time_cross_probability(lam, al[upper], be[upper]),
                               A.exp_time_joint_survival_crossterm(lam, al[upper], be[upper])), 1e-12))
    for k in (0.5, 3.0):
        rep.add(_identity(f"scaling F(lam; a, b) = F(k^2 lam; a/k, b/k), k = {k}",
                          _max_err(F, A.exp_time_joint_cdf(k * k * lam, al / k, be / k)), 1e-12))
    rep.add(_identity("marginal 1/psi at mu = 0 is sech",
                      _max_err(A.exp_time_marginal_survival(lam, 0.0, g), 1.0 / np.cosh(c * g)), 1e-14))
    rep.add(_identity("increase side at mu equals decrease side at -mu",
                      _max_err(A.exp_time_marginal_survival(lam, 0.4, g, "increase"),
                               A.exp_time_marginal_survival(lam, -0.4, g, "decrease")), 1e-15))

    # piecewise boundaries of the constrained hitting law and its joint form
    worst = 0.0
    for mu in (-0.7, 0.0, 0.5):
        for alpha, beta in ((0.5, 1.0), (1.0, 1.0), (2.0, 0.5)):
            for u in (alpha, alpha + beta):
                lo = A.hitting_dminus_constrained_cdf(mu, alpha, beta, u * (1 - 1e-12))
                hi = A.hitting_dminus_constrained_cdf(mu, alpha, beta, u * (1 + 1e-12))
                worst = max(worst, abs(hi - lo))
    rep.add(_identity("continuity of the constrained hitting law at u = alpha, alpha + beta", worst, 1e-10))
    worst = 0.0
    for mu in (0.0, 0.5, 2.0):
        for beta, v in ((1.0, 1.5), (1.0, 3.0), (0.5, 2.0)):
            for u in (v - beta, v):
                lo = A.hitting_joint_cdf(mu, beta, u * (1 - 1e-12), v)
                hi = A.hitting_joint_cdf(mu, beta, u * (1 + 1e-12), v)
                worst = max(worst, abs(hi - lo))
    rep.add(_identity("continuity of the joint hitting law at u = v - beta, v", worst, 1e-10))
    u = np.linspace(0.05, 1.0, 20)
    rep.add(_identity("BES(3) law depends on u / beta only (mu = 0)",
                      _max_err(A.bes3_dminus_cdf(0.0, 1.0, u), A.bes3_dminus_cdf(0.0, 3.0, 3.0 * u)), 1e-14))

    # densities against CDFs by quadrature
    worst = max(abs(_joint_density_mass(lam, a, b) - A.exp_time_joint_cdf(lam, a, b))
                for a, b in ((0.4, 0.9), (1.0, 1.0), (2.5, 0.7), (3.0, 4.0)))
    rep.add(_identity("joint density integrates to F", worst, 1e-6))
    worst = max(abs(_gl(lambda x: A.ordered_dplus_density(lam, x), 0.0, a) - A.ordered_dplus_cdf(lam, a))
                for a in (0.3, 1.0, 3.0))
    rep.add(_identity("ordered D+ density integrates to its CDF", worst, 1e-6))
    # H_I: substitute s = w^2 to remove the 1/sqrt(s) singularity
    worst = max(abs(_gl(lambda w: 2.0 * w * A.hinf_density(lam, w * w), 0.0, math.sqrt(s)) - A.hinf_cdf(lam, s))
                for s in (0.1, 1.0, 5.0))
    rep.add(_identity("H_I density integrates to its CDF", worst, 1e-6))
    mass = sum(_gl2(lambda a, b: A.inf_first_density(lam, a, b), a0, a1, b0, b1)
               for a0, a1 in ((-40.0 / c, -1.0 / c), (-1.0 / c, 0.0))
               for b0, b1 in ((0.0, 1.0 / c), (1.0 / c, 40.0 / c)))
    rep.add(_identity("(I_T, S_T) density on {H_I < H_S} has mass 1/2", abs(mass - 0.5), 1e-6))
    worst = 0.0
    for a, b in ((-0.3, 0.8), (-2.0, 1.5)):
        for x in (0.2, 0.9 * (b - a)):
            worst = max(worst,
                        abs(_gl(lambda t: A.terminal_gap_density(lam, a, b, t), 0.0, x) - A.terminal_gap_cdf(lam, a, b, x)),
                        abs(_gl(lambda t: A.overshoot_density(lam, a, b, t), 0.0, x) - A.overshoot_cdf(lam, a, b, x)))
    rep.add(_identity("terminal-gap and overshoot densities integrate to their CDFs", worst, 1e-10))
    worst = abs(_gl(lambda y: A.reduced_y_density(y), 1.0, 4.0) - (1.0 - A.reduced_y_survival(4.0)))
    rep.add(_identity("reduced Y density integrates to its survival", worst, 1e-10))

    # fixed-time series, both forms over [0.1, 10] x [0.1, 5]
    worst = 0.0
    for t in np.geomspace(0.1, 10.0, 9):
        for a in np.geomspace(0.1, 5.0, 9):
            worst = max(worst, abs(A.survival_tail_series(t, a).value - A.survival_image_series(t, a).value))
    rep.add(_identity("fixed-time tail and image series agree", worst, 1e-10))

    rep.add(_identity("E(D+_1) = sqrt(pi/2)", abs(A.dplus_moment(1) - math.sqrt(math.pi / 2.0)), 1e-12))
    rep.add(_identity("E((D+_1)^2) = 2 beta(2)", abs(A.dplus_moment(2) - 2.0 * A.dirichlet_beta(2)), 1e-12))
    m = A.moments_and_correlation().values
    rep.add(_identity("Var = E(D+^2) - E(D+)^2", abs(m["variance"] - (m["second_moment"] - m["mean"] ** 2)), 1e-14))
    rep.add(_identity("beta(1) = pi/4", abs(A.dirichlet_beta(1) - math.pi / 4.0), 1e-14))

    # negative control: scaling with lambda multiplied by k instead of k^2
    rep.add(_identity("scaling with k lam instead of k^2 lam",
                      _max_err(F, A.exp_time_joint_cdf(3.0 * lam, al / 3.0, be / 3.0)), 1e-12, control=True))
    return rep


# -- formula suite ------------------------------------------------------------


_GRID = np.array([0.25, 0.5, 1.0, 2.0, 3.0])


def _exp_table(config: SuiteConfig, label: str, mu: float, n: int) -> PathTable:
    mc = McConfig(n, dt=config.dt, seed=derive_seed(config.seed, label), horizon=Horizon("exponential", config.lam), mu=mu)
    return simulate_paths(mc, workers=config.workers)


def _sub_cdf_grid(mask_fn, grid_a, grid_b) -> np.ndarray:
    return np.array([[mask_fn(a, b) for b in grid_b] for a in grid_a])


def formula_suite(config: SuiteConfig | None = None) -> SuiteReport:
    """Closed-form laws against simulation, with the declared allowance."""
    config = config or SuiteConfig()
    lam, n, tol = config.lam, config.paths("formulas"), DISCRETIZATION_ALLOWANCE
    c = math.sqrt(2.0 * lam)
    rep = SuiteReport("formulas", config.echo("formulas", allowance=tol))

    tab = _exp_table(config, "formulas/exponential", 0.0, n)
    dp, dm, first = tab["d_plus"], tab["d_minus"], tab.inf_first
    sech_cdf = lambda x: A.exp_time_dplus_cdf(lam, x)
    rep.add(_from_ks("D+_T vs 1 - sech", ks_one_sample(dp, sech_cdf, allowance=tol)))
    rep.add(_from_ks("D-_T vs 1 - sech", ks_one_sample(dm, sech_cdf, allowance=tol)))
    al, be = np.meshgrid(_GRID, _GRID, indexing="ij")
    emp = _sub_cdf_grid(lambda a, b: np.mean((dp < a) & (dm < b)), _GRID, _GRID)
    rep.add(_from_stat("joint CDF F on a 5x5 grid", "ks",
                       grid_deviation(emp, A.exp_time_joint_cdf(lam, al, be), n, allowance=tol)))
    emp = _sub_cdf_grid(lambda a, b: np.mean((dp < a) & (dm < b) & first), _GRID, _GRID)
    rep.add(_from_stat("joint CDF on {H_I < H_S} on a 5x5 grid", "ks",
                       grid_deviation(emp, A.ordered_joint_cdf(lam, al, be), n, allowance=tol)))
    emp = _sub_cdf_grid(lambda a, b: np.mean((dp > a) & (dm < b)), _GRID, _GRID)
    rep.add(_from_stat("cross probability P(D+ > a, D- < b) on a 5x5 grid", "ks",
                       grid_deviation(emp, A.exp_time_cross_probability(lam, al, be), n, allowance=tol)))
    y = np.cosh(c * dm[first])
    rep.add(_from_ks("cosh(c D-_T) on {H_I < H_S} vs 1 - 2/(y(1+y))",
                     ks_one_sample(y, lambda v: 1.0 - A.reduced_y_survival(np.maximum(v, 1.0)), allowance=tol)))
    rep.add(_identity("D+_T = S_T - I_T on {H_I < H_S}",
                      _max_err(dp[first], tab["sup"][first] - tab["inf"][first]), 1e-12))

    mu = 0.3
    drift = _exp_table(config, "formulas/drift", mu, n)
    for side, col in (("increase", "d_plus"), ("decrease", "d_minus")):
        ref = lambda x, s=side: 1.0 - A.exp_time_marginal_survival(lam, mu, x, s)
        rep.add(_from_ks(f"{col} at mu = {mu} vs 1 - 1/psi", ks_one_sample(drift[col], ref, allowance=tol)))
    rep.add(_from_ks(f"d_plus at mu = {mu} vs the driftless law", ks_one_sample(drift["d_plus"], sech_cdf, allowance=tol),
                     control=True))

    # stopped at H_1, driftless: infinite mean time, so very deep falls are censored
    u_cap = 10.0
    hs = hitting_sample(0.0, 1.0, n, dt=config.dt, seed=derive_seed(config.seed, "formulas/hit"), u_cap=u_cap,
                        workers=config.workers)
    fall = np.where(hs.censored, np.inf, hs.d_minus)
    rep.add(_from_ks("D-_{H_1} vs exp(-1/u), censored above 10",
                     ks_one_sample(fall, lambda u: A.hitting_dminus_cdf(0.0, 1.0, np.maximum(u, 1e-300)),
                                   allowance=tol, censor_at=u_cap)))
    gu = np.array([0.25, 0.5, 1.0, 2.0, 4.0])
    gv = np.array([1.25, 1.5, 2.0, 3.0, 5.0])
    emp = _sub_cdf_grid(lambda u, v: np.mean((fall < u) & (hs.d_plus < v)), gu, gv)
    ref = np.array([[A.hitting_joint_cdf(0.0, 1.0, u, v) for v in gv] for u in gu])
    rep.add(_from_stat("joint (D-, D+) at H_1 on a 5x5 grid", "ks", grid_deviation(emp, ref, n, allowance=tol)))

    floor = hitting_sample(0.0, 1.0, n, alpha=1.0, dt=config.dt, seed=derive_seed(config.seed, "formulas/floor"),
                           workers=config.workers)
    gu = np.linspace(0.1, 2.5, 25)
    emp = np.array([np.mean(floor.hit_target & (floor.d_minus < u)) for u in gu])
    rep.add(_from_stat("D-_{H_1} on {H_1 < H_-1} on a grid", "ks",
                       grid_deviation(emp, A.hitting_dminus_constrained_cdf(0.0, 1.0, 1.0, gu), n, allowance=tol)))

    mu = 0.5
    pos = hitting_sample(mu, 1.0, n, dt=config.dt, seed=derive_seed(config.seed, "formulas/drift-hit"),
                         workers=config.workers)
    rep.add(_from_ks(f"D-_{{H_1}} at mu = {mu} vs exp(-1/S^(-mu)(u))",
                     ks_one_sample(pos.d_minus, lambda u: A.hitting_dminus_cdf(mu, 1.0, np.maximum(u, 1e-300)),
                                   allowance=tol)))
    rep.add(_from_ks(f"D-_{{H_1}} at mu = {mu} vs exp(-1/S^mu(u))",
                     ks_one_sample(pos.d_minus, lambda u: A.hitting_dminus_cdf(-mu, 1.0, np.maximum(u, 1e-300)),
                                   allowance=tol), control=True))

    beta = 2.0
    bes_cdf = lambda u: A.bes3_dminus_cdf(0.0, beta, np.clip(u, 1e-300, beta))
    sde = bes3_sample(0.0, beta, n, dt=config.dt, seed=derive_seed(config.seed, "formulas/bes-sde"),
                      method="sde", workers=config.workers)
    rej = bes3_sample(0.0, beta, n, dt=config.dt, seed=derive_seed(config.seed, "formulas/bes-rejection"),
                      method="rejection", workers=config.workers)
    rep.add(_from_ks("BES(3) D-_{H_2} by SDE vs closed form", ks_one_sample(sde.d_minus, bes_cdf, allowance=tol)))
    rep.add(_from_ks("BES(3) D-_{H_2} by rejection vs closed form", ks_one_sample(rej.d_minus, bes_cdf, allowance=tol)))
    rep.add(_from_ks("BES(3) SDE vs rejection (two-sample)", ks_two_sample(sde.d_minus, rej.d_minus, allowance=tol)))
    eps = 1e-4 * beta
    ratio = rej.acceptance_rate / (eps / beta)
    rep.add(Check("rejection acceptance rate / (eps / beta)", "moment", abs(ratio - 1.0), 4.0 / math.sqrt(n),
                  abs(ratio - 1.0) < 4.0 / math.sqrt(n), n))

    emp, ref = [], []
    levels = (0.5, 1.0, 2.0)
    for t in levels:
        mc = McConfig(n, dt=config.dt, seed=derive_seed(config.seed, f"formulas/fixed-{t}"), horizon=Horizon("fixed", t))
        dm_t = simulate_paths(mc, workers=config.workers)["d_minus"]
        for a in levels:
            emp.append(np.mean(dm_t > a))
            ref.append(A.fixed_time_dminus_survival(t, a).value)
    rep.add(_from_stat("P(D-_t > a) on (t, a) in {0.5, 1, 2}^2", "ks", grid_deviation(emp, ref, n, allowance=tol)))
    return rep


# -- decomposition suite ------------------------------------------------------


def _marginal_quantiles(density: Callable, lo: float, hi: float, mass: float, k: int) -> list[float]:
    """Edges splitting ``mass`` of a 1-d density on (lo, hi) into k equal parts."""
    cum = lambda x: integrate.quad(density, lo, x, limit=200)[0] if x > lo else 0.0
    return [optimize.brentq(lambda x: cum(x) - mass * j / k, lo, hi, xtol=1e-12) for j in range(1, k)]


def _hit2_bins(lam: float, k: int = 8) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Edges of a k x k partition of {a < 0 < b} and the cell masses under the ordered (I_T, S_T) density.

    Edges are the equal-mass quantiles of the two marginals of the density
    on {H_I < H_S}, so every cell carries a comparable expected count.
    """
    c = math.sqrt(2.0 * lam)
    far = 45.0 / c

    def b_marginal(b):
        return integrate.quad(lambda a: A.inf_first_density(lam, a, b), -far, 0.0, limit=200)[0]

    def a_marginal(a):
        return integrate.quad(lambda b: A.inf_first_density(lam, a, b), 0.0, far, limit=200)[0]

    be = np.array([0.0, *_marginal_quantiles(b_marginal, 0.0, far, 0.5, k), far])
    ae = np.array([-far, *_marginal_quantiles(a_marginal, -far, 0.0, 0.5, k), 0.0])
    cells = np.array([[_gl2(lambda a, b: A.inf_first_density(lam, a, b), ae[i], ae[i + 1], be[j], be[j + 1])
                       for j in range(k)] for i in range(k)])
    return ae, be, cells


def decomposition_suite(config: SuiteConfig | None = None) -> SuiteReport:
    """Path decomposition at the infimum and at the supremum, exponential horizon."""
    config = config or SuiteConfig()
    lam, n = config.lam, config.paths("decomposition")
    c = math.sqrt(2.0 * lam)
    floor = RESOLUTION_FLOOR * math.sqrt(config.dt)
    rep = SuiteReport("decomposition", config.echo("decomposition", resolution_floor=floor), allowed_failures=1)

    mc = McConfig(n, dt=config.dt, seed=derive_seed(config.seed, "decomposition"),
                  horizon=Horizon("exponential", lam), mu=config.mu)
    tab = simulate_paths(mc, workers=config.workers, segments=True)
    T, hi, inf, sup, x = tab["T"], tab["h_inf"], tab["inf"], tab["sup"], tab["x_T"]
    post = T - hi
    gamma = lambda s: special.gammainc(0.5, lam * np.maximum(s, 0.0))
    expo = lambda v: -np.expm1(-c * np.maximum(v, 0.0))

    rep.add(_from_ks("H_I ~ Gamma(1/2, lam)", ks_one_sample(hi, gamma)))
    rep.add(_from_ks("T - H_I ~ Gamma(1/2, lam)", ks_one_sample(post, gamma)))
    rep.add(_from_ks("H_I vs T - H_I (two-sample)", ks_two_sample(hi, post)))
    rep.add(_from_stat("corr(H_I, T - H_I)", "moment", correlation_check(hi, post)))
    rep.add(_from_ks("rank product of (H_I, T - H_I)", rank_product_check(hi, post)))
    rep.add(_from_ks("-I_T ~ Exp(c)", ks_one_sample(-inf, expo)))
    rep.add(_from_ks("X_T - I_T ~ Exp(c)", ks_one_sample(x - inf, expo)))
    rep.add(_from_ks("-I_T vs X_T - I_T (two-sample)", ks_two_sample(-inf, x - inf)))
    rep.add(_from_stat("corr(-I_T, X_T - I_T)", "moment", correlation_check(-inf, x - inf)))
    rep.add(_from_ks("rank product of (-I_T, X_T - I_T)", rank_product_check(-inf, x - inf)))

    # pre-H_I segment reversed in time vs post-H_I segment, both seen from I_T
    pre_amp, post_amp = -inf, x - inf
    rep.add(_from_ks("pre vs reversed post: amplitude / sqrt(duration)",
                     ks_two_sample(pre_amp / np.sqrt(hi), post_amp / np.sqrt(post))))
    rep.add(_from_ks("pre vs reversed post: height above I_T",
                     ks_two_sample(tab["pre_sup"] - inf, tab["post_sup"] + x - inf)))
    rep.add(_from_ks("pre fall vs reversed post rise", ks_two_sample(tab["pre_fall"], tab["post_rise"])))
    rep.add(_from_ks("pre rise vs reversed post fall", ks_two_sample(tab["pre_rise"], tab["post_fall"])))

    first = tab.inf_first
    z = 2.5758293035489004  # two-sided 1% normal quantile
    share = float(np.mean(first))
    rep.add(Check("P(H_I < H_S) = 1/2", "moment", abs(share - 0.5), z * 0.5 / math.sqrt(n),
                  abs(share - 0.5) < z * 0.5 / math.sqrt(n), n))

    ae, be, cells = _hit2_bins(lam)
    counts, _, _ = np.histogram2d(inf[first], sup[first], bins=(ae, be))
    observed = np.append(counts.ravel(), n - first.sum())
    expected = np.append(cells.ravel(), 1.0 - cells.sum()) * n
    rep.add(_from_stat("(I_T, S_T) on {H_I < H_S} vs its ordered density, 8x8 chi-square", "chi2", chi_square_check(observed, expected)))

    sel = first & (inf < -floor) & (sup > floor)
    a, b = inf[sel], sup[sel]
    for label, col, fn in (("f1: fall before H_I", "pre_fall", A.segment1_cdf),
                           ("f2: fall between H_I and H_S", "mid_fall", A.segment2_cdf),
                           ("f3: fall after H_S", "end_fall", A.segment3_cdf)):
        rep.add(_from_ks(f"{label} (pivot)",
                         pivotal_uniform_check(tab[col][sel], lambda d, a_, b_, f=fn: f(lam, d, a_, b_), (a, b))))
    gap = (sup - x)[sel]
    rep.add(_from_ks("S_T - X_T vs truncated exponential f_xi (pivot)",
                     pivotal_uniform_check(gap, lambda v, a_, b_: A.overshoot_cdf(lam, a_, b_, v), (a, b))))
    rep.add(_from_ks("S_T - X_T vs killed Green-function law (pivot)",
                     pivotal_uniform_check(gap, lambda v, a_, b_: A.terminal_gap_cdf(lam, a_, b_, v), (a, b))))

    # negative controls
    rep.add(_from_ks("pre-H_I fall fed to the f2 pivot",
                     pivotal_uniform_check(tab["pre_fall"][sel], lambda d, a_, b_: A.segment2_cdf(lam, d, a_, b_), (a, b)),
                     control=True))
    rep.add(_from_stat("corr(H_I, T)", "moment", correlation_check(hi, T), control=True))
    drift = McConfig(max(n // 10, 1000), dt=config.dt, seed=derive_seed(config.seed, "decomposition/drift"),
                     horizon=Horizon("exponential", lam), mu=config.mu + 0.3)
    dtab = simulate_paths(drift, workers=config.workers)
    rep.add(_from_ks("-I_T ~ Exp(c) under drift 0.3", ks_one_sample(-dtab["inf"], expo), control=True))
    return rep


# -- moment suite -------------------------------------------------------------

# Allowances for first-order and second-order moments, and for rho.
_MOMENT_ALLOWANCE = {"first": 0.01, "second": 0.02, "rho": 0.02}


def _moment_check(rep: SuiteReport, name: str, samples: np.ndarray, target: float, allowance: float) -> None:
    v = np.asarray(samples, dtype=float)
    n = v.size
    est = float(np.mean(v))
    se = float(np.std(v, ddof=1) / math.sqrt(n))
    if se > allowance / 2:
        raise InsufficientSampleError(f"{name}: std_err {se:.3g} exceeds half the allowance {allowance}")
    err = abs(est - target)
    thr = 3.0 * se + allowance
    rep.add(Check(name, "moment", err, thr, err < thr, n,
                  detail={"estimate": est, "std_err": se, "target": target, "allowance": allowance}))


def moment_suite(config: SuiteConfig | None = None) -> SuiteReport:
    """Moments of (D+_t, D-_t) at fixed time, driftless."""
    config = config or SuiteConfig()
    n = config.paths("moments")
    m = A.moments_and_correlation().values
    rep = SuiteReport("moments", config.echo("moments", t=1.0, allowances=dict(_MOMENT_ALLOWANCE)))
    first, second = _MOMENT_ALLOWANCE["first"], _MOMENT_ALLOWANCE["second"]

    mc = McConfig(n, dt=config.dt, seed=derive_seed(config.seed, "moments/t=1"), horizon=Horizon("fixed", 1.0))
    tab = simulate_paths(mc, workers=config.workers)
    dp, dm = tab["d_plus"], tab["d_minus"]
    _moment_check(rep, "E(D+_1)", dp, m["mean"], first)
    _moment_check(rep, "E(D-_1)", dm, m["mean"], first)
    _moment_check(rep, "E((D+_1)^2)", dp**2, m["second_moment"], second)
    _moment_check(rep, "E(D+_1 D-_1)", dp * dm, m["cross_moment"], second)
    mean = float(np.mean(dp))
    _moment_check(rep, "Var(D+_1)", (dp - mean) ** 2 * n / (n - 1), m["variance"], second)
    rho = float(np.corrcoef(dp, dm)[0, 1])
    tol = _MOMENT_ALLOWANCE["rho"]
    rep.add(Check("rho(D+_1, D-_1)", "moment", abs(rho - m["rho"]), tol, abs(rho - m["rho"]) < tol, n,
                  detail={"estimate": rho, "target": m["rho"]}))
    shifted = float(np.corrcoef(dp, np.roll(dm, 1))[0, 1])
    rep.add(Check("rho of mis-paired (D+_i, D-_(i-1))", "moment", abs(shifted - m["rho"]), tol,
                  abs(shifted - m["rho"]) < tol, n, negative_control=True, detail={"estimate": shifted}))

    # E(D+_t D-_t) / t is the same at every t; the grid is scaled with t
    for t in (0.25, 4.0):
        mt = McConfig(max(n // 10, 1000), dt=config.dt * t, seed=derive_seed(config.seed, f"moments/t={t}"),
                      horizon=Horizon("fixed", t))
        tt = simulate_paths(mt, workers=config.workers)
        _moment_check(rep, f"E(D+_t D-_t) / t at t = {t}", tt["d_plus"] * tt["d_minus"] / t, m["cross_moment"], second)
    return rep


# -- dispatch -----------------------------------------------------------------

_RUNNERS = {
    "consistency": consistency_suite,
    "formulas": formula_suite,
    "decomposition": decomposition_suite,
    "moments": moment_suite,
}


def run_suite(name: str, config: SuiteConfig | None = None) -> SuiteReport:
    if name not in _RUNNERS:
        raise DomainError(f"unknown suite {name!r}; valid: {', '.join(SUITES)}, all")
    return _RUNNERS[name](config)


def run_suites(name: str, config: SuiteConfig | None = None) -> list[SuiteReport]:
    """Run one suite, or every suite in a fixed order for ``name = "all"``."""
    names = SUITES if name == "all" else (name,)
    return [run_suite(s, config) for s in names]
