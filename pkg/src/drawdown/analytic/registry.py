"""Named formulas for command-line evaluation and tabulation.

Each entry records the callable, its parameters (with defaults) and how its
output is shaped: a single value, an :class:`EvalResult`, or a record of
named values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

from drawdown.analytic import fixed_time, hitting, killed, moments
from drawdown.analytic.scale import hit_before, log_exp_time_marginal_survival, log_psi
from drawdown.analytic.scale import scale as scale_function
from drawdown.analytic.types import EvalResult, LawRecord
from drawdown.errors import DomainError

__all__ = ["Param", "Formula", "REGISTRY", "evaluate", "formula_names"]

_REQUIRED = object()


@dataclass(frozen=True)
class Param:
    name: str
    default: Any = _REQUIRED
    kind: type = float

    @property
    def required(self) -> bool:
        return self.default is _REQUIRED


@dataclass(frozen=True)
class Formula:
    name: str
    func: Callable[..., Any]
    params: tuple[Param, ...]
    support: str = ""

    def param_names(self) -> list[str]:
        return [p.name for p in self.params]

    def resolve(self, given: dict[str, Any]) -> dict[str, Any]:
        """Apply defaults and reject unknown or missing parameters."""
        known = set(self.param_names())
        extra = sorted(k for k, v in given.items() if v is not None and k not in known)
        if extra:
            raise DomainError(f"{self.name} takes no parameter(s) {', '.join(extra)}; expects {', '.join(known) or 'none'}")
        out = {}
        for p in self.params:
            v = given.get(p.name)
            if v is None:
                if p.required:
                    raise DomainError(f"{self.name} needs --{p.name}")
                v = p.default
            out[p.name] = p.kind(v) if p.kind is not str else v
        return out


LAM = Param("lambda", 0.5)
MU = Param("mu", 0.0)


def _p(name, default=_REQUIRED, kind=float):
    return Param(name, default, kind)


def _marginal(lam, mu, a, side):
    if not a > 0:
        raise DomainError("a must be > 0")
    return EvalResult.from_log(log_exp_time_marginal_survival(lam, mu, a, side))


def _hit_before(mu, x, a, b):
    return hit_before(mu, x, a, b)


def _constrained(mu, alpha, beta, u):
    return hitting.hitting_dminus_constrained_cdf(mu, alpha, beta, u)


def _segments(lam, a, b, d):
    f1, f2, f3 = killed.segment_dminus_cdfs(lam, a, b, d)
    return LawRecord({"f1": f1, "f2": f2, "f3": f3})


def _overshoot(lam, a, b, x):
    return killed.overshoot_density(lam, a, b, x)


def _terminal_gap(lam, a, b, x):
    return killed.terminal_gap_density(lam, a, b, x)


def _inf_sup(lam, a, b):
    return killed.inf_sup_laws(lam, a, b)


def _scale(mu, x):
    return scale_function(mu, x)


def _psi(a, nu, lam):
    return EvalResult.from_log(log_psi(a, nu, lam))


REGISTRY: dict[str, Formula] = {
    f.name: f
    for f in [
        Formula("scale", _scale, (MU, _p("x"))),
        Formula("hit-before", _hit_before, (MU, _p("x"), _p("a"), _p("b"))),
        Formula("psi", _psi, (_p("a"), _p("nu", 0.0), LAM)),
        Formula("exp-time-marginal", _marginal, (LAM, MU, _p("a"), _p("side", "increase", str))),
        Formula("hitting-dminus-cdf", hitting.hitting_dminus_cdf, (MU, _p("beta"), _p("u"))),
        Formula(
            "hitting-dminus-constrained-cdf",
            _constrained,
            (MU, _p("alpha", math.inf), _p("beta"), _p("u")),
        ),
        Formula("hitting-joint-cdf", hitting.hitting_joint_cdf, (MU, _p("beta"), _p("u"), _p("v"))),
        Formula("bes3-dminus-cdf", hitting.bes3_dminus_cdf, (MU, _p("beta"), _p("u"))),
        Formula("exp-time-joint-cdf", killed.exp_time_joint_cdf, (LAM, _p("alpha"), _p("beta"))),
        Formula(
            "exp-time-joint-survival-crossterm",
            killed.exp_time_joint_survival_crossterm,
            (LAM, _p("alpha"), _p("beta")),
        ),
        Formula("exp-time-cross-probability", killed.exp_time_cross_probability, (LAM, _p("alpha"), _p("beta"))),
        Formula("exp-time-joint-survival", killed.exp_time_joint_survival, (LAM, _p("alpha"), _p("beta"))),
        Formula(
            "exp-time-joint-density",
            killed.exp_time_joint_density,
            (LAM, _p("alpha"), _p("beta")),
            support="alpha > 0, beta > 0",
        ),
        Formula("exp-time-ordered-laws", killed.exp_time_ordered_laws, (LAM, _p("alpha"), _p("beta"))),
        Formula("inf-sup-laws", _inf_sup, (LAM, _p("a"), _p("b"))),
        Formula("segment-dminus-cdfs", _segments, (LAM, _p("a"), _p("b"), _p("d"))),
        Formula("overshoot-density", _overshoot, (LAM, _p("a"), _p("b"), _p("x")), support="0 < x < b - a"),
        Formula("terminal-gap-density", _terminal_gap, (LAM, _p("a"), _p("b"), _p("x")), support="0 < x < b - a"),
        Formula("fixed-time-dminus-survival", fixed_time.fixed_time_dminus_survival, (_p("t"), _p("a"), _p("tol", 1e-12))),
        Formula("moments", moments.moments_and_correlation, ()),
        Formula("dirichlet-beta", moments.dirichlet_beta, (_p("n"),)),
        Formula("dplus-moment", moments.dplus_moment, (_p("p"),)),
        Formula("reduced-xy-laws", killed.reduced_xy_laws, (_p("x"), _p("y"))),
    ]
}


def formula_names() -> list[str]:
    return sorted(REGISTRY)


def evaluate(name: str, params: dict[str, Any]) -> dict[str, Any]:
    """Evaluate a registered formula; returns a JSON-ready dict.

    Raises :class:`DomainError` for unknown names, bad parameters or
    arguments outside a law's domain, and for non-finite results.
    """
    if name not in REGISTRY:
        raise DomainError(f"unknown formula {name!r}; valid names: {', '.join(formula_names())}")
    formula = REGISTRY[name]
    resolved = formula.resolve(params)
    out = formula.func(*resolved.values())
    record: dict[str, Any] = {"formula": name, "params": resolved}
    if isinstance(out, LawRecord):
        values = {k: float(v) for k, v in out.as_dict().items()}
        _check_finite(values.values())
        record.update({"value": None, "log_value": None, "abs_err_bound": 0.0, "values": values})
        return record
    res = out if isinstance(out, EvalResult) else EvalResult.of(float(out))
    _check_finite([res.value])
    record.update(res.as_dict())
    if formula.support:
        record["support"] = formula.support
    return record


def _check_finite(values):
    for v in values:
        if not math.isfinite(v):
            raise DomainError("result is not a finite number")
