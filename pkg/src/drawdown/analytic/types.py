"""Parameter records and the evaluation result record."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from drawdown.errors import DomainError


@dataclass(frozen=True)
class ModelParams:
    """Drift and start level of the Brownian motion under study.

    The start level only shifts paths; none of the drawdown/drawup laws
    depend on it.
    """

    mu: float = 0.0
    x0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.mu) and math.isfinite(self.x0)):
            raise DomainError("mu and x0 must be finite")


@dataclass(frozen=True)
class KillingRate:
    """Rate of the independent exponential clock."""

    lam: float

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise DomainError("lambda must be > 0")

    @property
    def root(self) -> float:
        """sqrt(2 * lambda), the natural inverse length scale."""
        return math.sqrt(2.0 * self.lam)


@dataclass(frozen=True)
class HittingSpec:
    """Target level ``beta`` and optional floor depth ``alpha`` (``inf`` = none)."""

    beta: float
    alpha: float = math.inf

    def __post_init__(self):
        if not self.beta > 0:
            raise DomainError("beta must be > 0")
        if not self.alpha >= 0:
            raise DomainError("alpha must be >= 0")

    @property
    def has_floor(self) -> bool:
        return math.isfinite(self.alpha)


@dataclass(frozen=True)
class EvalResult:
    """A scalar evaluation with its log and a truncation/quadrature bound."""

    value: float
    log_value: float
    abs_err_bound: float = 0.0
    support: tuple[float, float] | None = None
    note: str | None = None

    @classmethod
    def of(cls, value: float, abs_err_bound: float = 0.0, **kwargs) -> "EvalResult":
        value = float(value)
        log_value = math.log(value) if value > 0 else -math.inf
        return cls(value, log_value, float(abs_err_bound), **kwargs)

    @classmethod
    def from_log(cls, log_value: float, abs_err_bound: float = 0.0, **kwargs) -> "EvalResult":
        return cls(math.exp(log_value), float(log_value), float(abs_err_bound), **kwargs)

    def as_dict(self) -> dict:
        out = {
            "value": self.value,
            "log_value": None if self.log_value == -math.inf else self.log_value,
            "abs_err_bound": self.abs_err_bound,
        }
        if self.support is not None:
            out["support"] = list(self.support)
        if self.note:
            out["note"] = self.note
        return out


@dataclass(frozen=True)
class LawRecord:
    """Several named values returned together by one evaluation."""

    values: dict[str, float] = field(default_factory=dict)

    def __getitem__(self, key: str) -> float:
        return self.values[key]

    def __getattr__(self, key: str) -> float:
        try:
            return self.values[key]
        except KeyError:
            raise AttributeError(key) from None

    def as_dict(self) -> dict:
        return dict(self.values)
