"""Drawdown and drawup laws of Brownian motion with drift.

Closed-form distributions (``drawdown.analytic``), a Monte Carlo path engine
(``drawdown.simulate``) and a statistical harness confronting the two
(``drawdown.verify``).
"""

from drawdown.errors import (
    ConvergenceError,
    DivergentPathError,
    DomainError,
    InsufficientSampleError,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DivergentPathError",
    "DomainError",
    "InsufficientSampleError",
    "__version__",
]
