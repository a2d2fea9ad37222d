"""Monte Carlo simulation of drifted Brownian motion and BES(3, mu)."""

from drawdown.simulate.engine import (
    EnsembleResult,
    EstimateWithCI,
    HittingOutcome,
    HittingSample,
    Horizon,
    McConfig,
    PathStats,
    PathTable,
    bes3_sample,
    derive_seed,
    estimate,
    hitting_sample,
    run_ensemble,
    simulate_bes3_hitting,
    simulate_hitting,
    simulate_path,
    simulate_paths,
    write_sink,
)

__all__ = [
    "EnsembleResult",
    "EstimateWithCI",
    "HittingOutcome",
    "HittingSample",
    "Horizon",
    "McConfig",
    "PathStats",
    "PathTable",
    "bes3_sample",
    "derive_seed",
    "estimate",
    "hitting_sample",
    "run_ensemble",
    "simulate_bes3_hitting",
    "simulate_hitting",
    "simulate_path",
    "simulate_paths",
    "write_sink",
]
