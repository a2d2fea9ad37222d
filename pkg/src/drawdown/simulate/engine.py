"""Monte Carlo driver: configuration, per-path records and ensembles.

Randomness is keyed by ``(seed, path_index)`` through a counter-based
generator, so any subset of paths can be recomputed alone and the results
do not depend on how the work is split across threads.
"""

from __future__ import annotations

import hashlib
import io
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from drawdown.errors import DivergentPathError, DomainError
from drawdown.simulate import kernels as K
from drawdown.simulate.philox import split_seed

__all__ = [
    "Horizon",
    "McConfig",
    "PathStats",
    "HittingOutcome",
    "EstimateWithCI",
    "PathTable",
    "HittingSample",
    "EnsembleResult",
    "SINK_COLUMNS",
    "MAX_STEPS",
    "derive_seed",
    "estimate",
    "simulate_paths",
    "simulate_path",
    "simulate_hitting",
    "hitting_sample",
    "simulate_bes3_hitting",
    "bes3_sample",
    "run_ensemble",
    "write_sink",
]

SINK_COLUMNS = ("path_index", "T", "d_plus", "d_minus", "inf", "sup", "h_inf", "h_sup", "x_T", "inf_first")
# Non-termination guard for experiments that stop at a level.
MAX_STEPS = 10**9
# Paths per unit of work handed to a thread.
CHUNK = 512


def derive_seed(seed: int, label: str) -> int:
    """A 64-bit seed for a named sub-experiment, reproducible from ``seed``."""
    h = hashlib.blake2b(f"{int(seed) & 0xFFFFFFFFFFFFFFFF}:{label}".encode(), digest_size=8)
    return int.from_bytes(h.digest(), "little")


@dataclass(frozen=True)
class Horizon:
    """Fixed time ``t`` or an independent Exp(``lambda``) time."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in ("fixed", "exponential"):
            raise DomainError("horizon kind must be 'fixed' or 'exponential'")
        if not (self.value > 0 and math.isfinite(self.value)):
            raise DomainError("horizon parameter must be > 0")

    @classmethod
    def fixed(cls, t: float) -> "Horizon":
        return cls("fixed", float(t))

    @classmethod
    def exponential(cls, lam: float) -> "Horizon":
        return cls("exponential", float(lam))

    @property
    def scale(self) -> float:
        """Typical length of the horizon: t, or the mean 1/lambda."""
        return self.value if self.kind == "fixed" else 1.0 / self.value


@dataclass(frozen=True)
class McConfig:
    """Monte Carlo settings.

    Parameters
    ----------
    n_paths : int
        Number of paths.
    dt : float
        Grid step.
    seed : int
        Run seed; reduced to 64 bits.
    horizon : Horizon
        Fixed or exponential horizon.
    mu, x0 : float
        Drift and start level.
    bridge_correction : bool
        Sample between-grid level crossings in stopped experiments, and
        between-grid maxima and minima of the path.
    antithetic : bool
        Pair path ``2k + 1`` with the reflected increments of path ``2k``.
    """

    n_paths: int
    dt: float = 1e-4
    seed: int = 42
    horizon: Horizon = Horizon("exponential", 0.5)
    mu: float = 0.0
    x0: float = 0.0
    bridge_correction: bool = True
    antithetic: bool = False

    def __post_init__(self):
        if not (isinstance(self.n_paths, (int, np.integer)) and self.n_paths >= 1):
            raise DomainError("n_paths must be a positive integer")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise DomainError("dt must be > 0")
        if not (math.isfinite(self.mu) and math.isfinite(self.x0)):
            raise DomainError("mu and x0 must be finite")
        if self.dt > self.horizon.scale / 100:
            warnings.warn(
                f"dt={self.dt} exceeds 1/100 of the horizon scale {self.horizon.scale}; grid bias will be large",
                stacklevel=2,
            )

    def as_dict(self) -> dict:
        d = asdict(self)
        d["horizon"] = {"kind": self.horizon.kind, "value": self.horizon.value}
        return d


@dataclass(frozen=True)
class PathStats:
    """Path functionals up to the horizon T."""

    d_plus: float
    d_minus: float
    inf: float
    sup: float
    h_inf: float
    h_sup: float
    x_T: float
    T: float
    inf_first: bool


@dataclass(frozen=True)
class HittingOutcome:
    """Result of running a path until it reaches a level.

    ``censored`` marks paths stopped once their fall exceeded the cap; for
    those ``d_minus_at_hit`` is a lower bound.
    """

    hit_target_first: bool
    d_minus_at_hit: float
    d_plus_at_hit: float
    hit_time: float
    censored: bool = False
    attempts: int = 1


@dataclass(frozen=True)
class EstimateWithCI:
    mean: float
    std_err: float
    n: int

    def interval(self, z: float = 1.96) -> tuple[float, float]:
        return self.mean - z * self.std_err, self.mean + z * self.std_err


def estimate(values) -> EstimateWithCI:
    """Sample mean with its standard error."""
    v = np.asarray(values, dtype=float)
    n = v.size
    if n == 0:
        raise DomainError("no samples")
    se = float(np.std(v, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return EstimateWithCI(float(np.mean(v)), se, int(n))


class PathTable:
    """Per-path records of an ensemble, one row per path index."""

    def __init__(self, data: np.ndarray, start: int = 0):
        self.data = data
        self.start = start

    def __len__(self) -> int:
        return self.data.shape[0]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, K.F[name]]

    @property
    def inf_first(self) -> np.ndarray:
        return self["inf_first"] > 0.5

    def row(self, i: int) -> PathStats:
        r = self.data[i]
        return PathStats(
            d_plus=float(r[K.F["d_plus"]]),
            d_minus=float(r[K.F["d_minus"]]),
            inf=float(r[K.F["inf"]]),
            sup=float(r[K.F["sup"]]),
            h_inf=float(r[K.F["h_inf"]]),
            h_sup=float(r[K.F["h_sup"]]),
            x_T=float(r[K.F["x_T"]]),
            T=float(r[K.F["T"]]),
            inf_first=bool(r[K.F["inf_first"]] > 0.5),
        )


@dataclass
class HittingSample:
    """Outcomes of a batch of stopped paths."""

    status: np.ndarray
    d_minus: np.ndarray
    d_plus: np.ndarray
    hit_time: np.ndarray
    attempts: np.ndarray

    @property
    def hit_target(self) -> np.ndarray:
        return self.status == K.HIT_TARGET

    @property
    def censored(self) -> np.ndarray:
        return self.status == K.CENSORED

    @property
    def acceptance_rate(self) -> float:
        return float(len(self.status) / np.sum(self.attempts))


@dataclass
class EnsembleResult:
    estimate: EstimateWithCI
    samples: np.ndarray
    table: PathTable


def _run_chunks(fn: Callable[[int, int], None], start: int, n: int, workers: int) -> None:
    chunks = [(s, min(CHUNK, start + n - s)) for s in range(start, start + n, CHUNK)]
    if workers <= 1 or len(chunks) == 1:
        for s, c in chunks:
            fn(s, c)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda sc: fn(*sc), chunks))


def simulate_paths(config: McConfig, workers: int = 1, segments: bool = False, start: int = 0) -> PathTable:
    """Simulate paths ``start .. start + n_paths - 1`` and return their table.

    With ``segments`` each path is also cut at H_I and H_S and the rise,
    fall and maximum of the pieces are recorded.
    """
    k0, k1 = split_seed(config.seed)
    kind = K.HORIZON_FIXED if config.horizon.kind == "fixed" else K.HORIZON_EXPONENTIAL
    # segment fields stay NaN unless requested
    out = np.full((start + config.n_paths, K.N_PATH_FIELDS), np.nan)

    def work(s, c):
        K.path_batch(
            k0, k1, s, c, kind, config.horizon.value, config.dt, config.mu, config.x0,
            config.antithetic, config.bridge_correction, segments, out,
        )

    _run_chunks(work, start, config.n_paths, workers)
    return PathTable(out[start:], start)


def simulate_path(config: McConfig, path_index: int) -> PathStats:
    """One path, a pure function of ``(config, path_index)``."""
    if path_index < 0:
        raise DomainError("path_index must be >= 0")
    k0, k1 = split_seed(config.seed)
    kind = K.HORIZON_FIXED if config.horizon.kind == "fixed" else K.HORIZON_EXPONENTIAL
    out = np.full((path_index + 1, K.N_PATH_FIELDS), np.nan)
    K.path_batch(k0, k1, path_index, 1, kind, config.horizon.value, config.dt, config.mu, config.x0,
                 config.antithetic, config.bridge_correction, False, out)
    return PathTable(out[path_index:]).row(0)


def _check_levels(beta, alpha):
    if not beta > 0:
        raise DomainError("beta must be > 0")
    if alpha is not None and not alpha > 0:
        raise DomainError("alpha must be > 0 when given")


def _raise_divergent(sample_status: np.ndarray, start: int, what: str):
    bad = np.flatnonzero(sample_status == K.STEP_CAP)
    if bad.size:
        idx = int(bad[0]) + start
        raise DivergentPathError(f"{what}: path {idx} hit the step cap without stopping", path_index=idx)


def hitting_sample(
    mu: float,
    beta: float,
    n: int,
    alpha: float | None = None,
    dt: float = 1e-4,
    seed: int = 42,
    bridge_correction: bool = True,
    u_cap: float = math.inf,
    workers: int = 1,
    start: int = 0,
    max_steps: int = MAX_STEPS,
) -> HittingSample:
    """Run ``n`` paths of BM(mu) until they reach ``beta`` (or ``-alpha``).

    ``u_cap`` stops paths whose fall exceeds it, which keeps driftless
    experiments (infinite mean hitting time) finite.
    """
    _check_levels(beta, alpha)
    k0, k1 = split_seed(seed)
    floor = math.inf if alpha is None else float(alpha)
    out = np.empty((start + n, K.N_HIT_FIELDS))

    def work(s, c):
        K.hitting_batch(k0, k1, s, c, mu, beta, floor, dt, bridge_correction, u_cap, max_steps, out)

    _run_chunks(work, start, n, workers)
    o = out[start:]
    _raise_divergent(o[:, 0], start, "hitting experiment")
    return HittingSample(o[:, 0].astype(int), o[:, 1].copy(), o[:, 2].copy(), o[:, 3].copy(), o[:, 4].astype(int))


def _outcome(sample: HittingSample) -> HittingOutcome:
    return HittingOutcome(
        hit_target_first=bool(sample.status[0] == K.HIT_TARGET),
        d_minus_at_hit=float(sample.d_minus[0]),
        d_plus_at_hit=float(sample.d_plus[0]),
        hit_time=float(sample.hit_time[0]),
        censored=bool(sample.status[0] == K.CENSORED),
        attempts=int(sample.attempts[0]),
    )


def simulate_hitting(
    mu: float,
    beta: float,
    alpha: float | None = None,
    dt: float = 1e-4,
    seed: int = 42,
    path_index: int = 0,
    bridge_correction: bool = True,
    u_cap: float = math.inf,
    max_steps: int = MAX_STEPS,
) -> HittingOutcome:
    """One stopped path; see :func:`hitting_sample`."""
    return _outcome(
        hitting_sample(mu, beta, 1, alpha, dt, seed, bridge_correction, u_cap, 1, path_index, max_steps)
    )


def bes3_sample(
    mu: float,
    beta: float,
    n: int,
    dt: float = 1e-4,
    seed: int = 42,
    method: str = "sde",
    eps: float | None = None,
    workers: int = 1,
    start: int = 0,
    max_steps: int = MAX_STEPS,
) -> HittingSample:
    """Falls of BES(3, mu) before it first reaches ``beta``.

    ``method="sde"`` integrates the Bessel equation; ``method="rejection"``
    keeps the BM(mu) paths from ``eps`` that reach ``beta`` before 0.  Both
    start from ``eps`` (default ``1e-4 * beta``).
    """
    if mu < 0:
        raise DomainError("mu must be >= 0")
    _check_levels(beta, None)
    if method not in ("sde", "rejection"):
        raise DomainError("method must be 'sde' or 'rejection'")
    eps = 1e-4 * beta if eps is None else float(eps)
    if not 0 < eps < beta:
        raise DomainError("eps must lie in (0, beta)")
    k0, k1 = split_seed(seed)
    out = np.empty((start + n, K.N_HIT_FIELDS))
    if method == "sde":
        def work(s, c):
            K.bes3_sde_batch(k0, k1, s, c, mu, beta, eps, dt, max_steps, out)
    else:
        # the expected number of attempts is about beta / eps
        max_attempts = int(min(2**31 - 1, 1000 * beta / eps))

        def work(s, c):
            K.bes3_rejection_batch(k0, k1, s, c, mu, beta, eps, dt, max_attempts, max_steps, out)

    _run_chunks(work, start, n, workers)
    o = out[start:]
    _raise_divergent(o[:, 0], start, f"BES(3) {method}")
    return HittingSample(o[:, 0].astype(int), o[:, 1].copy(), o[:, 2].copy(), o[:, 3].copy(), o[:, 4].astype(int))


def simulate_bes3_hitting(
    mu: float,
    beta: float,
    dt: float = 1e-4,
    seed: int = 42,
    path_index: int = 0,
    method: str = "sde",
    eps: float | None = None,
) -> HittingOutcome:
    """One BES(3, mu) path up to its first passage at ``beta``."""
    return _outcome(bes3_sample(mu, beta, 1, dt, seed, method, eps, 1, path_index))


_NAMED: dict[str, Callable[[PathTable], np.ndarray]] = {
    "d_plus": lambda t: t["d_plus"],
    "d_minus": lambda t: t["d_minus"],
    "d_plus_sq": lambda t: t["d_plus"] ** 2,
    "d_plus_d_minus": lambda t: t["d_plus"] * t["d_minus"],
    "inf_first": lambda t: t["inf_first"],
    "T": lambda t: t["T"],
}


def run_ensemble(
    config: McConfig,
    functional: str | Callable[[PathTable], np.ndarray] = "d_plus",
    workers: int = 1,
    sink=None,
    segments: bool = False,
) -> EnsembleResult:
    """Simulate ``config.n_paths`` paths and average a functional of them.

    ``functional`` is a name (``d_plus``, ``d_minus``, ``d_plus_sq``,
    ``d_plus_d_minus``, ``inf_first``, ``T``) or a callable mapping the
    :class:`PathTable` to one value per path.  ``sink`` (a path or text
    stream) receives the per-path records as CSV.
    """
    if isinstance(functional, str):
        if functional not in _NAMED:
            raise DomainError(f"unknown functional {functional!r}; valid: {', '.join(sorted(_NAMED))}")
        fn = _NAMED[functional]
    else:
        fn = functional
    table = simulate_paths(config, workers=workers, segments=segments)
    samples = np.asarray(fn(table), dtype=float)
    if sink is not None:
        write_sink(table, sink)
    return EnsembleResult(estimate(samples), samples, table)


def _sink_lines(table: PathTable) -> Iterable[str]:
    yield ",".join(SINK_COLUMNS) + "\n"
    cols = [table[c] for c in SINK_COLUMNS[1:-1]]
    flags = table.inf_first
    for i in range(len(table)):
        vals = [repr(float(c[i])) for c in cols]
        yield f"{table.start + i}," + ",".join(vals) + f",{int(flags[i])}\n"


def write_sink(table: PathTable, sink) -> None:
    """Write per-path records as comma-separated text with LF line endings."""
    if isinstance(sink, (str, Path)):
        with open(sink, "w", newline="\n", encoding="utf-8") as fh:
            fh.writelines(_sink_lines(table))
    elif isinstance(sink, io.TextIOBase) or hasattr(sink, "write"):
        for line in _sink_lines(table):
            sink.write(line)
    else:
        raise DomainError("sink must be a path or a writable text stream")
