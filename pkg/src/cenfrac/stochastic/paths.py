"""Discretized censored-subordinator paths (resurrection construction).

The censored process started at x runs x - S_s until the first crossing of
0, restarts from the pre-crossing position, and repeats; simulated here on
a time grid of step h: per step the position falls by h^(1/beta) times a
standard stable draw, a would-cross step is censored (position retained as
the left-limit proxy), and the path stops once below ``stop_threshold``
(the continuous process reaches 0 only in the limit).  Both discretization
biases are reported: the forfeited remaining lifetime is bounded by the
closed form E[tau(threshold)], and time quantization contributes at most h
per resurrection segment.

A compiled core is used when available; a NumPy fallback with identical
semantics is selected at import.  Set CENFRAC_FORCE_PY=1 to force the
fallback.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ..errors import ContractError, DomainError, RunawayError
from ..rl import Forcing
from ..special import FracOrder
from .chains import lifetime_closed_form
from .rng import RngStream
from .utils import run_chunks
from . import _pathcore_py

try:  # compiled core is optional
    from . import _pathcore as _pathcore_cy
except ImportError:  # pragma: no cover - depends on build environment
    _pathcore_cy = None

__all__ = [
    "PathSample",
    "PathLifetimeEstimate",
    "PairedHalvingEstimate",
    "active_backend",
    "threshold_bias_bound",
    "simulate_censored_path",
    "mean_lifetime_from_paths",
    "paired_halving_estimates",
    "first_resurrection_stats",
    "estimate_feynman_kac",
]

DEFAULT_MAX_STEPS = 50_000_000
PATH_CHUNK = 2048
_FK_BUF = 1 << 16


def _force_py() -> bool:
    return bool(os.environ.get("CENFRAC_FORCE_PY", ""))


def active_backend() -> str:
    """Name of the path-kernel backend in use: "cython" or "python"."""
    return "python" if (_pathcore_cy is None or _force_py()) else "cython"


def _engine():
    return _pathcore_py if active_backend() == "python" else _pathcore_cy


@dataclass(frozen=True)
class PathSample:
    """One discretized censored path.

    ``positions[k]`` is the position held on [times[k], times[k]+h); the
    final entry is the first position below the stop threshold.  A
    censored step keeps the pre-jump position, so positions are
    nonincreasing and stay positive throughout.
    """

    step_h: float
    times: np.ndarray
    positions: np.ndarray
    resurrection_count: int
    lifetime: float

    def __post_init__(self):
        if not self.step_h > 0.0:
            raise DomainError("step_h must be positive")
        t = np.asarray(self.times, dtype=float)
        p = np.asarray(self.positions, dtype=float)
        if t.shape != p.shape or t.ndim != 1:
            raise ContractError("times and positions must match")
        if t.size and (np.any(np.diff(t) <= 0.0) or np.any(p[:-1] <= 0.0)):
            raise ContractError("times must increase; positions stay positive")
        if self.resurrection_count < 0:
            raise ContractError("resurrection_count must be nonnegative")
        t.setflags(write=False)
        p.setflags(write=False)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", p)


@dataclass(frozen=True)
class PathLifetimeEstimate:
    estimate: float
    stderr: float
    bias_bound: float
    mean_resurrections: float
    n_paths: int
    backend: str


@dataclass(frozen=True)
class PairedHalvingEstimate:
    """Mean lifetimes at step h and h/2 driven by one common subordinator
    per path (coarse increments are pairwise sums of the fine draws), so
    the difference isolates the discretization effect from Monte Carlo
    noise."""

    step_h: float
    coarse: float
    fine: float
    diff_stderr: float
    n_paths: int

    @property
    def relative_move(self) -> float:
        return abs(self.coarse - self.fine) / abs(self.fine)


def threshold_bias_bound(stop_threshold: float, order: FracOrder) -> float:
    """Remaining expected lifetime forfeited by stopping below the threshold."""
    return lifetime_closed_form(stop_threshold, order)


def _validate_path_args(x, step_h, stop_threshold):
    if not x > 0.0:
        raise DomainError("start point must be positive")
    if not step_h > 0.0:
        raise DomainError("step_h must be positive")
    if not stop_threshold > 0.0:
        raise DomainError("stop_threshold must be positive")


def simulate_censored_path(
    x: float,
    order: FracOrder,
    step_h: float,
    stop_threshold: float,
    rng: RngStream,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> PathSample:
    """One full path with its position trace.

    Raises :class:`RunawayError` (carrying the partial path) if the path
    has not stopped after max_steps steps.
    """
    _validate_path_args(x, step_h, stop_threshold)
    gen = rng.generator()
    b = order.beta
    if active_backend() == "cython":
        held_parts = []
        pos = float(x)
        res = 0
        done = False
        written = 0
        buf = np.empty(_FK_BUF)
        while written < max_steps:
            take = min(_FK_BUF, int(max_steps) - written)
            pos, k, r, flag = _pathcore_cy.path_chunk(
                pos, b, step_h, stop_threshold, gen, buf[:take]
            )
            held_parts.append(buf[:k].copy())
            written += k
            res += r
            if flag:
                done = True
                break
        held = np.concatenate(held_parts) if held_parts else np.empty(0)
    else:
        held, pos, res, done = _pathcore_py.trace_path(
            x, b, step_h, stop_threshold, gen, max_steps
        )
    positions = np.append(held, pos)
    times = np.arange(positions.size, dtype=float) * step_h
    sample = PathSample(step_h, times, positions, int(res), float(held.size) * step_h)
    if not done:
        raise RunawayError(
            f"path exceeded max_steps={max_steps} before stopping", partial=sample
        )
    return sample


def _collect_lifetimes(x, order, step_h, stop_threshold, n_paths, rng, max_steps,
                       chunk_size, threads):
    eng = _engine()

    def worker(gen, m):
        return eng.lifetimes_block(
            float(x), order.beta, float(step_h), float(stop_threshold), m, gen,
            int(max_steps),
        )

    parts = run_chunks(worker, rng, n_paths, chunk_size, threads)
    lifetimes = np.concatenate([p[0] for p in parts])
    res = np.concatenate([p[1] for p in parts])
    first = np.concatenate([p[2] for p in parts])
    if np.any(lifetimes < 0.0):
        raise RunawayError(
            f"{int(np.sum(lifetimes < 0))} of {n_paths} paths exceeded "
            f"max_steps={max_steps}"
        )
    return lifetimes, res, first


def mean_lifetime_from_paths(
    x: float,
    order: FracOrder,
    step_h: float,
    stop_threshold: float,
    n_paths: int,
    rng: RngStream,
    max_steps: int = DEFAULT_MAX_STEPS,
    chunk_size: int = PATH_CHUNK,
    threads: int | None = None,
) -> PathLifetimeEstimate:
    """Mean lifetime over n_paths simulated paths, with explicit bias bound."""
    _validate_path_args(x, step_h, stop_threshold)
    if n_paths < 2:
        raise DomainError("need at least 2 paths")
    lifetimes, res, _ = _collect_lifetimes(
        x, order, step_h, stop_threshold, n_paths, rng, max_steps, chunk_size,
        threads,
    )
    mean_res = float(res.mean())
    bias = threshold_bias_bound(stop_threshold, order) + step_h * (mean_res + 1.0)
    return PathLifetimeEstimate(
        float(lifetimes.mean()),
        float(lifetimes.std(ddof=1) / math.sqrt(n_paths)),
        bias,
        mean_res,
        int(n_paths),
        active_backend(),
    )


def first_resurrection_stats(
    x: float,
    order: FracOrder,
    step_h: float,
    stop_threshold: float,
    n_paths: int,
    rng: RngStream,
    max_steps: int = DEFAULT_MAX_STEPS,
    chunk_size: int = PATH_CHUNK,
    threads: int | None = None,
) -> tuple[float, float, int]:
    """Mean and stderr of the first-resurrection position (paths that
    reached the threshold without censoring are excluded)."""
    _validate_path_args(x, step_h, stop_threshold)
    _, _, first = _collect_lifetimes(
        x, order, step_h, stop_threshold, n_paths, rng, max_steps, chunk_size,
        threads,
    )
    vals = first[~np.isnan(first)]
    if vals.size < 2:
        raise DomainError("too few resurrection events observed")
    return (
        float(vals.mean()),
        float(vals.std(ddof=1) / math.sqrt(vals.size)),
        int(vals.size),
    )


def paired_halving_estimates(
    x: float,
    order: FracOrder,
    step_h: float,
    stop_threshold: float,
    n_paths: int,
    rng: RngStream,
    max_steps: int = DEFAULT_MAX_STEPS,
    chunk_size: int = PATH_CHUNK,
    threads: int | None = None,
) -> PairedHalvingEstimate:
    """Common-noise comparison of the lifetime estimate at steps h and h/2."""
    _validate_path_args(x, step_h, stop_threshold)
    if n_paths < 2:
        raise DomainError("need at least 2 paths")
    eng = _engine()

    def worker(gen, m):
        return eng.paired_lifetimes_block(
            float(x), order.beta, float(step_h), float(stop_threshold), m, gen,
            int(max_steps),
        )

    parts = run_chunks(worker, rng, n_paths, chunk_size, threads)
    coarse = np.concatenate([p[0] for p in parts])
    fine = np.concatenate([p[1] for p in parts])
    if np.any(coarse < 0.0):
        raise RunawayError("paired paths exceeded the step guard")
    diff = coarse - fine
    return PairedHalvingEstimate(
        float(step_h),
        float(coarse.mean()),
        float(fine.mean()),
        float(diff.std(ddof=1) / math.sqrt(n_paths)),
        int(n_paths),
    )


def estimate_feynman_kac(
    g: Forcing,
    x: float,
    order: FracOrder,
    n_paths: int,
    step_h: float,
    rng: RngStream,
    stop_threshold: float = 1e-3,
    max_steps: int = DEFAULT_MAX_STEPS,
    chunk_size: int = PATH_CHUNK,
    threads: int | None = None,
) -> tuple[float, float]:
    """E_x[ int_0^tau g(path) ds ] by accumulating g(position) h per step."""
    _validate_path_args(x, step_h, stop_threshold)
    if n_paths < 2:
        raise DomainError("need at least 2 paths")
    b = order.beta
    g_vec = g.fn

    if active_backend() == "cython":

        def worker(gen, m):
            sums = np.empty(m)
            lifetimes = np.empty(m)
            buf = np.empty(_FK_BUF)
            for i in range(m):
                pos = float(x)
                total = 0.0
                steps = 0
                done = False
                while steps < max_steps:
                    take = min(_FK_BUF, int(max_steps) - steps)
                    pos, k, _, flag = _pathcore_cy.path_chunk(
                        pos, b, step_h, stop_threshold, gen, buf[:take]
                    )
                    if k:
                        total += float(
                            np.add.reduce(np.asarray(g_vec(buf[:k]), dtype=float))
                        )
                    steps += k
                    if flag:
                        done = True
                        break
                sums[i] = total
                lifetimes[i] = steps * step_h if done else -1.0
            return sums, lifetimes

    else:

        def worker(gen, m):
            return _pathcore_py.fk_blocks(
                float(x), b, float(step_h), float(stop_threshold), m, gen,
                int(max_steps), g_vec,
            )

    parts = run_chunks(worker, rng, n_paths, chunk_size, threads)
    sums = np.concatenate([p[0] for p in parts])
    lifetimes = np.concatenate([p[1] for p in parts])
    if np.any(lifetimes < 0.0):
        raise RunawayError("paths exceeded max_steps during Feynman-Kac run")
    integrals = step_h * sums
    return (
        float(integrals.mean()),
        float(integrals.std(ddof=1) / math.sqrt(n_paths)),
    )
