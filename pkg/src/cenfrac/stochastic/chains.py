"""The multiplicative beta random walk and its Rao-Blackwellized estimators.

The walk X_j = x * prod_{i<=j} Z_i with Z_i iid Beta(1-beta, beta) has the
kernel k_j(x, .) as the density of X_j, which makes two expectations
computable by plain averaging:

* the solution series  u(x) - u0 = sum_j E[J^beta g(X_j)], and
* the censored-process lifetime  E[tau] = sum_j E[X_j^beta]/Gamma(1+beta),
  where each summand is the conditional expectation of an excursion
  duration given the walk (Rao-Blackwellization: no time simulation, no
  bias beyond the explicit depth truncation).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ContractError, DomainError
from ..quadrature import DEFAULT_ORDER
from ..rl import Forcing, rl_integral
from ..special import FracOrder, rho
from .rng import RngStream
from .utils import run_chunks

__all__ = [
    "ChainSample",
    "sample_beta_increment",
    "sample_chain",
    "estimate_series_solution",
    "series_truncation_bound",
    "estimate_lifetime",
    "lifetime_closed_form",
]

CHUNK = 4096

# positions below this are treated as already absorbed at 0 (their envelope
# bound puts any remaining contribution far under double precision)
_TINY_POS = 1e-60


@dataclass(frozen=True)
class ChainSample:
    """One realization of the beta walk, X_0 = x > X_1 > ... > 0."""

    start_x: float
    positions: np.ndarray
    stop_reason: str  # "depth_cap" or "threshold"

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float)
        if pos.ndim != 1 or pos.size < 1 or pos[0] != self.start_x:
            raise ContractError("positions must start at start_x")
        if np.any(pos <= 0.0) or np.any(np.diff(pos) >= 0.0):
            raise ContractError("positions must be strictly decreasing and positive")
        if self.stop_reason not in ("depth_cap", "threshold"):
            raise ContractError(f"unknown stop reason {self.stop_reason!r}")
        pos.setflags(write=False)
        object.__setattr__(self, "positions", pos)

    @property
    def depth(self) -> int:
        return self.positions.size - 1


def sample_beta_increment(rng: RngStream, order: FracOrder) -> float:
    """One Beta(1-beta, beta) draw (the one-jump undershoot ratio)."""
    return float(rng.generator().beta(1.0 - order.beta, order.beta))


def sample_chain(
    x: float,
    rng: RngStream,
    order: FracOrder,
    depth_cap: int,
    threshold: float = 0.0,
) -> ChainSample:
    if not x > 0.0:
        raise DomainError(f"start point must be positive, got {x}")
    if depth_cap < 0:
        raise DomainError("depth_cap must be nonnegative")
    if threshold < 0.0:
        raise DomainError("threshold must be nonnegative")
    gen = rng.generator()
    b = order.beta
    positions = [float(x)]
    reason = "depth_cap"
    while len(positions) - 1 < depth_cap:
        if not positions[-1] > threshold:
            reason = "threshold"
            break
        nxt = positions[-1] * gen.beta(1.0 - b, b)
        if not 0.0 < nxt < positions[-1]:  # float underflow guard
            reason = "threshold"
            break
        positions.append(nxt)
    else:
        if not positions[-1] > threshold:
            reason = "threshold"
    return ChainSample(float(x), np.array(positions), reason)


def estimate_series_solution(
    g: Forcing,
    x: float,
    order: FracOrder,
    n_chains: int,
    depth_cap: int,
    rng: RngStream,
    quad_order: int = DEFAULT_ORDER,
    chunk_size: int = CHUNK,
    threads: int | None = None,
) -> tuple[float, float]:
    """Monte Carlo estimate of u(x) - u0 = sum_j E[J^beta g(X_j)].

    Per chain the sum runs j = 0..depth_cap (j = 0 is the deterministic
    J^beta g(x)).  Unbiased for the depth-capped sum; the remaining bias is
    bounded by :func:`series_truncation_bound`.
    """
    if not x > 0.0:
        raise DomainError("x must be positive")
    if n_chains < 2:
        raise DomainError("need at least 2 chains")
    j0 = rl_integral(g, order, x, quad_order)
    b = order.beta

    def worker(gen, m):
        if depth_cap == 0:
            return np.zeros(m)
        z = gen.beta(1.0 - b, b, size=(m, depth_cap))
        pos = x * np.cumprod(z, axis=1)
        flat = pos.ravel()
        vals = np.zeros_like(flat)
        mask = flat > _TINY_POS
        if mask.any():
            vals[mask] = rl_integral(g, order, flat[mask], quad_order)
        return vals.reshape(m, depth_cap).sum(axis=1)

    sums = np.concatenate(run_chunks(worker, rng, n_chains, chunk_size, threads))
    estimate = j0 + float(sums.mean())
    stderr = float(sums.std(ddof=1) / math.sqrt(n_chains))
    return estimate, stderr


def series_truncation_bound(
    g: Forcing, x: float, order: FracOrder, depth_cap: int
) -> float:
    """Bound on the dropped sum_{j>depth_cap} E|J^beta g(X_j)|.

    |J^beta g(y)| <= Gamma(1-beta) M rho(alpha) y^alpha and
    E[X_j^alpha] = x^alpha rho(alpha)^j give a geometric tail.
    """
    from ..ivp import _certified_psi_envelope

    M, alpha = _certified_psi_envelope(g, order)
    r = rho(alpha, order)
    return order.gamma_1mb * M * x**alpha * r ** (depth_cap + 2) / (1.0 - r)


def lifetime_closed_form(x: float, order: FracOrder) -> float:
    """E[tau(x)] = x^beta/Gamma(1+beta) * beta*pi/(beta*pi - sin(beta*pi))."""
    b = order.beta
    bpi = b * math.pi
    return x**b / order.gamma_1pb * bpi / (bpi - order.sin_bpi)


def estimate_lifetime(
    x: float,
    order: FracOrder,
    n_chains: int,
    depth_cap: int,
    rng: RngStream,
    chunk_size: int = CHUNK,
    threads: int | None = None,
) -> tuple[float, float, float]:
    """Rao-Blackwellized lifetime estimate with an analytic truncation tail.

    Per chain: sum_{j=0}^{depth_cap-1} X_j^beta / Gamma(1+beta), using that
    an excursion from level y lasts y^beta/Gamma(1+beta) in expectation.
    Returns (estimate, stderr, tail_bound) with
    tail_bound = x^beta/Gamma(1+beta) rho^depth_cap/(1-rho),
    rho = 1/(Gamma(1+beta) Gamma(1-beta)).
    """
    if not x > 0.0:
        raise DomainError("x must be positive")
    if depth_cap < 0:
        raise DomainError("depth_cap must be nonnegative")
    b = order.beta
    r = rho(b, order)
    lead = x**b / order.gamma_1pb
    tail = lead * r**depth_cap / (1.0 - r)
    if depth_cap == 0:
        return 0.0, 0.0, tail
    if n_chains < 2:
        raise DomainError("need at least 2 chains")

    def worker(gen, m):
        total = np.full(m, x**b)
        if depth_cap > 1:
            z = gen.beta(1.0 - b, b, size=(m, depth_cap - 1))
            total = total + ((x * np.cumprod(z, axis=1)) ** b).sum(axis=1)
        return total / order.gamma_1pb

    sums = np.concatenate(run_chunks(worker, rng, n_chains, chunk_size, threads))
    return (
        float(sums.mean()),
        float(sums.std(ddof=1) / math.sqrt(n_chains)),
        tail,
    )
