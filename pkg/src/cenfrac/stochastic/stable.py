"""Sampling of the standard one-sided stable law E[exp(-k S)] = exp(-k^beta).

Kanter's representation: with U uniform on (0,1) and E unit exponential,

    S = (A(U)/E)^((1-beta)/beta),
    A(u) = sin(beta pi u)^(beta/(1-beta)) sin((1-beta) pi u)
           / sin(pi u)^(1/(1-beta)),

exact in distribution and O(1) per sample.  Computed in log space so the
near-endpoint u values neither under- nor overflow.
"""

from __future__ import annotations

import numpy as np

from ..special import FracOrder
from .rng import RngStream


def stable_from_uniforms(u: np.ndarray, e: np.ndarray, beta: float) -> np.ndarray:
    u = np.clip(u, 1e-16, 1.0 - 1e-16)
    e = np.maximum(e, 1e-300)
    c1 = beta / (1.0 - beta)
    c2 = 1.0 / (1.0 - beta)
    c3 = (1.0 - beta) / beta
    log_a = (
        c1 * np.log(np.sin(beta * np.pi * u))
        + np.log(np.sin((1.0 - beta) * np.pi * u))
        - c2 * np.log(np.sin(np.pi * u))
    )
    return np.exp(c3 * (log_a - np.log(e)))


def stable_block(gen: np.random.Generator, n: int, beta: float) -> np.ndarray:
    return stable_from_uniforms(gen.random(n), gen.standard_exponential(n), beta)


def sample_stable(rng: RngStream, order: FracOrder) -> float:
    """One draw of S with Laplace transform exp(-k^beta)."""
    return float(stable_block(rng.generator(), 1, order.beta)[0])


def sample_stable_block(rng: RngStream, n: int, order: FracOrder) -> np.ndarray:
    """n iid draws from a fresh generator of the stream."""
    return stable_block(rng.generator(), int(n), order.beta)
