"""Gauss-Jacobi rules on [0, 1] for weakly singular convolution integrals.

Every integral in the package has the shape

    int_0^1 (1-t)^a t^b f(t) dt,   a, b > -1,  f smooth,

after mapping r = x t; the Jacobi weight absorbs both endpoint
singularities exactly, so the rules converge spectrally in f.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.special import roots_jacobi

from .errors import DomainError

DEFAULT_ORDER = 32


@lru_cache(maxsize=512)
def jacobi_rule_01(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    """Nodes/weights for int_0^1 (1-t)^a t^b f(t) dt ~ sum w_i f(t_i).

    Nodes are interior (open rule): the weight endpoints are never sampled.
    """
    if n < 4:
        raise DomainError(f"quadrature order must be >= 4, got {n}")
    if a <= -1.0 or b <= -1.0:
        raise DomainError(f"Jacobi exponents must exceed -1, got a={a}, b={b}")
    with np.errstate(divide="ignore", invalid="ignore"):  # scipy-internal noise
        x, w = roots_jacobi(n, a, b)
    t = 0.5 * (x + 1.0)
    w = w * 0.5 ** (a + b + 1.0)
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w
