"""Chebyshev nodes and barycentric Lagrange interpolation.

Berrut & Trefethen's second barycentric formula with generic weights, so it
works on Chebyshev-Gauss-Lobatto node sets with the origin removed (the
node at 0 is dropped because grid data lives on (0, T]).  Evaluation below
the first node (quadrature points reach there) switches to the first
barycentric form, which stays numerically stable outside the node hull;
the second form's denominator cancels catastrophically there.
"""

from __future__ import annotations

import warnings

import numpy as np


def cgl_nodes(n: int, domain_end: float) -> np.ndarray:
    """n Chebyshev-Gauss-Lobatto nodes of [0, T] excluding 0, increasing.

    Nodes are T sin^2(k pi / (2 n)) for k = 1..n; the last node is exactly T.
    """
    k = np.arange(1, n + 1, dtype=float)
    nodes = domain_end * np.sin(0.5 * np.pi * k / n) ** 2
    nodes[-1] = domain_end
    return nodes


class BaryBasis:
    """Barycentric interpolation basis on a fixed set of distinct increasing
    nodes; weights are computed once and shared by every interpolant."""

    def __init__(self, nodes: np.ndarray):
        x = np.asarray(nodes, dtype=float)
        self.nodes = x
        self._scale = 4.0 / (x[-1] - x[0])
        diff = self._scale * np.subtract.outer(x, x)
        np.fill_diagonal(diff, 1.0)
        # log-domain products keep the weights representable at large n
        logd = np.sum(np.log(np.abs(diff)), axis=1)
        sign = np.prod(np.sign(diff), axis=1)
        self._shift = logd.min()
        self._w = sign * np.exp(self._shift - logd)
        # a huge weight spread means the node set is far from Chebyshev in
        # this variable and interpolation will lose most of its accuracy
        if logd.max() - logd.min() > 30.0:
            warnings.warn(
                "interpolation node set is severely ill-conditioned "
                f"(weight spread exp({logd.max() - logd.min():.0f})); "
                "choose nodes Chebyshev-distributed in the interpolation "
                "variable",
                stacklevel=2,
            )

    def interpolate(self, values: np.ndarray, x) -> np.ndarray | float:
        xq = np.asarray(x, dtype=float)
        scalar = xq.ndim == 0
        xq = np.atleast_1d(xq).astype(float)
        values = np.asarray(values, dtype=float)
        out = np.empty_like(xq)
        inside = (xq >= self.nodes[0]) & (xq <= self.nodes[-1])
        if inside.any():
            out[inside] = self._second_form(values, xq[inside])
        if (~inside).any():
            out[~inside] = self._first_form(values, xq[~inside])
        return float(out[0]) if scalar else out

    def _second_form(self, values: np.ndarray, xq: np.ndarray) -> np.ndarray:
        diff = np.subtract.outer(xq, self.nodes)
        hit = diff == 0.0
        diff[hit] = 1.0
        kernel = self._w / diff
        out = (kernel * values).sum(axis=-1) / kernel.sum(axis=-1)
        rows = hit.any(axis=-1)
        if rows.any():
            out[rows] = values[hit.argmax(axis=-1)[rows]]
        return out

    def _first_form(self, values: np.ndarray, xq: np.ndarray) -> np.ndarray:
        # p(x) = l(x) e^{-shift} sum_k w_k f_k/(C (x-x_k)), l the C-scaled
        # node polynomial; no cancellation-prone denominator
        diff = self._scale * np.subtract.outer(xq, self.nodes)
        log_l = np.sum(np.log(np.abs(diff)), axis=-1)
        sign_l = np.prod(np.sign(diff), axis=-1)
        kernel = self._w / diff
        return sign_l * np.exp(log_l - self._shift) * (kernel * values).sum(axis=-1)
