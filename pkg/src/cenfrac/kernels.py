"""The beta-density kernel hierarchy, the operator K, and its Neumann sum.

The base kernel

    k_1(x, r) = (x - r)^(beta-1) r^(-beta) / (Gamma(beta) Gamma(1-beta)),
    0 < r < x,

is the Beta(1-beta, beta) density rescaled to (0, x).  Higher kernels k_j
are its j-fold composition; they are never evaluated by nested integrals
but realized operationally as repeated application of

    (K psi)(x) = int_0^x k_1(x, r) psi(r) dr.

Grid data is factored as psi(x) = x^alpha q(x) whenever an envelope
certificate |psi| <= M x^alpha is attached: the quotient q is what gets
interpolated and integrated (against a Gauss-Jacobi weight that absorbs the
monomial part exactly), so monomial inputs are handled to machine precision
and smooth corrections spectrally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ContractError, DivergenceError, DomainError, UsageError
from .interpolation import BaryBasis, cgl_nodes
from .quadrature import DEFAULT_ORDER, jacobi_rule_01
from .special import FracOrder, rho

__all__ = [
    "GridFunction",
    "KernelEval",
    "grid_function_from",
    "k1_density",
    "k2_density",
    "kernel_density",
    "kernel_moment",
    "apply_K",
    "neumann_terms",
    "neumann_sum",
]

DEFAULT_NODES = 64

# relative slack allowed when validating |values| <= M x^alpha
_ENVELOPE_RTOL = 1e-12


@dataclass(frozen=True)
class GridFunction:
    """Function values on an increasing node set in (0, T] with an
    interpolation contract.

    ``envelope=(M, alpha)`` certifies |psi(x)| <= M x^alpha on (0, T]; it is
    checked against the stored values at construction.  Interpolation acts
    on the quotient q = psi / x^alpha (alpha = 0 when no envelope), via
    barycentric Lagrange interpolation in the variable x^interp_power.
    ``interp_power`` stays 1 for data whose quotient is smooth in x; series
    with a pure x^beta scale use interp_power = beta.

    Instances are immutable; arrays are stored read-only.
    """

    domain_end: float
    nodes: np.ndarray
    values: np.ndarray
    envelope: Optional[tuple[float, float]] = None
    interp_power: float = 1.0

    def __post_init__(self):
        T = float(self.domain_end)
        if not T > 0.0:
            raise DomainError(f"domain_end must be positive, got {T}")
        nodes = np.array(self.nodes, dtype=float)
        values = np.array(self.values, dtype=float)
        if nodes.ndim != 1 or nodes.shape != values.shape:
            raise ContractError("nodes and values must be 1-D arrays of equal length")
        if nodes.size < 4:
            raise ContractError("interpolation contract needs at least 4 nodes")
        if not nodes[0] > 0.0:
            raise DomainError("nodes must lie in (0, T]")
        if np.any(np.diff(nodes) <= 0.0):
            raise ContractError("nodes must be strictly increasing")
        if nodes[-1] > T * (1.0 + 1e-12):
            raise DomainError("nodes must lie in (0, T]")
        if not float(self.interp_power) > 0.0:
            raise ContractError("interp_power must be positive")
        env = self.envelope
        if env is not None:
            M, alpha = float(env[0]), float(env[1])
            if not M > 0.0 or alpha < 0.0:
                raise ContractError(f"envelope must have M > 0, alpha >= 0, got {env}")
            bound = M * nodes**alpha
            if np.any(np.abs(values) > bound * (1.0 + _ENVELOPE_RTOL) + 1e-300):
                worst = np.max(np.abs(values) - bound)
                raise ContractError(
                    f"envelope (M={M}, alpha={alpha}) violated by {worst:.3e}"
                )
            env = (M, alpha)
        nodes.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "domain_end", T)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "envelope", env)
        s = nodes ** float(self.interp_power)
        # exact zeros stay zeros even where nodes**alpha underflows
        with np.errstate(invalid="ignore", divide="ignore"):
            quot = np.where(values == 0.0, 0.0, values / nodes**self.alpha)
        s.setflags(write=False)
        quot.setflags(write=False)
        object.__setattr__(self, "_quotient", quot)
        object.__setattr__(self, "_basis", BaryBasis(s))

    @property
    def alpha(self) -> float:
        return self.envelope[1] if self.envelope is not None else 0.0

    def quotient(self, x) -> np.ndarray | float:
        """Interpolated q(x) = psi(x)/x^alpha."""
        s = np.asarray(x, dtype=float) ** self.interp_power
        return self._basis.interpolate(self._quotient, s)

    def __call__(self, x) -> np.ndarray | float:
        xq = np.asarray(x, dtype=float)
        if np.any(xq < 0.0) or np.any(xq > self.domain_end * (1.0 + 1e-12)):
            raise DomainError("evaluation outside [0, T]")
        scalar = xq.ndim == 0
        xq = np.atleast_1d(xq)
        out = np.empty_like(xq)
        pos = xq > 0.0
        a = self.alpha
        if pos.any():
            q = np.atleast_1d(self.quotient(xq[pos]))
            out[pos] = xq[pos] ** a * q
        if (~pos).any():
            if a > 0.0:
                out[~pos] = 0.0
            else:
                out[~pos] = np.atleast_1d(self.quotient(np.zeros(1)))[0]
        return float(out[0]) if scalar else out

    def with_values(self, values, envelope) -> "GridFunction":
        return GridFunction(
            self.domain_end, self.nodes, values, envelope, self.interp_power
        )


def grid_function_from(
    fn,
    domain_end: float,
    n_nodes: int = DEFAULT_NODES,
    envelope: Optional[tuple[float, float]] = None,
    interp_power: float = 1.0,
) -> GridFunction:
    """Sample a callable on the standard Chebyshev node set of (0, T]."""
    nodes = cgl_nodes(n_nodes, domain_end)
    values = np.asarray(fn(nodes), dtype=float)
    return GridFunction(domain_end, nodes, values, envelope, interp_power)


@dataclass(frozen=True)
class KernelEval:
    """A pointwise kernel-evaluation request (stage j at argument x)."""

    j: int
    x: float
    quadrature_order: int = DEFAULT_ORDER

    def __post_init__(self):
        if self.j < 1:
            raise DomainError(f"kernel stage must be >= 1, got {self.j}")
        if self.quadrature_order < 4:
            raise DomainError("quadrature_order must be >= 4")
        if not self.x > 0.0:
            raise DomainError("kernel argument x must be positive")


def k1_density(x: float, r, order: FracOrder):
    """k_1(x, r) for 0 < r < x; the Beta(1-beta, beta) density scaled to (0, x)."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x}")
    rr = np.asarray(r, dtype=float)
    if np.any(rr <= 0.0) or np.any(rr >= x):
        raise DomainError("density is supported on the open interval (0, x)")
    b = order.beta
    out = (x - rr) ** (b - 1.0) * rr ** (-b) / (math.gamma(b) * order.gamma_1mb)
    return float(out) if np.ndim(r) == 0 else out


def k2_density(
    x: float,
    r: float,
    order: FracOrder,
    quad_order: int = 2 * DEFAULT_ORDER,
    orientation: str = "from_lower",
) -> float:
    """k_2(x, r) by composing k_1 with itself by quadrature.

    Both orientations of the composition integral are exposed so they can be
    cross-checked; they parameterize the inner variable from r or from x.
    Validation helper only: stages j >= 2 are realized by apply_K in the
    solvers, not by nested integrals.
    """
    x, r = float(x), float(r)
    if not 0.0 < r < x:
        raise DomainError("k2_density requires 0 < r < x")
    b = order.beta
    t, w = jacobi_rule_01(quad_order, b - 1.0, b - 1.0)
    if orientation == "from_lower":
        s = r + (x - r) * t
    elif orientation == "from_upper":
        s = x - (x - r) * t[::-1]
        w = w[::-1]
    else:
        raise UsageError(f"unknown orientation {orientation!r}")
    smooth = s ** (-b)
    norm = (x - r) ** (2.0 * b - 1.0) * r ** (-b) / (math.gamma(b) * order.gamma_1mb) ** 2
    return norm * float(np.add.reduce(w * smooth))


def kernel_density(req: KernelEval, r: float, order: FracOrder) -> float:
    """Dispatch k_j(x, r) for j in {1, 2}; higher stages are out of scope."""
    if req.j == 1:
        return k1_density(req.x, r, order)
    if req.j == 2:
        return k2_density(req.x, r, order, req.quadrature_order)
    raise UsageError("closed/numeric kernels are provided for j <= 2 only; "
                     "higher stages are realized by apply_K")


def kernel_moment(j: int, x: float, alpha: float, order: FracOrder) -> float:
    """Closed form int_0^x r^alpha k_j(x, r) dr = x^alpha rho(alpha, beta)^j."""
    if j < 1 or int(j) != j:
        raise DomainError(f"kernel stage must be a positive integer, got {j}")
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x}")
    if alpha < 0.0:
        raise DomainError(f"alpha must be >= 0, got {alpha}")
    return x**alpha * rho(alpha, order) ** int(j)


def apply_K(
    psi: GridFunction, order: FracOrder, quad_order: int = DEFAULT_ORDER
) -> GridFunction:
    """(K psi)(x) = int_0^x k_1(x, r) psi(r) dr on psi's node set.

    Maps r = x t so the Jacobi weight (1-t)^(beta-1) t^(alpha-beta)
    absorbs both the kernel and the envelope factor; the quadrature then
    sees only the smooth quotient q = psi/x^alpha.  With an envelope
    (M, alpha), the output carries (M rho(alpha, beta), alpha): one kernel
    pass contracts the monomial bound by rho.  The node sums use a fixed
    summation order, so results are deterministic.
    """
    b = order.beta
    t, w = jacobi_rule_01(quad_order, b - 1.0, psi.alpha - b)
    pts = np.multiply.outer(psi.nodes, t)
    q = np.atleast_2d(psi.quotient(pts.ravel())).reshape(pts.shape)
    sums = np.add.reduce(q * w, axis=1)
    scale = 1.0 / (math.gamma(b) * order.gamma_1mb)
    values = psi.nodes**psi.alpha * sums * scale
    env = psi.envelope
    if env is not None:
        M, a = env
        out_env = (M * rho(a, order) * (1.0 + 1e-12), a)
    else:
        out_env = None
    return psi.with_values(values, out_env)


def _tail_depth(M: float, alpha: float, T: float, r: float, tol: float,
                max_terms: int) -> int:
    """Smallest J >= 1 with M T^alpha r^(J+1)/(1-r) < tol."""
    tail = M * T**alpha * r / (1.0 - r)
    depth = 0
    while depth < max_terms:
        depth += 1
        tail *= r
        if tail < tol:
            return depth
    raise DivergenceError(
        f"Neumann tail still {tail:.3e} after {max_terms} terms "
        f"(contraction ratio {r:.6f})"
    )


def neumann_terms(
    psi: GridFunction,
    order: FracOrder,
    tol: float,
    quad_order: int = DEFAULT_ORDER,
    max_terms: int = 10_000,
) -> tuple[list[GridFunction], float]:
    """Terms [K psi, K^2 psi, ...] truncated by the geometric tail bound.

    Requires an envelope with alpha > 0.  The truncation uses the exact
    geometric tail M T^alpha rho^(J+1)/(1-rho) of the monomial bound; the
    returned tail is a rigorous sup-norm bound on the dropped remainder.
    """
    if psi.envelope is None:
        raise ContractError("neumann series requires an envelope certificate")
    M, alpha = psi.envelope
    if alpha <= 0.0:
        raise DivergenceError(
            "envelope exponent alpha = 0: every kernel stage has unit mass, "
            "so the Neumann series of a bounded-below input diverges"
        )
    if not tol > 0.0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not np.any(psi.values):
        return [apply_K(psi, order, quad_order)], 0.0
    r = rho(alpha, order)
    depth = _tail_depth(M, alpha, psi.domain_end, r, tol, max_terms)
    terms = []
    current = psi
    for _ in range(depth):
        current = apply_K(current, order, quad_order)
        terms.append(current)
    tail = M * psi.domain_end**alpha * r ** (depth + 1) / (1.0 - r)
    return terms, tail


def neumann_sum(
    psi: GridFunction,
    order: FracOrder,
    tol: float,
    quad_order: int = DEFAULT_ORDER,
    max_terms: int = 10_000,
) -> tuple[GridFunction, int, float]:
    """sum_{j>=1} K^j psi truncated so the dropped tail is below tol.

    Returns (sum, depth, tail_bound); the sup distance to the exact sum is
    at most tail_bound <= tol.  For psi = M x^alpha exactly the sum equals
    M x^alpha (Gamma(1+alpha) Gamma(1-beta)/Gamma(alpha+1-beta) - 1)^{-1}.
    """
    terms, tail = neumann_terms(psi, order, tol, quad_order, max_terms)
    total = np.zeros_like(psi.values)
    for term in terms:
        total = total + term.values
    M, alpha = psi.envelope
    r = rho(alpha, order)
    env = (M * r / (1.0 - r) * (1.0 + 1e-12) + 1e-300, alpha)
    return psi.with_values(total, env), len(terms), tail
