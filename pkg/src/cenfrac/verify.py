"""The acceptance suite: every identity the package promises, as one registry.

Each criterion computes an ``achieved`` statistic and a ``budget``; it
passes when achieved <= budget * tol_scale (tol_scale = 0 is the injected
fault mode where every check fails).  The same registry backs both the
pytest acceptance module and the ``cenfrac verify`` subcommand.

Monte Carlo checks run at the pinned sample sizes with fixed substreams of
the configured seed and use coverage bands of 4 standard errors plus any
analytic truncation or discretization bound the estimator reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import stats
from scipy.special import betaincinv

from . import ivp, kernels, rl, special, stochastic
from .errors import DivergenceError
from .special import FracOrder, c_coeff, rho

BETAS = (0.3, 0.5, 0.7)
DEFAULT_SEED = 20260810


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    target: str
    achieved: float
    budget: float
    detail: str = ""


@dataclass(frozen=True)
class VerifyConfig:
    betas: Optional[tuple[float, ...]] = None
    seed: int = DEFAULT_SEED
    quick: bool = False
    tol_scale: float = 1.0
    threads: Optional[int] = None

    def beta_set(self) -> tuple[float, ...]:
        return self.betas if self.betas else BETAS

    def beta_one(self) -> float:
        return self.betas[0] if self.betas else 0.5

    def n(self, full: int) -> int:
        return max(200, full // 20) if self.quick else full

    def stream(self, index: int) -> stochastic.RngStream:
        return stochastic.RngStream(self.seed, index)


def _result(cfg, name, target, achieved, budget, detail="") -> CheckResult:
    passed = cfg.tol_scale > 0 and achieved <= budget * cfg.tol_scale
    return CheckResult(name, passed, target, float(achieved), float(budget), detail)


# --------------------------------------------------------------------------
# 1. monomial identity D x^a = C_(a,b) * (R-L derivative of x^a)


def _monomial_smoothfn(alpha: float) -> rl.SmoothFn:
    return rl.SmoothFn(
        lambda x: np.asarray(x, dtype=float) ** alpha,
        lambda x: alpha * np.asarray(x, dtype=float) ** (alpha - 1.0),
        origin_power=alpha,
        domain_end=1.0,
    )


def check_monomial_identity(cfg: VerifyConfig) -> list[CheckResult]:
    out = []
    xs = np.linspace(0.125, 1.0, 8)
    for b in cfg.beta_set():
        order = FracOrder(b)
        worst = 0.0
        for alpha in (0.25, 0.5, 1.0, 2.0):
            u = _monomial_smoothfn(alpha)
            ref = c_coeff(alpha, order) * rl.rl_derivative(u, order, xs)
            for route in ("definition", "jump_integral"):
                got = rl.censored_derivative(u, order, xs, route)
                worst = max(worst, float(np.max(np.abs(got - ref) / np.abs(ref))))
        out.append(
            _result(
                cfg,
                f"monomial_identity[beta={b}]",
                "rel err <= 1e-6 (both routes, alpha in {0.25,0.5,1,2}, 8 points)",
                worst,
                1e-6,
            )
        )
    return out


# --------------------------------------------------------------------------
# 2./3. closed-form solutions of the linear problem


def check_constant_forcing(cfg: VerifyConfig) -> list[CheckResult]:
    out = []
    xs = np.geomspace(0.01, 1.0, 41)
    for b in cfg.beta_set():
        order = FracOrder(b)
        g = rl.constant_forcing(1.0, order, 1.0)
        sol = ivp.solve_linear(g, 0.0, order, 1.0, 1e-10)
        ref = stochastic.lifetime_closed_form(xs, order)
        err = float(np.max(np.abs(sol(xs) - ref) / np.abs(ref)))
        out.append(
            _result(
                cfg,
                f"constant_forcing[beta={b}]",
                "sup rel err <= 1e-8 on [0.01, 1]",
                err,
                1e-8,
                f"u(1)={sol(1.0):.10f}",
            )
        )
    return out


def check_polynomial_forcing(cfg: VerifyConfig) -> list[CheckResult]:
    out = []
    xs = np.geomspace(0.01, 1.0, 41)
    for b in cfg.beta_set():
        order = FracOrder(b)
        worst = 0.0
        for alpha in (0.5, 1.0, 2.0):
            g = rl.power_forcing(alpha, order, 1.0)
            sol = ivp.solve_linear(g, 0.25, order, 1.0, 1e-10)
            coef = math.exp(
                special.log_gamma(alpha + 1.0) - special.log_gamma(alpha + b + 1.0)
            ) / c_coeff(alpha + b, order)
            ref = 0.25 + coef * xs ** (alpha + b)
            worst = max(worst, float(np.max(np.abs(sol(xs) - ref) / np.abs(ref))))
        out.append(
            _result(
                cfg,
                f"polynomial_forcing[beta={b}]",
                "sup rel err <= 1e-8, alpha in {0.5,1,2}",
                worst,
                1e-8,
            )
        )
    return out


# --------------------------------------------------------------------------
# 4./5. kernel moments and the geometric Neumann identity


def check_kernel_moments(cfg: VerifyConfig) -> list[CheckResult]:
    out = []
    for b in cfg.beta_set():
        order = FracOrder(b)
        worst = 0.0
        for alpha in (0.25, 0.5, 1.0, 2.0):
            psi = kernels.grid_function_from(
                lambda x, a=alpha: x**a, 1.0, envelope=(1.0, alpha)
            )
            current = psi
            for j in range(1, 6):
                current = kernels.apply_K(current, order)
                ref = psi.nodes**alpha * rho(alpha, order) ** j
                worst = max(
                    worst, float(np.max(np.abs(current.values - ref) / np.abs(ref)))
                )
        out.append(
            _result(
                cfg,
                f"kernel_moments[beta={b}]",
                "iterated K on x^alpha matches x^alpha rho^j to 1e-8, j <= 5",
                worst,
                1e-8,
            )
        )
    return out


def check_neumann_geometric(cfg: VerifyConfig) -> list[CheckResult]:
    out = []
    for b in cfg.beta_set():
        order = FracOrder(b)
        worst = 0.0
        for M, alpha in ((2.0, 0.5), (1.0, 1.5)):
            psi = kernels.grid_function_from(
                lambda x, M=M, a=alpha: M * x**a, 1.0, envelope=(M, alpha)
            )
            total, _, _ = kernels.neumann_sum(psi, order, 1e-12)
            r = rho(alpha, order)
            ref = M * psi.nodes**alpha * r / (1.0 - r)
            worst = max(worst, float(np.max(np.abs(total.values - ref) / np.abs(ref))))
        out.append(
            _result(
                cfg,
                f"neumann_geometric[beta={b}]",
                "sum K^j (M x^alpha) matches the geometric closed form to 1e-8",
                worst,
                1e-8,
            )
        )
    return out


# --------------------------------------------------------------------------
# 6. eigen-series residual under the censored derivative


def _eigen_truncated(full: ivp.SeriesSolution, depth: int) -> ivp.SeriesSolution:
    return ivp.SeriesSolution(
        full.order,
        full.u0,
        full.terms[:depth],
        depth,
        full.tail_bound,
        full.domain_end,
        monomials=full.monomials[:depth],
    )


def _eigen_residual(sol: ivp.SeriesSolution, lam: float, xs: np.ndarray) -> float:
    u = rl.SmoothFn(
        sol, sol.derivative, origin_power=sol.order.beta, domain_end=sol.domain_end
    )
    res = rl.censored_derivative(u, sol.order, xs, "jump_integral") - lam * sol(xs)
    return float(np.max(np.abs(res)))


def check_eigen_residual(cfg: VerifyConfig) -> list[CheckResult]:
    out = []
    order = FracOrder(cfg.beta_one())
    # away from the pinned beta = 1/2 the series coefficients can peak many
    # orders above the solution values; shrink the horizon until the term
    # scale is benign, or series evaluation drowns in cancellation noise
    T = 1.0
    while True:
        probe = ivp.solve_eigen(1.0, 1.0, order, T, 1e-12)
        if max(abs(c) * T**e for c, e in probe.monomials) <= 30.0:
            break
        T *= 0.7
    xs = np.linspace(0.1 * T, T, 19)
    for lam in (-1.0, 1.0):
        full = ivp.solve_eigen(lam, 1.0, order, T, 1e-12)
        res_full = _eigen_residual(full, lam, xs)
        # the depth-D residual is the first dropped term, |lam| |c_D| x^(D b);
        # |c_D| grows until the product factors exceed |lam| Gamma(1-b) T^b,
        # so the monotone decrease is scanned past that turnover
        scale = abs(lam) * order.gamma_1mb * T**order.beta
        n0 = 1
        while special.ml_term(n0 + 1, order) <= scale:
            n0 += 1
        depths = [d for d in range(n0, n0 + 13, 2) if d <= full.depth]
        scan = [_eigen_residual(_eigen_truncated(full, d), lam, xs) for d in depths]
        decreasing = all(scan[i + 1] < scan[i] for i in range(len(scan) - 1))
        out.append(
            _result(
                cfg,
                f"eigen_residual[lambda={lam:+.0f}]",
                f"sup |D u - lam u| <= 1e-3 on [{0.1 * T:g}, {T:g}]; "
                "residual decreases in depth",
                res_full if decreasing else math.inf,
                1e-3,
                f"full-depth residual {res_full:.2e}; at depths {depths}: "
                f"{['%.2e' % r for r in scan]}",
            )
        )
    return out


# --------------------------------------------------------------------------
# 7. Picard solver consistency and the explicit horizon

# (Gamma(1.5) - 1/Gamma(0.5))^2, the beta = 1/2 horizon at Y = M, T >= it
_HORIZON_REF = 0.10370804958123898


def check_picard(cfg: VerifyConfig) -> list[CheckResult]:
    order = FracOrder(0.5)
    spec = ivp.NonlinearSpec(
        lambda x, y: y, lipschitz_L=1.0, band_Y=1.0, sup_M=2.0, u0=1.0
    )
    result = ivp.solve_nonlinear(spec, order, 1.0, 1e-10)
    t1 = result.solution.domain_end
    eig = ivp.solve_eigen(1.0, 1.0, order, t1, 1e-12)
    xs = np.linspace(0.0, t1, 17)
    err = float(np.max(np.abs(result.solution(xs) - eig(xs))))
    horizon = ivp.horizon_T1(
        ivp.NonlinearSpec(lambda x, y: y, 1.0, 1.0, 1.0, 0.0), order, 1.0
    )
    return [
        _result(
            cfg,
            "picard_eigen_match",
            "Picard fixed point matches the eigen series to 1e-6 on [0, T1]",
            err,
            1e-6,
            f"T1={t1:.6f}, iterations={result.iterations}",
        ),
        _result(
            cfg,
            "picard_horizon_value",
            "T1(Y=M, beta=0.5, T=1) within 1e-7 of (Gamma(1.5)-Gamma(0.5)^-1)^2",
            abs(horizon - _HORIZON_REF),
            1e-7,
            f"T1={horizon!r}",
        ),
    ]


# --------------------------------------------------------------------------
# 8./9. chain-based Monte Carlo estimators


def check_probabilistic_series(cfg: VerifyConfig) -> list[CheckResult]:
    b = cfg.beta_one()
    order = FracOrder(b)
    g = rl.constant_forcing(1.0, order, 1.0)
    n = cfg.n(100_000)
    est, se = stochastic.estimate_series_solution(
        g, 1.0, order, n, 60, cfg.stream(8), threads=cfg.threads
    )
    bound = stochastic.series_truncation_bound(g, 1.0, order, 60)
    ref = stochastic.lifetime_closed_form(1.0, order)
    band = 4.0 * se + bound
    return [
        _result(
            cfg,
            "probabilistic_series",
            f"chain estimate of u(1) covers the closed form within 4 SE + tail (n={n})",
            abs(est - ref),
            band,
            f"est={est:.6f} ref={ref:.6f} se={se:.2e}",
        )
    ]


def check_lifetime_estimator(cfg: VerifyConfig) -> list[CheckResult]:
    b = cfg.beta_one()
    order = FracOrder(b)
    n = cfg.n(100_000)
    est1, se1, tail1 = stochastic.estimate_lifetime(
        1.0, order, n, 60, cfg.stream(9), threads=cfg.threads
    )
    ref = stochastic.lifetime_closed_form(1.0, order)
    est2, se2, tail2 = stochastic.estimate_lifetime(
        2.0, order, n, 60, cfg.stream(10), threads=cfg.threads
    )
    ratio = est2 / est1
    se_ratio = ratio * math.sqrt((se1 / est1) ** 2 + (se2 / est2) ** 2)
    return [
        _result(
            cfg,
            "lifetime_rao_blackwell",
            f"lifetime estimate covers x^b/Gamma(1+b) * b pi/(b pi - sin b pi) (n={n})",
            abs(est1 - ref),
            4.0 * se1 + tail1,
            f"est={est1:.6f} ref={ref:.6f}",
        ),
        _result(
            cfg,
            "lifetime_scaling",
            "estimate(2)/estimate(1) covers 2^beta within 4 combined SE",
            abs(ratio - 2.0**b),
            4.0 * se_ratio + 2.0 * (tail1 + tail2),
            f"ratio={ratio:.6f}",
        ),
    ]


# --------------------------------------------------------------------------
# 10./11. path simulator and Feynman-Kac


def _path_params(cfg: VerifyConfig, b: float) -> tuple[float, float]:
    h = 1e-3 if cfg.quick else 1e-4
    # at the pinned beta the threshold is the spec value 1e-3; elsewhere it
    # is rescaled so the forfeited-lifetime bound stays ~2.5% of the target
    threshold = 1e-3 if b == 0.5 else 0.025 ** (1.0 / b)
    return h, threshold


def check_path_simulator(cfg: VerifyConfig) -> list[CheckResult]:
    b = cfg.beta_one()
    order = FracOrder(b)
    h, threshold = _path_params(cfg, b)
    n = cfg.n(20_000)
    ref = stochastic.lifetime_closed_form(1.0, order)
    est = stochastic.mean_lifetime_from_paths(
        1.0, order, h, threshold, n, cfg.stream(11), threads=cfg.threads
    )
    paired = stochastic.paired_halving_estimates(
        1.0, order, h, threshold, cfg.n(5000), cfg.stream(12), threads=cfg.threads
    )
    return [
        _result(
            cfg,
            "path_mean_lifetime",
            f"mean lifetime within 5% of the closed form (h={h}, n={n}); "
            "every path terminates",
            abs(est.estimate - ref) / ref,
            0.05,
            f"est={est.estimate:.5f} ref={ref:.5f} bias_bound={est.bias_bound:.4f} "
            f"resurrections/path={est.mean_resurrections:.2f}",
        ),
        _result(
            cfg,
            "path_halving_move",
            "halving h moves the common-noise estimate by < 1%",
            paired.relative_move,
            0.01,
            f"h={paired.coarse:.5f} h/2={paired.fine:.5f}",
        ),
    ]


def check_feynman_kac(cfg: VerifyConfig) -> list[CheckResult]:
    b = cfg.beta_one()
    order = FracOrder(b)
    h, threshold = _path_params(cfg, b)
    n = cfg.n(10_000)
    out = []
    for label, g in (
        ("const", rl.constant_forcing(1.0, order, 1.0)),
        ("sqrt", rl.power_forcing(0.5, order, 1.0)),
    ):
        ref = float(ivp.solve_linear(g, 0.0, order, 1.0, 1e-10)(1.0))
        est, se = stochastic.estimate_feynman_kac(
            g, 1.0, order, n, h, cfg.stream(13), stop_threshold=threshold,
            threads=cfg.threads,
        )
        out.append(
            _result(
                cfg,
                f"feynman_kac[{label}]",
                "matches the linear solve within 4 SE + 5% discretization allowance",
                abs(est - ref),
                4.0 * se + 0.05 * abs(ref),
                f"est={est:.5f} ref={ref:.5f}",
            )
        )
    return out


# --------------------------------------------------------------------------
# 12. Hoelder limit at the origin


def check_holder_limit(cfg: VerifyConfig) -> list[CheckResult]:
    b = cfg.beta_one()
    order = FracOrder(b)
    out = []
    for label, g in (
        ("const", rl.constant_forcing(1.0, order, 1.0)),
        ("cos", rl.cos_forcing(order, 1.0)),
    ):
        sol = ivp.solve_linear(g, 0.5, order, 1.0, 1e-10)
        dev = ivp.holder_limit_check(sol, g)
        out.append(
            _result(
                cfg,
                f"holder_limit[{label}]",
                "(u(x)-u0)/x^b at x=1e-3 within 2% of g(0) G(1-b) sin(b pi)/(b pi - sin b pi)",
                dev,
                2e-2,
            )
        )
    return out


# --------------------------------------------------------------------------
# 13./14. distributional checks


def check_chi_square(cfg: VerifyConfig) -> list[CheckResult]:
    b = cfg.beta_one()
    order = FracOrder(b)
    n = cfg.n(1_000_000)
    n_bins = 50
    gen = cfg.stream(14).generator()
    z = gen.beta(1.0 - b, b, size=n)
    # equal-probability bins of Beta(1-b, b); X_1 = x Z with x = 1
    edges = betaincinv(1.0 - b, b, np.linspace(0.0, 1.0, n_bins + 1))
    counts, _ = np.histogram(z, bins=edges)
    expected = n / n_bins
    chi2 = float(((counts - expected) ** 2 / expected).sum())
    crit = float(stats.chi2.ppf(0.99, n_bins - 1))
    return [
        _result(
            cfg,
            "first_resurrection_chi_square",
            f"chi-square of X_1 against the stage-1 kernel density, 1% level "
            f"({n_bins} bins, n={n})",
            chi2,
            crit,
            f"chi2={chi2:.2f} crit={crit:.2f}",
        )
    ]


def check_stable_laplace(cfg: VerifyConfig) -> list[CheckResult]:
    b = cfg.beta_one()
    order = FracOrder(b)
    n = cfg.n(1_000_000)
    s = stochastic.sample_stable_block(cfg.stream(15), n, order)
    worst = 0.0
    details = []
    for k in (0.5, 1.0, 2.0):
        vals = np.exp(-k * s)
        se = float(vals.std(ddof=1) / math.sqrt(n))
        z = abs(float(vals.mean()) - math.exp(-(k**b))) / (4.0 * se)
        worst = max(worst, z)
        details.append(f"k={k}: z/4SE={z:.3f}")
    return [
        _result(
            cfg,
            "stable_laplace_transform",
            f"empirical E[exp(-k S)] within 4 SE of exp(-k^beta), k in (0.5,1,2), n={n}",
            worst,
            1.0,
            "; ".join(details),
        )
    ]


# --------------------------------------------------------------------------
# 15. property suite


def _random_peaked_smoothfn(gen: np.random.Generator) -> tuple[rl.SmoothFn, float]:
    xstar = float(gen.uniform(0.3, 0.7))
    omega = float(gen.uniform(1.0, 6.0))
    phase = float(gen.uniform(0.0, 2.0 * math.pi))
    amp = float(gen.uniform(0.0, 0.3))

    def p(x):
        return 1.0 + amp * np.sin(omega * np.asarray(x, dtype=float) + phase)

    def dp(x):
        return amp * omega * np.cos(omega * np.asarray(x, dtype=float) + phase)

    def fn(x):
        x = np.asarray(x, dtype=float)
        return 1.0 - (x - xstar) ** 2 * p(x)

    def deriv(x):
        x = np.asarray(x, dtype=float)
        return -2.0 * (x - xstar) * p(x) - (x - xstar) ** 2 * dp(x)

    return rl.SmoothFn(fn, deriv, origin_power=1.0, domain_end=1.0), xstar


def check_max_principle(cfg: VerifyConfig) -> list[CheckResult]:
    order = FracOrder(cfg.beta_one())
    gen = cfg.stream(16).generator()
    worst = math.inf
    for _ in range(20):
        u, xstar = _random_peaked_smoothfn(gen)
        worst = min(
            worst, float(rl.censored_derivative(u, order, xstar, "jump_integral"))
        )
    return [
        _result(
            cfg,
            "positive_maximum_principle",
            "D u >= -1e-9 at an interior strict maximum (20 random C^1 functions)",
            max(0.0, -worst),
            1e-9,
            f"min D u at max = {worst:.3e}",
        )
    ]


def check_scaling_law(cfg: VerifyConfig) -> list[CheckResult]:
    order = FracOrder(cfg.beta_one())
    b = order.beta
    alpha = 0.8
    u = _monomial_smoothfn(alpha)
    worst = 0.0
    for c in (0.5, 2.0, 10.0):
        v = rl.SmoothFn(
            lambda x, c=c: (np.asarray(x, dtype=float) / c) ** alpha,
            lambda x, c=c: (alpha / c) * (np.asarray(x, dtype=float) / c) ** (alpha - 1),
            origin_power=alpha,
            domain_end=c,
        )
        for x in (0.3, 0.45):
            lhs = rl.censored_derivative(v, order, c * x, "jump_integral")
            rhs = c ** (-b) * rl.censored_derivative(u, order, x, "jump_integral")
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return [
        _result(
            cfg,
            "scaling_law",
            "D[u(./c)](x) = c^-beta D[u](x/c) to 1e-7 for c in {0.5, 2, 10}",
            worst,
            1e-7,
        )
    ]


def check_non_semigroup(cfg: VerifyConfig) -> list[CheckResult]:
    b, g, a = FracOrder(0.3), FracOrder(0.6), 2.0
    lhs = c_coeff(a - g.beta, b) * c_coeff(a, g)
    rhs = c_coeff(a - b.beta, g) * c_coeff(a, b)
    diff = abs(lhs - rhs) / abs(rhs)
    return [
        _result(
            cfg,
            "non_semigroup_witness",
            "composition constants differ by > 1e-3 at (beta, gamma, alpha)=(0.3, 0.6, 2)",
            1e-3 / diff,
            1.0,
            f"rel diff = {diff:.4f}",
        )
    ]


def check_divergence_guard(cfg: VerifyConfig) -> list[CheckResult]:
    order = FracOrder(cfg.beta_one())
    psi = kernels.grid_function_from(
        lambda x: np.ones_like(x), 1.0, envelope=(1.0, 0.0)
    )
    try:
        kernels.neumann_sum(psi, order, 1e-8)
        raised = False
    except DivergenceError:
        raised = True
    try:
        ivp.solve_linear(
            rl.Forcing(lambda x: np.asarray(x) ** (-order.beta), (1.0, 0.0), 1.0),
            0.0,
            order,
            1.0,
            1e-8,
        )
        raised2 = False
    except DivergenceError:
        raised2 = True
    return [
        _result(
            cfg,
            "divergence_error_alpha_zero",
            "alpha = 0 envelopes are rejected with a divergence error",
            0.0 if (raised and raised2) else 1.0,
            0.5,
        )
    ]


def check_determinism(cfg: VerifyConfig) -> list[CheckResult]:
    order = FracOrder(cfg.beta_one())
    n = cfg.n(20_000)
    a = stochastic.estimate_lifetime(1.0, order, n, 40, cfg.stream(17))
    b = stochastic.estimate_lifetime(1.0, order, n, 40, cfg.stream(17))
    h, threshold = 1e-3, 1e-3
    p1 = stochastic.mean_lifetime_from_paths(
        1.0, order, h, threshold, cfg.n(2000), cfg.stream(18)
    )
    p2 = stochastic.mean_lifetime_from_paths(
        1.0, order, h, threshold, cfg.n(2000), cfg.stream(18), threads=4
    )
    same = a == b and p1.estimate == p2.estimate and p1.stderr == p2.stderr
    return [
        _result(
            cfg,
            "seeded_determinism",
            "identical (seed, stream) reproduce bitwise-identical estimates, "
            "independent of thread count",
            0.0 if same else 1.0,
            0.5,
        )
    ]


CRITERIA: tuple[tuple[str, Callable[[VerifyConfig], list[CheckResult]]], ...] = (
    ("monomial_identity", check_monomial_identity),
    ("constant_forcing", check_constant_forcing),
    ("polynomial_forcing", check_polynomial_forcing),
    ("kernel_moments", check_kernel_moments),
    ("neumann_geometric", check_neumann_geometric),
    ("eigen_residual", check_eigen_residual),
    ("picard", check_picard),
    ("probabilistic_series", check_probabilistic_series),
    ("lifetime", check_lifetime_estimator),
    ("path_simulator", check_path_simulator),
    ("feynman_kac", check_feynman_kac),
    ("holder_limit", check_holder_limit),
    ("chi_square", check_chi_square),
    ("stable_laplace", check_stable_laplace),
    ("max_principle", check_max_principle),
    ("scaling_law", check_scaling_law),
    ("non_semigroup", check_non_semigroup),
    ("divergence_guard", check_divergence_guard),
    ("determinism", check_determinism),
)


def run_all(cfg: VerifyConfig) -> list[CheckResult]:
    results: list[CheckResult] = []
    for name, fn in CRITERIA:
        try:
            results.extend(fn(cfg))
        except Exception as exc:  # a crashed criterion is a failed criterion
            results.append(
                CheckResult(
                    name,
                    False,
                    "criterion must run to completion",
                    math.inf,
                    0.0,
                    f"{type(exc).__name__}: {exc}",
                )
            )
    return results


def report_dict(cfg: VerifyConfig, results: list[CheckResult]) -> dict:
    from . import __version__

    return {
        "version": __version__,
        "beta": list(cfg.beta_set()),
        "seed": cfg.seed,
        "quick": cfg.quick,
        "tol_scale": cfg.tol_scale,
        "backend": stochastic.active_backend(),
        "n_checks": len(results),
        "n_passed": sum(r.passed for r in results),
        "all_passed": all(r.passed for r in results),
        "checks": [
            {
                "name": r.name,
                "passed": r.passed,
                "target": r.target,
                "achieved": r.achieved,
                "budget": r.budget,
                "detail": r.detail,
            }
            for r in results
        ],
    }
