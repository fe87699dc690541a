"""cenfrac: numerics and Monte Carlo for the censored fractional derivative.

The operator of interest on (0, T], for order beta in (0, 1):

    D u(x) = d/dx J^(1-beta) u(x) - x^(-beta) u(x) / Gamma(1-beta),

the generator (up to sign) of the decreasing beta-stable process censored
on jumping below 0.  The package evaluates the operator, solves linear and
nonlinear initial value problems by the kernel Neumann series, and verifies
the probabilistic representations (beta random walk, censored paths,
Feynman-Kac) against the closed forms by seeded Monte Carlo.
"""

from . import errors
from .ivp import (
    NonlinearResult,
    NonlinearSpec,
    SeriesSolution,
    holder_limit_check,
    horizon_T1,
    solve_affine_negative,
    solve_eigen,
    solve_linear,
    solve_nonlinear,
)
from .kernels import (
    GridFunction,
    KernelEval,
    apply_K,
    grid_function_from,
    k1_density,
    k2_density,
    kernel_density,
    kernel_moment,
    neumann_sum,
)
from .rl import (
    Forcing,
    SmoothFn,
    censored_derivative,
    check_envelope,
    constant_forcing,
    cos_forcing,
    monomial_censored_derivative,
    monomial_rl_derivative,
    power_forcing,
    rl_derivative,
    rl_integral,
    table_forcing,
)
from .special import FracOrder, c_coeff, fitted_tail_constant, gamma, ml_product, rho
from .stochastic import (
    ChainSample,
    PairedHalvingEstimate,
    PathLifetimeEstimate,
    PathSample,
    RngStream,
    active_backend,
    estimate_feynman_kac,
    estimate_lifetime,
    estimate_series_solution,
    first_resurrection_stats,
    lifetime_closed_form,
    mean_lifetime_from_paths,
    paired_halving_estimates,
    sample_beta_increment,
    sample_chain,
    sample_stable,
    sample_stable_block,
    series_truncation_bound,
    simulate_censored_path,
    threshold_bias_bound,
)

__version__ = "0.1.0"
