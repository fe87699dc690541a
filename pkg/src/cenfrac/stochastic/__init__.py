"""Monte Carlo engines: beta random walk, stable sampling, censored paths."""

from .chains import (
    ChainSample,
    estimate_lifetime,
    estimate_series_solution,
    lifetime_closed_form,
    sample_beta_increment,
    sample_chain,
    series_truncation_bound,
)
from .paths import (
    PairedHalvingEstimate,
    PathLifetimeEstimate,
    PathSample,
    active_backend,
    estimate_feynman_kac,
    first_resurrection_stats,
    mean_lifetime_from_paths,
    paired_halving_estimates,
    simulate_censored_path,
    threshold_bias_bound,
)
from .rng import RngStream
from .stable import sample_stable, sample_stable_block

__all__ = [
    "ChainSample",
    "PairedHalvingEstimate",
    "PathLifetimeEstimate",
    "PathSample",
    "RngStream",
    "active_backend",
    "estimate_feynman_kac",
    "estimate_lifetime",
    "estimate_series_solution",
    "first_resurrection_stats",
    "lifetime_closed_form",
    "mean_lifetime_from_paths",
    "paired_halving_estimates",
    "sample_beta_increment",
    "sample_chain",
    "sample_stable",
    "sample_stable_block",
    "series_truncation_bound",
    "simulate_censored_path",
    "threshold_bias_bound",
]
