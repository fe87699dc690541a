import math

import numpy as np
import pytest

import cenfrac
from cenfrac import (
    FracOrder,
    PathSample,
    RngStream,
    constant_forcing,
    estimate_feynman_kac,
    estimate_lifetime,
    first_resurrection_stats,
    lifetime_closed_form,
    mean_lifetime_from_paths,
    paired_halving_estimates,
    power_forcing,
    simulate_censored_path,
    solve_linear,
    threshold_bias_bound,
)
from cenfrac.errors import ContractError, DomainError, RunawayError
from cenfrac.stochastic import paths as paths_mod


BACKENDS = ["python"] + (["cython"] if paths_mod._pathcore_cy is not None else [])


@pytest.fixture(params=BACKENDS)
def backend(request, monkeypatch):
    if request.param == "python":
        monkeypatch.setenv("CENFRAC_FORCE_PY", "1")
    else:
        monkeypatch.delenv("CENFRAC_FORCE_PY", raising=False)
    assert paths_mod.active_backend() == request.param
    return request.param


def test_path_sample_validation():
    with pytest.raises(DomainError):
        PathSample(0.0, np.array([0.0]), np.array([1.0]), 0, 0.0)
    with pytest.raises(ContractError):
        PathSample(0.1, np.array([0.0, 0.1]), np.array([1.0]), 0, 0.1)


def test_trace_invariants(order05, backend):
    p = simulate_censored_path(1.0, order05, 1e-3, 1e-3, RngStream(21))
    assert p.times[0] == 0.0
    assert p.positions[0] == 1.0
    assert np.all(p.positions[:-1] >= 1e-3)
    assert p.positions[-1] < 1e-3
    assert p.lifetime == pytest.approx((p.times.size - 1) * 1e-3)
    # positions never increase (censored steps retain, others decrease)
    assert np.all(np.diff(p.positions) <= 0.0)
    assert p.resurrection_count >= 0


def test_trace_immediate_stop(order05, backend):
    p = simulate_censored_path(1.0, order05, 1e-3, 2.0, RngStream(21))
    assert p.lifetime == 0.0
    assert p.resurrection_count == 0
    assert p.positions.tolist() == [1.0]


def test_runaway_error(order05, backend):
    with pytest.raises(RunawayError) as err:
        simulate_censored_path(1.0, order05, 1e-3, 1e-6, RngStream(21), max_steps=50)
    assert err.value.partial is not None
    assert err.value.partial.times.size >= 50


def test_mean_lifetime_determinism(order05, backend):
    a = mean_lifetime_from_paths(1.0, order05, 1e-3, 1e-3, 1500, RngStream(22))
    b = mean_lifetime_from_paths(1.0, order05, 1e-3, 1e-3, 1500, RngStream(22))
    assert a == b
    c = mean_lifetime_from_paths(
        1.0, order05, 1e-3, 1e-3, 1500, RngStream(22), threads=3
    )
    assert a.estimate == c.estimate and a.stderr == c.stderr


def test_mean_lifetime_accuracy(order05, backend):
    est = mean_lifetime_from_paths(1.0, order05, 1e-3, 1e-3, 4000, RngStream(23))
    ref = lifetime_closed_form(1.0, order05)
    assert abs(est.estimate - ref) < 4 * est.stderr + est.bias_bound
    assert est.bias_bound >= threshold_bias_bound(1e-3, order05)


def test_two_lifetime_estimators_agree(backend):
    for beta, x in ((0.3, 0.5), (0.5, 1.0), (0.7, 1.0)):
        o = FracOrder(beta)
        rb, rb_se, rb_tail = estimate_lifetime(x, o, 20_000, 60, RngStream(24))
        threshold = 1e-3 if beta >= 0.5 else 1e-4
        sim = mean_lifetime_from_paths(
            x, o, 1e-3, threshold, 3000, RngStream(25)
        )
        budget = 4 * math.hypot(rb_se, sim.stderr) + rb_tail + sim.bias_bound
        assert abs(rb - sim.estimate) < budget


def test_paired_halving(order05, backend):
    pr = paired_halving_estimates(1.0, order05, 1e-3, 1e-3, 1500, RngStream(26))
    # common-noise coupling: the h vs h/2 difference is far below the
    # individual Monte Carlo errors
    assert pr.relative_move < 0.02
    assert pr.diff_stderr < 0.01


def test_first_resurrection_mean(order05, backend):
    # the first retained position estimates x (1 - beta); the grid proxy
    # carries an O(h^(1/beta)) offset, negligible here
    mean, se, count = first_resurrection_stats(
        1.0, order05, 1e-3, 1e-3, 3000, RngStream(27)
    )
    assert count > 2500
    assert abs(mean - 0.5) < 4 * se + 1e-3


def test_fk_zero_forcing(order05, backend):
    g = constant_forcing(0.0, order05, 1.0)
    est, se = estimate_feynman_kac(g, 1.0, order05, 500, 1e-3, RngStream(28))
    assert est == 0.0 and se == 0.0


def test_fk_unit_forcing_equals_lifetime(order05, backend):
    # with g = 1 the path integral is exactly h * (number of steps): the two
    # estimators consume the same stream and agree bitwise
    g = constant_forcing(1.0, order05, 1.0)
    est, se = estimate_feynman_kac(g, 1.0, order05, 1200, 1e-3, RngStream(29))
    life = mean_lifetime_from_paths(1.0, order05, 1e-3, 1e-3, 1200, RngStream(29))
    assert est == life.estimate
    assert se == life.stderr


def test_fk_matches_linear_solver(order05, backend):
    g = power_forcing(0.5, order05, 1.0)
    est, se = estimate_feynman_kac(g, 1.0, order05, 3000, 1e-3, RngStream(30))
    ref = float(solve_linear(g, 0.0, order05, 1.0, 1e-10)(1.0))
    # closed form: C_(1, 1/2)^-1 J^(1/2) x^(1/2) at 1 is sqrt(pi)
    assert ref == pytest.approx(math.sqrt(math.pi), rel=1e-9)
    assert abs(est - ref) < 4 * se + 0.05 * ref


def test_backends_agree_statistically(order05, monkeypatch):
    if paths_mod._pathcore_cy is None:
        pytest.skip("compiled core unavailable")
    monkeypatch.delenv("CENFRAC_FORCE_PY", raising=False)
    a = mean_lifetime_from_paths(1.0, order05, 1e-3, 1e-3, 4000, RngStream(31))
    monkeypatch.setenv("CENFRAC_FORCE_PY", "1")
    b = mean_lifetime_from_paths(1.0, order05, 1e-3, 1e-3, 4000, RngStream(31))
    # different consumption order => independent draws of the same law
    assert abs(a.estimate - b.estimate) < 4 * math.hypot(a.stderr, b.stderr)


def test_every_path_terminates(order05, backend):
    # finiteness of the censored process lifetime at simulation scale
    est = mean_lifetime_from_paths(
        1.0, order05, 1e-3, 1e-3, 2000, RngStream(32), max_steps=10_000_000
    )
    assert est.n_paths == 2000
