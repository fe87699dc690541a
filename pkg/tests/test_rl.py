import math

import numpy as np
import pytest

from cenfrac import (
    Forcing,
    FracOrder,
    SmoothFn,
    c_coeff,
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
from cenfrac.errors import ContractError, DomainError, UsageError

from conftest import rel_err


def mono(alpha, T=1.0):
    return SmoothFn(
        lambda x: np.asarray(x, dtype=float) ** alpha,
        lambda x: alpha * np.asarray(x, dtype=float) ** (alpha - 1.0),
        origin_power=alpha,
        domain_end=T,
    )


# ---------------------------------------------------------------- data types


def test_forcing_validation(order05):
    with pytest.raises(ContractError):
        Forcing(np.cos, (0.0, 0.5), 1.0)
    with pytest.raises(DomainError):
        Forcing(np.cos, (1.0, 0.5), -1.0)
    g = cos_forcing(order05, 1.0)
    assert g.continuous_at_zero and g.value_at_zero == 1.0
    assert check_envelope(g, order05)


def test_forcing_envelope_soft_check_warns(order05):
    bad = Forcing(lambda x: 5.0 * np.ones_like(np.asarray(x)), (1.0, 0.5), 1.0, 5.0)
    with pytest.warns(UserWarning):
        ok = check_envelope(bad, order05)
    assert not ok


def test_power_forcing_integrability_guard(order05):
    with pytest.raises(DomainError):
        power_forcing(-0.6, order05, 1.0)


def test_table_forcing(order05):
    xs = np.linspace(0.0, 1.0, 11)
    g = table_forcing(xs, np.cos(xs), order05, 1.0, env_M=1.0, env_alpha=0.5)
    assert g.value_at_zero == pytest.approx(1.0)
    assert g.fn(0.55) == pytest.approx(np.interp(0.55, xs, np.cos(xs)))
    with pytest.raises(UsageError):
        table_forcing(xs[::-1].copy(), np.cos(xs), order05, 1.0, 1.0, 0.5)


def test_smoothfn_self_check():
    SmoothFn(np.cos, lambda x: -np.sin(x))
    with pytest.raises(ContractError):
        SmoothFn(np.cos, np.sin)  # wrong sign derivative
    with pytest.raises(ContractError):
        SmoothFn(np.cos, lambda x: -np.sin(x), origin_power=0.0)


# ---------------------------------------------------------------- R-L integral


def test_rl_integral_constant(order05):
    g = constant_forcing(1.0, order05, 1.0)
    assert rl_integral(g, order05, 1.0) == pytest.approx(
        1.0 / math.gamma(1.5), rel=1e-12
    )
    # closed form x^b/Gamma(1+b) along the interval
    xs = np.geomspace(1e-3, 1.0, 20)
    assert rel_err(rl_integral(g, order05, xs), xs**0.5 / math.gamma(1.5)) < 1e-12


def test_rl_integral_monomial(order05):
    g = power_forcing(0.5, order05, 1.0)
    # J^b x^a = Gamma(a+1)/Gamma(a+b+1) x^(a+b)
    assert rl_integral(g, order05, 1.0) == pytest.approx(
        math.gamma(1.5) / math.gamma(2.0), rel=1e-12
    )


def test_rl_integral_zero_and_domain(order05):
    g = constant_forcing(0.0, order05, 1.0)
    assert rl_integral(g, order05, 0.7) == 0.0
    with pytest.raises(DomainError):
        rl_integral(g, order05, 0.0)
    with pytest.raises(DomainError):
        rl_integral(g, order05, 2.0)  # beyond the forcing domain


def test_rl_integral_smooth_forcing_accuracy(order05):
    g = cos_forcing(order05, 1.0)
    # reference: J^(1/2) cos(x) = sum_k (-1)^k x^(2k+1/2)/Gamma(2k+3/2)
    xs = np.linspace(0.05, 1.0, 9)
    ref = sum(
        (-1) ** k * xs ** (2 * k + 0.5) / math.gamma(2 * k + 1.5) for k in range(12)
    )
    assert np.max(np.abs(rl_integral(g, order05, xs) - ref)) < 1e-9


# ---------------------------------------------------------------- R-L derivative


def test_rl_derivative_monomial(order05):
    # d^(1/2) x^(1/2) = Gamma(1.5), constant in x
    u = mono(0.5)
    for x in (0.2, 0.7, 1.0):
        assert rl_derivative(u, order05, x) == pytest.approx(
            math.gamma(1.5), rel=1e-10
        )


def test_rl_derivative_constant(order05):
    u = SmoothFn(
        lambda x: np.ones_like(np.asarray(x, dtype=float)),
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
    )
    assert rl_derivative(u, order05, 1.0) == pytest.approx(
        1.0 / math.gamma(0.5), rel=1e-12
    )


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.7])
def test_rl_derivative_inverts_integral(beta):
    # d^b J^b g = g for g in {1, x^0.3, cos}, built from closed forms of J^b g
    o = FracOrder(beta)
    xs = np.linspace(1.0 / 16.0, 1.0, 16)
    cases = []
    cases.append(
        (
            SmoothFn(
                lambda x: np.asarray(x, dtype=float) ** beta / math.gamma(1 + beta),
                lambda x: np.asarray(x, dtype=float) ** (beta - 1) / math.gamma(beta),
                origin_power=beta,
            ),
            np.ones_like(xs),
        )
    )
    a = 0.3
    coef = math.gamma(a + 1.0) / math.gamma(a + beta + 1.0)
    cases.append(
        (
            SmoothFn(
                lambda x: coef * np.asarray(x, dtype=float) ** (a + beta),
                lambda x: coef
                * (a + beta)
                * np.asarray(x, dtype=float) ** (a + beta - 1.0),
                origin_power=a + beta,
            ),
            xs**a,
        )
    )

    def jcos(x):
        x = np.asarray(x, dtype=float)
        return sum(
            (-1) ** k * x ** (2 * k + beta) / math.gamma(2 * k + 1 + beta)
            for k in range(14)
        )

    def djcos(x):
        x = np.asarray(x, dtype=float)
        return sum(
            (-1) ** k
            * (2 * k + beta)
            * x ** (2 * k + beta - 1.0)
            / math.gamma(2 * k + 1 + beta)
            for k in range(14)
        )

    cases.append((SmoothFn(jcos, djcos, origin_power=beta), np.cos(xs)))
    for u, want in cases:
        got = rl_derivative(u, o, xs)
        assert np.max(np.abs(got - want)) < 1e-7


# ---------------------------------------------------------------- censored derivative


def test_censored_constant_is_zero(order05):
    u = SmoothFn(
        lambda x: 3.0 * np.ones_like(np.asarray(x, dtype=float)),
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
    )
    assert censored_derivative(u, order05, 0.8, "jump_integral") == 0.0
    assert abs(censored_derivative(u, order05, 0.8, "definition")) <= 1e-10


def test_censored_monomial_closed_form(order05):
    # D x^(1/2) at beta = 1/2 equals Gamma(1.5)(pi/2 - 1)/(pi/2), any x
    want = math.gamma(1.5) * (math.pi / 2 - 1.0) / (math.pi / 2)
    u = mono(0.5)
    for route in ("definition", "jump_integral"):
        got = censored_derivative(u, order05, 1.0, route)
        assert got == pytest.approx(want, rel=1e-8)
    assert monomial_censored_derivative(0.5, order05, 1.0) == pytest.approx(
        want, rel=1e-13
    )


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.7])
def test_censored_routes_agree(beta):
    o = FracOrder(beta)
    u_smooth = SmoothFn(
        lambda x: 1.0 + np.asarray(x, dtype=float) ** 2,
        lambda x: 2.0 * np.asarray(x, dtype=float),
    )
    corpus = [mono(0.5), mono(2.0), u_smooth]
    xs = np.linspace(0.2, 1.0, 5)
    for u in corpus:
        a = censored_derivative(u, o, xs, "definition")
        b = censored_derivative(u, o, xs, "jump_integral")
        assert np.max(np.abs(a - b)) < 1e-6


def test_censored_unknown_route(order05):
    with pytest.raises(UsageError):
        censored_derivative(mono(1.0), order05, 0.5, "laplace")


def test_censored_proportional_to_rl(order05):
    # D x^a = C_(a,b) d^b x^a
    for alpha in (0.25, 1.0, 2.0):
        u = mono(alpha)
        for x in (0.3, 0.9):
            lhs = censored_derivative(u, order05, x, "jump_integral")
            rhs = c_coeff(alpha, order05) * rl_derivative(u, order05, x)
            assert lhs == pytest.approx(rhs, rel=1e-8)


def test_monomial_closed_forms(order05):
    assert monomial_censored_derivative(1.0, order05, 1.0) == pytest.approx(
        0.5 / math.gamma(1.5), rel=1e-13
    )
    assert monomial_rl_derivative(1.0, order05, 1.0) == pytest.approx(
        1.0 / math.gamma(1.5), rel=1e-13
    )
    # alpha = beta value is independent of x
    vals = [monomial_censored_derivative(0.5, order05, x) for x in (0.1, 1.0, 7.0)]
    assert max(vals) - min(vals) < 1e-14
    with pytest.raises(DomainError):
        monomial_censored_derivative(0.0, order05, 1.0)


def test_scaling_property(order05):
    alpha, c = 0.8, 2.0
    u = mono(alpha)
    v = SmoothFn(
        lambda x: (np.asarray(x, dtype=float) / c) ** alpha,
        lambda x: (alpha / c) * (np.asarray(x, dtype=float) / c) ** (alpha - 1.0),
        origin_power=alpha,
        domain_end=c,
    )
    for x in (0.25, 0.5):
        lhs = censored_derivative(v, order05, c * x, "jump_integral")
        rhs = c ** (-0.5) * censored_derivative(u, order05, x, "jump_integral")
        assert lhs == pytest.approx(rhs, rel=1e-7)


def test_non_semigroup_witness():
    b, g = FracOrder(0.3), FracOrder(0.6)
    a = 2.0
    lhs = c_coeff(a - g.beta, b) * c_coeff(a, g)
    rhs = c_coeff(a - b.beta, g) * c_coeff(a, b)
    assert abs(lhs - rhs) / abs(rhs) > 1e-3
