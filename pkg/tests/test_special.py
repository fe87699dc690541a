import math

import numpy as np
import pytest

from cenfrac import FracOrder, c_coeff, fitted_tail_constant, gamma, ml_product, rho
from cenfrac.errors import DomainError
from cenfrac.special import log_ml_product, ml_term

from conftest import rel_err


def test_gamma_known_values():
    assert gamma(1.0) == pytest.approx(1.0, rel=1e-15)
    assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-14)
    # reflection at beta = 1/2: Gamma(1.5) Gamma(0.5) = pi/2
    assert gamma(1.5) * gamma(0.5) == pytest.approx(math.pi / 2, rel=1e-14)


def test_gamma_accuracy_against_libm():
    zs = np.concatenate([np.linspace(0.01, 1.0, 120), np.linspace(1.0, 50.0, 300)])
    for z in zs:
        assert gamma(float(z)) == pytest.approx(math.gamma(float(z)), rel=1e-13)


def test_gamma_domain():
    for bad in (0.0, -1.0, -0.5):
        with pytest.raises(DomainError):
            gamma(bad)


def test_frac_order_validation():
    for bad in (0.0, 1.0, -0.2, 1.7):
        with pytest.raises(DomainError):
            FracOrder(bad)


def test_frac_order_reflection_many_betas():
    rng = np.random.default_rng(7)
    for b in rng.uniform(0.01, 0.99, size=50):
        o = FracOrder(float(b))
        assert o.gamma_1pb * o.gamma_1mb == pytest.approx(o.reflection, rel=1e-12)


def test_abs_gamma_neg():
    # |Gamma(-1/2)| = 2 sqrt(pi)
    o = FracOrder(0.5)
    assert o.abs_gamma_neg == pytest.approx(2.0 * math.sqrt(math.pi), rel=1e-14)


def test_rho_values(order05):
    assert rho(0.0, order05) == 1.0
    assert rho(0.5, order05) == pytest.approx(2.0 / math.pi, rel=1e-13)
    assert rho(1.0, order05) == pytest.approx(0.5, rel=1e-13)


def test_rho_domain(order05):
    with pytest.raises(DomainError):
        rho(-0.1, order05)


def test_rho_strictly_inside_unit_interval():
    alphas = np.geomspace(1e-3, 1e3, 25)
    for b in (0.1, 0.3, 0.5, 0.7, 0.9):
        o = FracOrder(b)
        for a in alphas:
            r = rho(float(a), o)
            assert 0.0 < r < 1.0


def test_rho_limit_at_zero(order05):
    assert abs(rho(1e-8, order05) - 1.0) < 1e-4


def test_c_coeff(order05):
    assert c_coeff(0.5, order05) == pytest.approx(1.0 - 2.0 / math.pi, rel=1e-13)
    # at alpha = beta the constant is 1 - sin(b pi)/(b pi)
    b = order05.beta
    assert c_coeff(b, order05) == pytest.approx(
        1.0 - math.sin(b * math.pi) / (b * math.pi), rel=1e-13
    )
    for a in (0.25, 1.0, 3.7):
        assert c_coeff(a, order05) + rho(a, order05) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(DomainError):
        c_coeff(0.0, order05)


def test_ml_product_first_value(order05):
    # P_1 = (Gamma(1.5) Gamma(0.5) - 1)^{-1} = (pi/2 - 1)^{-1}
    assert ml_product(1, order05) == pytest.approx(1.0 / (math.pi / 2 - 1.0), rel=1e-12)


def test_ml_product_recurrence(order03):
    for n in (2, 5, 17, 40):
        ratio = ml_product(n, order03) / ml_product(n - 1, order03)
        assert ratio == pytest.approx(1.0 / ml_term(n, order03), rel=1e-12)


def test_ml_product_requires_positive_N(order05):
    with pytest.raises(DomainError):
        ml_product(0, order05)


def test_ml_stirling_ratio_bounded(order05):
    # P_N <= C 2^N (N! b^N)^{-b}: the fitted ratio peaks at small N and
    # decreases afterwards, so the sup over N <= 60 is attained early
    b = order05.beta
    log_fact = 0.0
    ratios = []
    for n in range(1, 61):
        log_fact += math.log(n)
        log_bound = n * math.log(2.0) - b * (log_fact + n * math.log(b))
        ratios.append(math.exp(log_ml_product(n, order05) - log_bound))
    assert max(ratios) == max(ratios[:10])
    assert ratios[-1] < ratios[10]


def test_ml_series_terms_decay(order05):
    # term_N = P_N Gamma(0.5)^N x^{N b} |lam|^N at x = lam = 1 goes below
    # 1e-12 and decreases monotonically once past the turnover
    vals = [
        math.exp(log_ml_product(n, order05) + n * math.log(order05.gamma_1mb))
        for n in range(1, 81)
    ]
    peak = vals.index(max(vals))
    assert all(vals[i + 1] < vals[i] for i in range(peak, len(vals) - 1))
    assert vals[-1] < 1e-12


def test_ml_product_log_space_large_N():
    o = FracOrder(0.9)
    val = ml_product(400, o)
    assert val >= 0.0 and math.isfinite(val)
    assert math.isfinite(log_ml_product(400, o))


def test_fitted_tail_constant(order05):
    c = fitted_tail_constant(order05)
    assert math.isfinite(c) and c > 0.0


def test_cross_check_rho_against_mpmath():
    mp = pytest.importorskip("mpmath")
    mp.mp.dps = 30
    for b in (0.2, 0.5, 0.8):
        o = FracOrder(b)
        for a in (0.1, 1.0, 7.5, 33.0):
            want = mp.gamma(a + 1 - b) / (mp.gamma(1 + a) * mp.gamma(1 - b))
            assert rel_err(rho(a, o), float(want)) < 1e-13
