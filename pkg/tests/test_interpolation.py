import numpy as np
import pytest

from cenfrac.interpolation import BaryBasis, cgl_nodes


def test_cgl_nodes_shape():
    nodes = cgl_nodes(32, 2.0)
    assert nodes.shape == (32,)
    assert nodes[0] > 0.0
    assert nodes[-1] == 2.0
    assert np.all(np.diff(nodes) > 0.0)


def test_polynomial_reproduction_inside_and_below_hull():
    nodes = cgl_nodes(48, 1.0)
    basis = BaryBasis(nodes)
    coeffs = np.array([0.3, -1.2, 0.7, 2.1])
    poly = np.polynomial.polynomial.Polynomial(coeffs)
    values = poly(nodes)
    # quadrature points reach below the smallest node; the first
    # barycentric form must reproduce polynomial data there too
    queries = np.concatenate(
        [np.array([1e-8, 1e-5, nodes[0] * 0.3]), np.linspace(nodes[0], 1.0, 13)]
    )
    got = basis.interpolate(values, queries)
    assert np.max(np.abs(got - poly(queries))) < 1e-11


def test_constant_data_is_exact_on_production_grids():
    for nodes in (cgl_nodes(64, 0.025), cgl_nodes(64, 0.16**0.5)):
        basis = BaryBasis(nodes)
        values = np.full(64, 3.5)
        queries = np.array(
            [1e-12, nodes[0] / 2, nodes[3], 0.4 * nodes[-1], nodes[-1]]
        )
        assert np.max(np.abs(basis.interpolate(values, queries) - 3.5)) < 1e-12


def test_ill_conditioned_node_set_warns():
    # the squared image of a Chebyshev grid has exponentially spread
    # weights; the basis flags it instead of silently losing accuracy
    with pytest.warns(UserWarning, match="ill-conditioned"):
        BaryBasis(cgl_nodes(64, 0.025) ** 2.0)


def test_exact_at_nodes():
    nodes = cgl_nodes(24, 1.0)
    basis = BaryBasis(nodes)
    values = np.sin(nodes)
    assert basis.interpolate(values, nodes[7]) == values[7]


def test_spectral_accuracy_for_analytic_data():
    nodes = cgl_nodes(40, 1.0)
    basis = BaryBasis(nodes)
    values = np.exp(nodes) * np.cos(3 * nodes)
    xq = np.linspace(nodes[0], 1.0, 200)
    got = basis.interpolate(values, xq)
    assert np.max(np.abs(got - np.exp(xq) * np.cos(3 * xq))) < 1e-12


def test_scalar_query_returns_float():
    nodes = cgl_nodes(16, 1.0)
    basis = BaryBasis(nodes)
    out = basis.interpolate(nodes**2, 0.3)
    assert isinstance(out, float)
    assert out == pytest.approx(0.09, abs=1e-12)
