import numpy as np
import pytest

from cenfrac import FracOrder


@pytest.fixture
def order05():
    return FracOrder(0.5)


@pytest.fixture
def order03():
    return FracOrder(0.3)


@pytest.fixture
def order07():
    return FracOrder(0.7)


def rel_err(got, want):
    got = np.asarray(got, dtype=float)
    want = np.asarray(want, dtype=float)
    return float(np.max(np.abs(got - want) / np.maximum(np.abs(want), 1e-300)))
