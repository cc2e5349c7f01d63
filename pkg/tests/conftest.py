import numpy as np
import pytest

from reglab.paths import make_grid, sample_bm


@pytest.fixture(scope="session")
def grid256():
    return make_grid(1.0, 256)


@pytest.fixture(scope="session")
def grid1k():
    return make_grid(1.0, 1024)


@pytest.fixture(scope="session")
def bm_pair(grid256):
    return sample_bm(grid256, 101, 0), sample_bm(grid256, 101, 1)


def max_abs(a, b=0.0):
    b = b.values if hasattr(b, "values") else b
    a = a.values if hasattr(a, "values") else a
    return float(np.max(np.abs(a - b)))
