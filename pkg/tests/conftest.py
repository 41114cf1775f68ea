import numpy as np
import pytest

import polarsim as ps


@pytest.fixture(scope="session")
def small_graph():
    return ps.generate_scale_free(ps.GraphSpec(n=300, m=3000, seed=11))


@pytest.fixture(scope="session")
def desk_graph():
    return ps.generate_scale_free(ps.GraphSpec(n=2000, m=40_000, seed=5))


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
