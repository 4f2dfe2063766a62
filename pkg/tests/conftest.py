import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

import conceptmine as cm
from conceptmine.backend import HAS_NUMBA


@pytest.fixture(scope="session", autouse=True)
def _warm_jit_kernels():
    """Compile the numba kernels once so timed tests measure the algorithms."""
    if not HAS_NUMBA:
        return
    previous = cm.set_backend("numba")
    try:
        ctx = cm.FormalContext(["g1", "g2", "g3"], ["a", "b"], [[0], [0, 1], [1]])
        lat = cm.enumerate_concepts(ctx)
        lat.lower_neighbors(0)
        lat.robustness_values((0.5,))
        lat.gamma_values(2)
        lat.mobius(lat.top_id)
        from conceptmine import kernels
        from conceptmine.indices import _coh_values, stability_montecarlo

        pow_table = 0.5 ** np.arange(int(lat.extent_sizes.max()) + 1)[None, :]
        kernels.robustness_mu_all(lat.extents, lat.extent_sizes, pow_table)
        stability_montecarlo(ctx, lat.concept(0), 8, seed=0)
        _coh_values(lat, "smc", "minimum")
        _coh_values(lat, "smc", "average")
    finally:
        cm.set_backend(previous)


@pytest.fixture
def k1():
    """Three objects over two attributes: g1->{a}, g2->{a,b}, g3->{b}."""
    return cm.FormalContext(["g1", "g2", "g3"], ["a", "b"], [[0], [0, 1], [1]])


@pytest.fixture(params=["numba", "numpy"])
def backend(request):
    previous = cm.set_backend(request.param)
    yield request.param
    cm.set_backend(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
