import math
import sys

import numpy as np
import pytest

from spinstar_metrology import spinstar
from spinstar_metrology.spinstar import GaussianCouplingSpec, ModelPoint

ENSEMBLE = GaussianCouplingSpec(0.5, 0.5)


def couplings(n, seed=0):
    return spinstar.sample_couplings(ENSEMBLE, n, spinstar.derive_seed(seed, 0))


def random_density(dim, rng, rank=None):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho)


def random_hermitian(dim, rng):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return (g + g.conj().T) / 2


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def point_n6():
    return ModelPoint(0.6, 1.0, couplings(6, seed=7), 2)




def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
