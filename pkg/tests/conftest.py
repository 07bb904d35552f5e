import functools

import numpy as np
import pytest

from qollide import CollisionParams, build_collective_ops


@functools.lru_cache(maxsize=None)
def cached_ops(N):
    return build_collective_ops(N)


@pytest.fixture
def ops_for():
    """Factory fixture returning (cached) collective operators for a given N."""
    return cached_ops


@pytest.fixture
def params():
    """Reference collision parameters with mu = p*(g*tau)**2 = 1."""
    return CollisionParams(g=0.1, tau=1.0, p=100.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240517)


def random_density_matrix(rng, dim):
    """Random full-rank density matrix (Ginibre construction)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho)
