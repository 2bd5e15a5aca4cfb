import numpy as np
import pytest

from infoscale import DiscreteDistribution, Observable, TransitionMatrix


def random_distribution(rng, n, floor=0.05):
    """A strictly positive probability vector (mutual AC with any other)."""
    w = rng.random(n) + floor
    return DiscreteDistribution(w / w.sum())


def random_triple(rng, n=None):
    """(P, Q, f) with mutually absolutely continuous P, Q and bounded f."""
    if n is None:
        n = int(rng.integers(2, 6))
    p = random_distribution(rng, n)
    q = random_distribution(rng, n)
    f = Observable(rng.uniform(-1.0, 1.0, n))
    return p, q, f


def random_chain(rng, n, floor=0.1):
    rows = rng.random((n, n)) + floor
    return TransitionMatrix(rows / rows.sum(axis=1, keepdims=True))


def product_measure(weights, n):
    """Brute-force N-fold product weights by repeated Kronecker products."""
    out = np.ones(1)
    for _ in range(n):
        out = np.kron(out, weights)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20250810)
