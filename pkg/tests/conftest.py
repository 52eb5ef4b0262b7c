import numpy as np
import pytest

from lsvcluster.bounds import random_irreducible
from lsvcluster.datasets import courtois, deep_south_walk
from lsvcluster.matrix import direct_sum

COURTOIS_SIGMAS = (0, 0.0002, 0.0015, 0.2354, 0.4935, 0.6053, 0.7063, 1.2824)
COURTOIS_CLUSTERS = [[0, 1, 2], [3, 4], [5, 6, 7]]
DEEP_SOUTH_SPLIT = (list(range(9)) + list(range(18, 26)),
                    list(range(9, 18)) + list(range(26, 32)))


def random_decoupled(rng, kmin=2, kmax=5, smax=8, smin=2):
    """Direct sum of random irreducible blocks, shuffled; returns (T, blocks)."""
    k = int(rng.integers(kmin, kmax + 1))
    sizes = rng.integers(smin, smax + 1, size=k)
    T = direct_sum(*(random_irreducible(int(s), rng) for s in sizes))
    n = T.shape[0]
    perm = rng.permutation(n)
    T = T[np.ix_(perm, perm)]
    label = np.repeat(np.arange(k), sizes)[perm]
    blocks = [np.flatnonzero(label == j) for j in range(k)]
    return T, blocks


@pytest.fixture
def C():
    return courtois()


@pytest.fixture
def deep_south():
    return deep_south_walk()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
