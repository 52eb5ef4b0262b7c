import numpy as np
import pytest

from lsvcluster.cluster import lsv_cluster
from lsvcluster.ensembles import EnsembleSpec, generate, trial_seed
from lsvcluster.matrix import is_stochastic


def test_spec_validation():
    with pytest.raises(ValueError):
        EnsembleSpec((10, 0), 0.9, 0.1)
    with pytest.raises(ValueError):
        EnsembleSpec((10,), 0.1, 0.2)
    with pytest.raises(ValueError):
        EnsembleSpec((10,), 0.9, 0.1, kind="gaussian")
    assert EnsembleSpec([3, 4], 0.9, 0.1).n == 7


def test_trial_seed():
    assert trial_seed(7, 3) == trial_seed(7, 3)
    rng = np.random.default_rng(0)
    for s in rng.integers(0, 2 ** 63, size=1000):
        assert trial_seed(int(s), 0) != trial_seed(int(s), 1)
    seeds = {trial_seed(11, i) for i in range(5000)}
    assert len(seeds) == 5000


def test_generate_deterministic():
    spec = EnsembleSpec((10, 8, 5), 0.95, 0.05, seed=trial_seed(3, 4))
    T1, g1 = generate(spec)
    T2, g2 = generate(spec)
    assert np.array_equal(T1, T2)
    assert all(np.array_equal(a, b) for a, b in zip(g1.partition, g2.partition))
    T3, _ = generate(spec.with_seed(trial_seed(3, 5)))
    assert not np.array_equal(T1, T3)


@pytest.mark.parametrize("kind", ["uniform", "bernoulli"])
def test_generate_valid(kind):
    spec = EnsembleSpec((100, 100, 50, 25), 0.95, 0.0095, kind=kind, seed=1)
    T, truth = generate(spec)
    assert T.shape == (275, 275) and is_stochastic(T)
    allidx = np.sort(np.concatenate(truth.partition))
    assert allidx.tolist() == list(range(275))
    assert [len(b) for b in truth.partition] == [100, 100, 50, 25]
    label = np.repeat(np.arange(4), (100, 100, 50, 25))
    for k, b in enumerate(truth.partition):
        assert np.all(label[truth.permutation[b]] == k)


def test_small_uniform_block_diagonal():
    T, truth = generate(EnsembleSpec((2, 2), 1.0, 0.0, permute=False, seed=5))
    assert np.all(T[:2, 2:] == 0) and np.all(T[2:, :2] == 0)
    assert np.all(T[:2, :2] > 0) and np.all(T[2:, 2:] > 0)
    np.testing.assert_allclose(T.sum(axis=1), 1, atol=1e-15)


def test_bernoulli_decoupled_recovered():
    for seed in range(5):
        T, truth = generate(EnsembleSpec((12, 9, 7), 1.0, 0.0, kind="bernoulli", seed=seed))
        r = lsv_cluster(T, 1e-8)
        assert {frozenset(c.tolist()) for c in r.clusters} == \
            {frozenset(b.tolist()) for b in truth.partition}


def _raw_block_means(seed, spec):
    # unnormalized entries are recovered from the row sums of the same draw
    rng = np.random.default_rng(seed)
    n = spec.n
    label = np.repeat(np.arange(len(spec.sizes)), spec.sizes)
    same = label[:, None] == label[None, :]
    X = rng.uniform(0.0, 1.0, size=(n, n)) * np.where(same, 2 * spec.p, 2 * spec.q)
    return X[same].mean(), X[~same].mean(), X


def test_uniform_block_means():
    spec = EnsembleSpec((100, 100, 50, 25), 0.95, 0.0095, permute=False)
    ins, outs = [], []
    for i in range(50):
        seed = trial_seed(99, i)
        T, truth = generate(spec.with_seed(seed))
        a, b, X = _raw_block_means(seed, spec)
        np.testing.assert_allclose(T, X / X.sum(axis=1, keepdims=True), rtol=1e-12)
        ins.append(a)
        outs.append(b)
    for vals, target in ((ins, 0.95), (outs, 0.0095)):
        vals = np.array(vals)
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - target) <= 3 * max(se, 1e-12)


def test_permutation_preserves_singular_values():
    for seed in range(5):
        a, _ = generate(EnsembleSpec((30, 20, 10), 0.95, 0.05, seed=seed, permute=False))
        b, truth = generate(EnsembleSpec((30, 20, 10), 0.95, 0.05, seed=seed, permute=True))
        p = truth.permutation
        np.testing.assert_allclose(b, a[np.ix_(p, p)], rtol=1e-13, atol=0)
        sa = np.linalg.svd(np.eye(60) - a, compute_uv=False)
        sb = np.linalg.svd(np.eye(60) - b, compute_uv=False)
        np.testing.assert_allclose(sa, sb, rtol=0, atol=1e-10)
