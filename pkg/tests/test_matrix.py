import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from lsvcluster.bounds import random_stochastic, random_substochastic
from lsvcluster.matrix import (MatrixError, as_index_set, as_stochastic, bipartite_embed,
                               direct_sum, dnf, is_stochastic, laplacian, principal_submatrix,
                               row_normalize)
from lsvcluster.datasets import deep_south_biadjacency


def test_laplacian_examples():
    assert np.array_equal(laplacian(np.eye(3)), np.zeros((3, 3)))
    np.testing.assert_allclose(laplacian([[.7, .3], [.4, .6]]), [[.3, -.3], [-.4, .4]], atol=1e-15)


def test_dnf_examples():
    T = np.array([[.7, .3], [.4, .6]])
    np.testing.assert_array_equal(dnf(T), T)
    np.testing.assert_array_equal(dnf(np.zeros((2, 2))), np.full((2, 2), 0.5))
    np.testing.assert_allclose(dnf([[0.2, 0.3], [0.1, 0.4]]), [[0.45, 0.55], [0.35, 0.65]],
                               atol=1e-15)


def test_dnf_rejects_superstochastic():
    with pytest.raises(MatrixError):
        dnf([[0.9, 0.3], [0.1, 0.1]])


def test_dnf_idempotent(rng):
    for _ in range(200):
        n = int(rng.integers(1, 12))
        D = dnf(random_substochastic(n, rng))
        assert np.max(np.abs(dnf(D) - D)) <= 1e-14


def test_nested_dnf_identity(rng):
    for _ in range(100):
        k, l, m = (int(x) for x in rng.integers(1, 7, size=3))
        T = random_stochastic(k + l + m, rng, sparsity=rng.uniform(0, 0.6))
        inner = dnf(T[:k + l, :k + l])
        np.testing.assert_allclose(dnf(inner[:k, :k]), dnf(T[:k, :k]), rtol=0, atol=1e-12)


def test_principal_submatrix(C):
    np.testing.assert_array_equal(principal_submatrix(np.eye(3), [0, 2]), np.eye(2))
    M = np.add.outer(10 * np.arange(4), np.arange(4))
    np.testing.assert_array_equal(principal_submatrix(M, [3, 1]), [[11, 13], [31, 33]])
    np.testing.assert_allclose(principal_submatrix(C, [5, 6, 7])[0], [0.6, 0.2499, 0.15])


def test_index_set_validation():
    with pytest.raises(MatrixError):
        as_index_set([0, 3], 3)
    with pytest.raises(MatrixError):
        as_index_set([1, 1], 3)


def test_row_normalize():
    np.testing.assert_allclose(row_normalize([[2, 2], [1, 3]]), [[.5, .5], [.25, .75]])
    np.testing.assert_allclose(row_normalize(np.ones((3, 3))), np.full((3, 3), 1 / 3))
    A = np.array([[1.0, 2, 0], [0, 0, 0], [3, 0, 1]])
    with pytest.raises(MatrixError):
        row_normalize(A)
    np.testing.assert_allclose(row_normalize(A, "uniform")[1], np.full(3, 1 / 3))


@settings(max_examples=200, deadline=None)
@given(arrays(float, st.tuples(st.integers(1, 8), st.integers(1, 8)).map(lambda s: (s[0], s[0])),
              elements=st.floats(0.0, 1e6)))
def test_row_normalize_rows_sum_to_one(A):
    T = row_normalize(A, "uniform")
    assert np.all(T >= 0)
    np.testing.assert_allclose(T.sum(axis=1), 1.0, rtol=0, atol=1e-15)


def test_stochastic_validation():
    assert is_stochastic([[0.5, 0.5], [1.0, -1e-13]])
    assert not is_stochastic([[0.5, 0.6], [1.0, 0.0]])
    with pytest.raises(MatrixError):
        as_stochastic([[1.1, -0.1], [0, 1]])
    with pytest.raises(MatrixError):
        as_stochastic([[np.nan, 1], [0, 1]])
    out = as_stochastic([[0.5, 0.5], [0.2, 0.8]])
    assert not out.flags.writeable


def test_bipartite_embed():
    np.testing.assert_array_equal(bipartite_embed([[1]]), [[0, 1], [1, 0]])
    A = bipartite_embed(np.ones((2, 3)))
    assert A.shape == (5, 5)
    assert np.all(A[:2, :2] == 0) and np.all(A[2:, 2:] == 0)
    assert is_stochastic(row_normalize(A))
    D = deep_south_biadjacency()
    B = bipartite_embed(D)
    assert D.shape == (18, 14) and B.shape == (32, 32)
    np.testing.assert_array_equal(B, B.T)
    np.testing.assert_array_equal(bipartite_embed(D, weights=2 * np.ones_like(D)), 2 * B)


def test_direct_sum():
    S = direct_sum(np.eye(2), [[0.5, 0.5], [0.5, 0.5]], [[1.0]])
    assert S.shape == (5, 5)
    assert S[1, 2] == 0 and S[3, 2] == 0.5 and S[4, 4] == 1
