"""Coupling matrices and per-cluster diagnostics for a partition of the states."""

from dataclasses import dataclass

import numpy as np

from .matrix import MatrixError, as_index_set, as_matrix, as_stochastic
from .svd import spectral_radius

WEIGHT_KINDS = ("liwv", "ones", "stationary")


@dataclass(frozen=True)
class CouplingMatrix:
    values: np.ndarray
    partition: list
    weight: np.ndarray
    kind: str = "custom"

    @property
    def k(self):
        return self.values.shape[0]

    @property
    def diagonal(self):
        return np.diag(self.values)


@dataclass(frozen=True)
class StationaryResult:
    pi: np.ndarray
    residual: float
    converged: bool
    iterations: int


def _check_partition(partition, n):
    blocks = [as_index_set(S, n) for S in partition]
    if not blocks or any(b.size == 0 for b in blocks):
        raise MatrixError("partition blocks must be non-empty")
    allidx = np.concatenate(blocks)
    if np.unique(allidx).size != allidx.size:
        raise MatrixError("partition blocks overlap")
    return blocks


def coupling_matrix(T, partition, u, kind="custom"):
    """``W[i, j] = u_i^T T[S_i, S_j] 1 / u_i^T 1`` for blocks ``S_i`` of `partition`.

    `u` is a length-n weight vector; its restriction to every block must be
    strictly positive. Blocks need not cover every state.
    """
    A = as_matrix(T)
    n = A.shape[0]
    blocks = _check_partition(partition, n)
    u = np.asarray(u, dtype=float)
    if u.shape != (n,):
        raise MatrixError(f"weight vector has shape {u.shape}, expected ({n},)")
    k = len(blocks)
    W = np.empty((k, k))
    for i, Si in enumerate(blocks):
        ui = u[Si]
        if not np.all(ui > 0):
            raise MatrixError(f"weights on block {i} are not all positive")
        rows = ui @ A[Si]
        for j, Sj in enumerate(blocks):
            W[i, j] = rows[Sj].sum() / ui.sum()
    return CouplingMatrix(W, blocks, u.copy(), kind)


def coupling_with_singletons(T, S1, S2, u1, u2):
    """Coupling matrix of order ``n - m + 2``: two weighted blocks plus singletons.

    `u1` and `u2` are positive weights on `S1` and `S2` (same order as the
    sorted index sets); every remaining state forms its own block with weight 1.
    """
    A = as_stochastic(T)
    n = A.shape[0]
    S1 = as_index_set(S1, n)
    S2 = as_index_set(S2, n)
    rest = np.setdiff1d(np.arange(n), np.concatenate([S1, S2]))
    w = np.ones(n)
    w[S1] = np.asarray(u1, dtype=float)
    w[S2] = np.asarray(u2, dtype=float)
    partition = [S1, S2] + [np.array([i]) for i in rest]
    return coupling_matrix(A, partition, w, kind="singletons")


def diag_stats(W):
    """(mean, min) of the diagonal of a coupling matrix."""
    d = np.diag(W.values if isinstance(W, CouplingMatrix) else np.asarray(W))
    return float(d.mean()), float(d.min())


def stationary_distribution(T, tol=1e-10, maxiter=1_000_000):
    """Left fixed vector of `T` by power iteration on the lazy chain ``(I + T) / 2``.

    The lazy chain has the same stationary vectors and is aperiodic, so the
    iteration also converges for periodic chains such as bipartite random walks.
    Iteration stops when ``||pi^T T - pi^T||_1 <= tol``.
    """
    A = as_stochastic(T)
    n = A.shape[0]
    At = A.T
    pi = np.full(n, 1.0 / n)
    res = np.inf
    it = 0
    for it in range(1, maxiter + 1):
        nxt = At @ pi
        res = np.abs(nxt - pi).sum()
        if res <= tol:
            break
        pi = 0.5 * (pi + nxt)
        pi /= pi.sum()
    return StationaryResult(pi, float(res), bool(res <= tol), it)


def perron_values(T, partition):
    """Spectral radius of each principal submatrix ``T[S]``."""
    A = as_matrix(T)
    blocks = _check_partition(partition, A.shape[0])
    return [spectral_radius(A[np.ix_(S, S)]).rho for S in blocks]


def weight_vector(T, result, kind="liwv"):
    """Length-n weights of the requested kind for scoring a clustering.

    For ``"liwv"``, entries that are (numerically) zero fall back to 1 so the
    vector is positive on every block.
    """
    n = np.asarray(T).shape[0]
    if kind == "ones":
        return np.ones(n)
    if kind == "liwv":
        w = np.abs(np.asarray(result.liwv, dtype=float))
        floor = 1e-12 * w.max()
        return np.where(w > floor, w, 1.0)
    if kind == "stationary":
        pi = stationary_distribution(T).pi
        floor = 1e-12 * pi.max()
        return np.where(pi > floor, pi, 1.0)
    raise ValueError(f"unknown weight kind {kind!r}; choose from {WEIGHT_KINDS}")


def score_clustering(T, result, kind="liwv", singletons=True):
    """Coupling matrix of a clustering result.

    Unclustered states become singleton blocks after the clusters when
    `singletons` is true, so the rows of the coupling matrix sum to 1.
    """
    blocks = result.partition(singletons=singletons)
    return coupling_matrix(T, blocks, weight_vector(T, result, kind), kind=kind)
