"""Recursive left-singular-vector clustering of a Markov chain.

A node whose Laplacian ``I - T`` has second-smallest singular value at most
the tolerance is split by the sign pattern of a matching left singular
vector. Each side then continues with the dangling node fix of its principal
submatrix.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .matrix import as_index_set, as_stochastic, dnf
from .svd import (NoMixedSignVector, second_smallest_pair, sign_threshold,
                  full_svd)


@dataclass
class ClusterNode:
    """One recursive call.

    `indices` are original (0-based) state labels. `split` is
    ``(positive, negative, zeros)`` when the node was split, and `children`
    then holds the two sub-nodes in that order.
    """

    indices: np.ndarray
    sigma: float = math.nan
    split: tuple | None = None
    children: list = field(default_factory=list)
    reason: str = ""

    @property
    def is_leaf(self):
        return not self.children

    def leaves(self):
        if self.is_leaf:
            yield self
            return
        for c in self.children:
            yield from c.leaves()

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


@dataclass
class ClusterResult:
    clusters: list
    unclustered: np.ndarray
    liwv: np.ndarray
    tree: ClusterNode
    clustered: bool
    n: int

    @property
    def num_clusters(self):
        return len(self.clusters)

    def labels(self):
        """Cluster id per state (discovery order), -1 for unclustered states."""
        lab = np.full(self.n, -1, dtype=np.int64)
        for k, c in enumerate(self.clusters):
            lab[c] = k
        return lab

    def partition(self, singletons=False):
        """Cluster index sets, optionally followed by one singleton per unclustered state."""
        blocks = list(self.clusters)
        if singletons:
            blocks += [np.array([i]) for i in self.unclustered]
        return blocks


def sign_split(u, eta=None):
    """Split positions of `u` into (positive, negative, zero) index arrays."""
    u = np.asarray(u, dtype=float)
    if eta is None:
        eta = sign_threshold(u)
    pos = np.flatnonzero(u > eta)
    neg = np.flatnonzero(u < -eta)
    zero = np.flatnonzero(np.abs(u) <= eta)
    return pos, neg, zero


def _check_tau(tau):
    if not (isinstance(tau, (int, float, np.floating)) and math.isfinite(tau) and tau >= 0):
        raise ValueError(f"tolerance must be a finite nonnegative number, got {tau!r}")


def lsv_cluster(T, tau, max_depth=None, reverse_order=False):
    """Cluster the states of a Markov chain.

    Parameters
    ----------
    T : (n, n) array_like
        Stochastic transition matrix.
    tau : float
        A node is split only when the second-smallest singular value of its
        Laplacian is at most `tau`.
    max_depth : int, optional
        Recursion depth cap (default ``n``, which never binds).
    reverse_order : bool
        Process the negative side before the positive side. The result does
        not depend on this; it exists so the independence can be tested.

    Returns
    -------
    ClusterResult
        Clusters are reported in tree order (positive side first), with the
        left-iterative weight vector accumulated over the recursion.
    """
    _check_tau(tau)
    T = as_stochastic(T)
    n = T.shape[0]
    if max_depth is None:
        max_depth = n
    liwv = np.ones(n)
    unclustered = []

    root = ClusterNode(np.arange(n))
    stack = [(root, T, 0)]
    while stack:
        node, sub, depth = stack.pop()
        size = node.indices.size
        if size <= 1:
            node.reason = "singleton"
            continue
        lap = np.eye(size) - sub
        res = full_svd(lap)
        try:
            pair = second_smallest_pair(lap, svd=res)
        except NoMixedSignVector:
            node.sigma = float(res.s[size - 2])
            node.reason = "uniform-sign"
            continue
        node.sigma = pair.sigma
        if pair.sigma > tau:
            node.reason = "sigma>tau"
            continue
        if depth >= max_depth:
            node.reason = "max-depth"
            continue
        pos, neg, zero = sign_split(pair.left)
        if pos.size == 0 or neg.size == 0:
            node.reason = "empty-side"
            continue
        liwv[node.indices] = np.abs(pair.left)
        node.split = (node.indices[pos], node.indices[neg], node.indices[zero])
        unclustered.extend(node.indices[zero].tolist())
        children = []
        for local in (pos, neg):
            child = ClusterNode(node.indices[local])
            children.append((child, dnf(sub[np.ix_(local, local)])))
        node.children = [c for c, _ in children]
        order = children[::-1] if not reverse_order else children
        for child, child_T in order:
            stack.append((child, child_T, depth + 1))

    clusters = [leaf.indices for leaf in root.leaves()]
    return ClusterResult(
        clusters=clusters,
        unclustered=as_index_set(unclustered, n),
        liwv=liwv,
        tree=root,
        clustered=root.split is not None,
        n=n,
    )


def permute_to_blocks(T, result):
    """Permutation making each cluster contiguous, and the permuted matrix.

    Clusters appear in result order, unclustered states last.
    ``T_perm[i, j] == T[perm[i], perm[j]]``.
    """
    T = as_stochastic(T)
    perm = np.concatenate([np.asarray(c, dtype=np.int64) for c in result.clusters]
                          + [np.asarray(result.unclustered, dtype=np.int64)])
    if np.sort(perm).tolist() != list(range(T.shape[0])):
        raise ValueError("clusters and unclustered states do not partition the states")
    return perm, T[np.ix_(perm, perm)]
