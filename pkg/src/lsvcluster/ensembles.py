"""Random stochastic matrices with planted clusters (uniform and Bernoulli ensembles).

Randomness comes from numpy's PCG64 generator seeded per trial through
:func:`trial_seed`, so every sample is reproducible from ``(master, index)``.
"""

from dataclasses import dataclass

import numpy as np

from .matrix import row_normalize

KINDS = ("uniform", "bernoulli")


@dataclass(frozen=True)
class EnsembleSpec:
    sizes: tuple
    p: float
    q: float
    kind: str = "uniform"
    seed: int = 0
    permute: bool = True

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if not self.sizes or min(self.sizes) < 1:
            raise ValueError(f"cluster sizes must be positive, got {self.sizes}")
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not (0 < self.p <= 1 and 0 <= self.q < 1 and self.p > self.q):
            raise ValueError(f"need 0 <= q < p <= 1, got p={self.p}, q={self.q}")

    @property
    def n(self):
        return sum(self.sizes)

    def with_seed(self, seed):
        return EnsembleSpec(self.sizes, self.p, self.q, self.kind, seed, self.permute)


@dataclass(frozen=True)
class GroundTruth:
    partition: list
    permutation: np.ndarray  # new position i holds original state permutation[i]


def trial_seed(master_seed, trial_index):
    """Independent 64-bit seed for trial `trial_index` of a run seeded with `master_seed`."""
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(trial_index),))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def generate(spec):
    """Sample a planted-cluster transition matrix and its ground-truth partition.

    Returns
    -------
    T : (n, n) ndarray
        Row-stochastic matrix, rows and columns permuted when ``spec.permute``.
    truth : GroundTruth
        Clusters expressed in the (possibly permuted) coordinates of `T`.
    """
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    label = np.repeat(np.arange(len(spec.sizes)), spec.sizes)
    same = label[:, None] == label[None, :]
    if spec.kind == "uniform":
        X = rng.uniform(0.0, 1.0, size=(n, n)) * np.where(same, 2 * spec.p, 2 * spec.q)
    else:
        X = (rng.random((n, n)) < np.where(same, spec.p, spec.q)).astype(float)
    perm = rng.permutation(n) if spec.permute else np.arange(n)
    X = X[np.ix_(perm, perm)]
    new_label = label[perm]
    partition = [np.flatnonzero(new_label == k) for k in range(len(spec.sizes))]
    T = row_normalize(X, zero_row_policy="uniform")
    return T, GroundTruth(partition, perm)
