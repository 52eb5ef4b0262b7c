"""Scoring recovered clusters against a planted partition, and the random-ensemble benchmark."""

from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .cluster import lsv_cluster
from .coupling import coupling_matrix, diag_stats, weight_vector
from .ensembles import generate, trial_seed

BENCH_COLUMNS = (
    "avg_clusters",
    "avg_avg_diag_liwv",
    "avg_avg_diag_ones",
    "avg_min_diag_liwv",
    "avg_min_diag_ones",
    "pct_fully_recovered",
    "avg_errors",
)


@dataclass(frozen=True)
class EvalReport:
    num_clusters: int
    errors: float
    fully_recovered: bool
    avg_diag_liwv: float
    min_diag_liwv: float
    avg_diag_ones: float
    min_diag_ones: float


@dataclass(frozen=True)
class BenchRow:
    label: str
    trials: int
    avg_clusters: float
    avg_avg_diag_liwv: float
    avg_avg_diag_ones: float
    avg_min_diag_liwv: float
    avg_min_diag_ones: float
    pct_fully_recovered: float
    avg_errors: float

    def tsv(self):
        vals = [f"{getattr(self, c):.4f}" for c in BENCH_COLUMNS]
        return "\t".join([self.label, str(self.trials)] + vals)


class TrialError(RuntimeError):
    def __init__(self, index, cause):
        super().__init__(f"trial {index} failed: {cause!r}")
        self.index = index


def _as_sets(clusters, n=None):
    out = []
    seen = set()
    for c in clusters:
        s = frozenset(int(i) for i in np.asarray(c).ravel())
        if not s:
            continue
        if n is not None and any(i < 0 or i >= n for i in s):
            raise ValueError(f"cluster {sorted(s)} has indices outside range({n})")
        if s & seen:
            raise ValueError("clusters overlap")
        seen |= s
        out.append(s)
    return out


def error_matrix(ground, empirical):
    """Symmetric-difference sizes ``w[i, j] = |C_i ^ C'_j|`` after padding with empty sets."""
    l = max(len(ground), len(empirical))
    g = list(ground) + [frozenset()] * (l - len(ground))
    e = list(empirical) + [frozenset()] * (l - len(empirical))
    return np.array([[len(a ^ b) for b in e] for a in g], dtype=np.int64)


def count_errors(ground, empirical, n=None):
    """Number of misclassified states under the best matching of clusters.

    Half the minimum total symmetric difference over perfect matchings of
    ground-truth to empirical clusters (shorter list padded with empty sets).
    States missing from every empirical cluster count against their
    ground-truth cluster. Returns a float since the half can be fractional
    when empirical clusters do not cover every state.
    """
    g = _as_sets(ground, n)
    e = _as_sets(empirical, n)
    if not g and not e:
        return 0.0
    w = error_matrix(g, e)
    rows, cols = linear_sum_assignment(w)
    return w[rows, cols].sum() / 2


def fully_recovered(ground, empirical):
    """Order-insensitive equality of the two collections of (non-empty) clusters."""
    return set(_as_sets(ground)) == set(_as_sets(empirical))


def evaluate(T, truth_partition, result):
    """EvalReport for one clustering `result` of `T`."""
    W_v = coupling_matrix(T, result.clusters, weight_vector(T, result, "liwv"))
    W_1 = coupling_matrix(T, result.clusters, np.ones(T.shape[0]))
    avg_v, min_v = diag_stats(W_v)
    avg_1, min_1 = diag_stats(W_1)
    return EvalReport(
        num_clusters=result.num_clusters,
        errors=count_errors(truth_partition, result.clusters, T.shape[0]),
        fully_recovered=fully_recovered(truth_partition, result.clusters),
        avg_diag_liwv=avg_v,
        min_diag_liwv=min_v,
        avg_diag_ones=avg_1,
        min_diag_ones=min_1,
    )


def run_trial(spec, tau, master_seed, index):
    T, truth = generate(spec.with_seed(trial_seed(master_seed, index)))
    return evaluate(T, truth.partition, lsv_cluster(T, tau))


def _run_trial_safe(args):
    spec, tau, master_seed, index = args
    try:
        return run_trial(spec, tau, master_seed, index)
    except Exception as exc:  # re-raised with the trial index attached
        raise TrialError(index, exc) from exc


def bench(spec, tau, trials, seed=0, workers=1, label=None):
    """Average benchmark statistics over `trials` samples of `spec`.

    Trial ``i`` uses ``trial_seed(seed, i)``; results are aggregated in trial
    order, so the row does not depend on `workers`.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    jobs = [(spec, tau, seed, i) for i in range(trials)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            reports = list(ex.map(_run_trial_safe, jobs, chunksize=max(1, trials // (4 * workers))))
    else:
        reports = [_run_trial_safe(j) for j in jobs]
    arr = np.array([astuple(r) for r in reports], dtype=float)
    mean = arr.mean(axis=0)
    if label is None:
        label = f"{spec.kind} p={spec.p:g} q={spec.q:g} tau={tau:g}"
    return BenchRow(
        label=label,
        trials=trials,
        avg_clusters=mean[0],
        avg_avg_diag_liwv=mean[3],
        avg_avg_diag_ones=mean[5],
        avg_min_diag_liwv=mean[4],
        avg_min_diag_ones=mean[6],
        pct_fully_recovered=100 * mean[2],
        avg_errors=mean[1],
    )


def bench_header():
    return "\t".join(("ensemble", "trials") + BENCH_COLUMNS)
