import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from lsvcluster.cluster import lsv_cluster
from lsvcluster.datasets import courtois
from lsvcluster.ensembles import EnsembleSpec
from lsvcluster.evaluation import (BENCH_COLUMNS, TrialError, bench, bench_header, count_errors,
                                   evaluate, fully_recovered)


def brute_force(ground, empirical):
    g = [set(c) for c in ground if len(c)]
    e = [set(c) for c in empirical if len(c)]
    l = max(len(g), len(e))
    g += [set()] * (l - len(g))
    e += [set()] * (l - len(e))
    if l == 0:
        return 0.0
    return min(sum(len(g[p[j]] ^ e[j]) for j in range(l))
               for p in itertools.permutations(range(l))) / 2


def random_clusters(rng, n, l, cover=1.0):
    labels = rng.integers(0, l, size=n)
    keep = rng.random(n) < cover
    return [np.flatnonzero((labels == k) & keep) for k in range(l)]


def test_examples():
    P = [[0, 1, 2], [3, 4, 5]]
    assert count_errors(P, P) == 0
    assert count_errors([[1, 2, 3], [4, 5, 6]], [[1, 2, 3, 4], [5, 6]]) == 1
    assert count_errors([[1, 2, 3, 4], [5, 6, 7, 8]], [list(range(1, 9))]) == 4
    assert count_errors([[0, 1], [2, 3]], [[0, 1], [2]]) == 0.5


def test_hungarian_matches_brute_force():
    rng = np.random.default_rng(2024)
    for _ in range(500):
        n = int(rng.integers(1, 25))
        g = random_clusters(rng, n, int(rng.integers(1, 7)))
        e = random_clusters(rng, n, int(rng.integers(1, 7)), cover=rng.uniform(0.6, 1.0))
        assert count_errors(g, e, n) == brute_force(g, e)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_symmetric_and_relabel_invariant(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 30))
    g = random_clusters(rng, n, int(rng.integers(1, 6)))
    e = random_clusters(rng, n, int(rng.integers(1, 6)), cover=rng.uniform(0.5, 1.0))
    c = count_errors(g, e)
    assert c == count_errors(e, g)
    assert c == count_errors(g[::-1], [e[i] for i in rng.permutation(len(e))])
    assert (c == 0) == fully_recovered(g, e)


def test_overlap_rejected():
    with pytest.raises(ValueError):
        count_errors([[0, 1], [1, 2]], [[0, 1, 2]])
    with pytest.raises(ValueError):
        count_errors([[0, 5]], [[0]], n=3)


def test_fully_recovered():
    assert fully_recovered([[0, 1], [2, 3]], [[3, 2], [1, 0]])
    assert not fully_recovered([[0, 1], [2, 3]], [[0], [1, 2, 3]])
    assert fully_recovered([[0, 1], [2, 3]], [[0, 1], [], [2, 3]])


def test_evaluate_courtois():
    C = courtois()
    truth = [[0, 1, 2], [3, 4], [5, 6, 7]]
    rep = evaluate(C, truth, lsv_cluster(C, 0.1))
    assert rep.num_clusters == 3 and rep.errors == 0 and rep.fully_recovered
    assert abs(rep.avg_diag_liwv - 0.9994) <= 5e-4
    assert rep.min_diag_ones <= rep.avg_diag_ones <= 1


def test_bench_decoupled_and_workers():
    spec = EnsembleSpec((8, 6, 4), 1.0, 0.0)
    row = bench(spec, 1e-8, 6, seed=3)
    assert row.pct_fully_recovered == 100 and row.avg_errors == 0 and row.avg_clusters == 3
    assert row.avg_min_diag_liwv == 1 and row.avg_avg_diag_ones == 1
    spec = EnsembleSpec((20, 15, 10), 0.95, 0.02)
    a = bench(spec, 0.5, 8, seed=1, workers=1)
    b = bench(spec, 0.5, 8, seed=1, workers=2)
    assert a == b
    line = a.tsv().split("\t")
    assert len(line) == 2 + len(BENCH_COLUMNS)
    assert bench_header().split("\t")[2:] == list(BENCH_COLUMNS)
    with pytest.raises(ValueError):
        bench(spec, 0.5, 0)


def test_bench_reports_failing_trial():
    with pytest.raises(TrialError, match="trial 0"):
        bench(EnsembleSpec((4, 4), 0.9, 0.1), -1.0, 2)
