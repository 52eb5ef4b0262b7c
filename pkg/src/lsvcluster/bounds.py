"""Executable checks of the inequalities relating clustering to small singular values.

Every check returns one or more :class:`BoundReport` objects of the form
``lhs <= rhs`` (with an absolute slack of ``1e-10`` for rounding), so a
report can be printed, asserted in a test, or aggregated by the CLI.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .coupling import coupling_matrix, perron_values
from .matrix import (MatrixError, as_index_set, as_matrix, as_stochastic,
                     as_substochastic, direct_sum, dnf, inf_norm)
from .svd import second_smallest_pair, sign_threshold, singular_values, spectral_radius

SLACK = 1e-10


@dataclass(frozen=True)
class BoundReport:
    name: str
    lhs: float
    rhs: float
    details: dict = field(default_factory=dict, compare=False)

    @property
    def holds(self):
        return bool(self.lhs <= self.rhs + SLACK)

    @property
    def slack(self):
        return float(self.rhs - self.lhs)

    def line(self):
        status = "PASS" if self.holds else "FAIL"
        return (f"{self.name} lhs={self.lhs:.10g} rhs={self.rhs:.10g} "
                f"slack={self.slack:.3g} {status}")


@dataclass(frozen=True)
class BlowupDecomposition:
    epsilon: float
    Etilde: np.ndarray
    T1tilde: np.ndarray
    T2tilde: np.ndarray


@dataclass(frozen=True)
class SmallDiagExample:
    n: int
    x: float
    y: float
    eps: float
    delta: float

    def __post_init__(self):
        if self.n < 4:
            raise ValueError(f"need n >= 4, got {self.n}")
        if not (0 < self.delta < self.eps < self.x < self.y and self.x + self.y < 1):
            raise ValueError("need 0 < delta < eps < x < y and x + y < 1")

    def matrix(self):
        n, x, y, e, d = self.n, self.x, self.y, self.eps, self.delta
        T = np.zeros((n, n))
        T[0, 0], T[0, 1] = 1 - e, e
        T[1, 1] = 1 - d
        T[1, 2:] = d / (n - 2)
        T[2:, 0] = x
        T[2:, 1] = y
        T[2:, 2:] += (1 - x - y) * np.eye(n - 2)
        return as_stochastic(T)

    def sigma_leading_term(self):
        n, x, y = self.n, self.x, self.y
        return self.eps * (x + y) * math.sqrt(n) / math.sqrt((n - 1) * (x * x + y * y) + 2 * x * y)


@dataclass(frozen=True)
class NearDecoupledDecomposition:
    B_sub: np.ndarray
    E_sub: np.ndarray
    B_dnf: np.ndarray
    E_dnf: np.ndarray
    reports: list


# --- random constructions -------------------------------------------------

def random_stochastic(n, rng, sparsity=0.0):
    """Random stochastic matrix with Dirichlet(1) rows, optionally with zeroed entries."""
    X = rng.exponential(size=(n, n))
    if sparsity:
        X[rng.random((n, n)) < sparsity] = 0.0
        empty = X.sum(axis=1) == 0
        X[empty, rng.integers(n, size=empty.sum())] = 1.0
    return X / X.sum(axis=1, keepdims=True)


def random_irreducible(n, rng):
    """Random stochastic matrix with a Hamiltonian cycle, hence irreducible."""
    X = random_stochastic(n, rng, sparsity=0.5) if n > 1 else np.ones((1, 1))
    perm = rng.permutation(n)
    X[perm, np.roll(perm, -1)] += rng.uniform(0.1, 1.0, size=n)
    return X / X.sum(axis=1, keepdims=True)


def random_substochastic(n, rng):
    X = random_stochastic(n, rng)
    return X * rng.uniform(0.0, 1.0, size=(n, 1))


def perturb_stochastic(S, size, rng):
    """``(1 - t) S + t R`` with ``t`` chosen so that ``||T - S||_inf`` is at most `size`."""
    R = random_stochastic(S.shape[0], rng)
    d = inf_norm(R - S)
    t = min(1.0, size / d) if d > 0 else 0.0
    return (1 - t) * S + t * R


# --- inequality checks ---------------------------------------------------

def stochastic_sigma1_bound(T):
    """Largest singular value of a stochastic matrix is at most ``sqrt(n)``.

    ``details['extremal']`` says whether `T` equals ``1 e_j^T`` for some `j`,
    which is exactly the case of equality.
    """
    A = as_stochastic(T)
    n = A.shape[0]
    cols = np.flatnonzero(np.all(A == 1.0, axis=0))
    return BoundReport("sigma1(T)<=sqrt(n)", float(singular_values(A)[0]), math.sqrt(n),
                       {"extremal": bool(cols.size == 1)})


def blowup(E):
    """Write ``E = eps * Etilde`` with ``Etilde = T1tilde - T2tilde`` as large as possible."""
    E = as_matrix(E)
    n = E.shape[0]
    if E.shape != (n, n):
        raise MatrixError(f"expected a square matrix, got {E.shape}")
    if np.max(np.abs(E.sum(axis=1))) > 1e-10:
        raise MatrixError("rows of E must sum to zero")
    norm = inf_norm(E)
    if norm == 0:
        raise MatrixError("E is zero; the blowup factor is undefined")
    if norm > 2 + 1e-10:
        raise MatrixError(f"||E||_inf = {norm} exceeds 2")
    eps = norm / 2
    Et = E / eps
    Ep = np.maximum(Et, 0.0)
    Em = -np.minimum(Et, 0.0)
    T1 = Ep.copy()
    T2 = Em.copy()
    # padding can come out as -1e-15 when a row of Etilde already has mass 1
    T1[:, 0] += np.maximum(1.0 - Ep.sum(axis=1), 0.0)
    T2[:, 0] += np.maximum(1.0 - Em.sum(axis=1), 0.0)
    return BlowupDecomposition(eps, Et, T1, T2)


def diff_norm_bound(T1, T2):
    """``sigma_1(T1 - T2) <= 2 eps sqrt(n)`` with ``eps = ||T1 - T2||_inf / 2``."""
    A = as_stochastic(T1)
    B = as_stochastic(T2)
    if A.shape != B.shape:
        raise MatrixError("shape mismatch")
    n = A.shape[0]
    E = A - B
    eps = inf_norm(E) / 2
    lhs = float(singular_values(E)[0])
    equality = False
    if eps > 0 and np.allclose(E, E[0], atol=1e-14):
        row = E[0] / eps
        pos = np.flatnonzero(np.isclose(row, 1.0, atol=1e-12))
        neg = np.flatnonzero(np.isclose(row, -1.0, atol=1e-12))
        rest = np.setdiff1d(np.arange(n), np.concatenate([pos, neg]))
        equality = bool(pos.size == 1 and neg.size == 1 and np.allclose(row[rest], 0, atol=1e-12))
    return BoundReport("sigma1(T1-T2)<=2eps*sqrt(n)", lhs, 2 * eps * math.sqrt(n),
                       {"epsilon": eps, "equality_case": equality})


def laplacian_singular_values(T):
    A = as_stochastic(T)
    return singular_values(np.eye(A.shape[0]) - A)


def count_small_singvals(T, k, epsilon):
    """At least `k` singular values of ``I - T`` are at most ``2 eps sqrt(n)``.

    The caller asserts ``T = S + E`` with `S` a direct sum of `k` irreducible
    stochastic blocks and ``epsilon = ||E||_inf / 2``. `lhs` is the k-th
    smallest singular value.
    """
    s = np.sort(laplacian_singular_values(T))
    n = s.size
    bound = 2 * epsilon * math.sqrt(n)
    return BoundReport(f"{k} small singular values", float(s[k - 1]), bound,
                       {"count_below": int(np.sum(s <= bound + SLACK))})


def _check_decoupled(S, partition):
    S = as_stochastic(S)
    n = S.shape[0]
    blocks = [as_index_set(b, n) for b in partition]
    if len(blocks) < 2:
        raise MatrixError("a completely decoupled matrix needs at least two blocks")
    allidx = np.concatenate(blocks)
    if np.sort(allidx).tolist() != list(range(n)):
        raise MatrixError("partition must cover every state exactly once")
    label = np.empty(n, dtype=int)
    for k, b in enumerate(blocks):
        label[b] = k
    cross = label[:, None] != label[None, :]
    if np.any(S[cross] != 0):
        raise MatrixError("S has nonzero entries between blocks")
    return S


def frob_vs_sigma(T, S, partition):
    """``sigma_{n-1}(I - T) <= ||T - S||_F`` for completely decoupled `S`."""
    A = as_stochastic(T)
    S = _check_decoupled(S, partition)
    s = laplacian_singular_values(A)
    return BoundReport("sigma_{n-1}(I-T)<=||T-S||_F", float(s[-2]),
                       float(np.linalg.norm(A - S, "fro")))


def coupling_lower_bound(T, sigma, u):
    """The larger diagonal entry of the sign-split coupling matrix is at least ``1 - sigma sqrt(m)``.

    `u` is a left singular vector of ``I - T`` for ``sigma > 0``; ``m`` counts
    its entries that are not numerically zero.
    """
    A = as_stochastic(T)
    u = np.asarray(u, dtype=float)
    eta = sign_threshold(u)
    S1 = np.flatnonzero(u > eta)
    S2 = np.flatnonzero(u < -eta)
    m = S1.size + S2.size
    W = coupling_matrix(A, [S1, S2], np.abs(u))
    best = float(max(W.values[0, 0], W.values[1, 1]))
    return BoundReport("max coupling diag>=1-sigma*sqrt(m)", 1 - sigma * math.sqrt(m), best,
                       {"m": m, "n": A.shape[0], "diag": W.diagonal.tolist()})


def perron_lower_bounds(T, sigma, u, v):
    """``rho(T[S_j]) >= 1 - sigma * s_j v_j^T x_j`` for both sign blocks.

    ``x_j`` is the Perron vector of ``T[S_j]`` scaled so ``|u_j|^T x_j = 1``
    and ``s_j`` is the sign of `u` on block ``j``.
    """
    A = as_stochastic(T)
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    eta = sign_threshold(u)
    out = []
    for j, (S, sgn) in enumerate(((np.flatnonzero(u > eta), 1.0),
                                   (np.flatnonzero(u < -eta), -1.0))):
        pr = spectral_radius(A[np.ix_(S, S)])
        x = pr.vector / (np.abs(u[S]) @ pr.vector)
        bound = 1 - sigma * sgn * float(v[S] @ x)
        out.append(BoundReport(f"perron block {j + 1}", bound, pr.rho,
                               {"converged": pr.converged}))
    return out


def maxlem_grid_check(l, m, gridsize=100_000):
    """Grid minimum of ``max(a / sqrt(l), sqrt(1 - a^2) / sqrt(m - l))`` is ``1 / sqrt(m)``."""
    if not (1 <= l <= m - 1):
        raise ValueError(f"need 1 <= l <= m - 1, got l={l}, m={m}")
    a = np.linspace(0.0, 1.0, gridsize)
    f = np.maximum(a / math.sqrt(l), np.sqrt(1 - a * a) / math.sqrt(m - l))
    k = int(np.argmin(f))
    return BoundReport(f"maxlem l={l} m={m}", abs(float(f[k]) - 1 / math.sqrt(m)), 2.0 / gridsize,
                       {"min": float(f[k]), "alpha": float(a[k])})


def near_decoupled_decomp(T, partition, delta):
    """Split `T` into a block-diagonal part plus a small remainder, two ways.

    Requires ``W_1(T)[k, k] >= 1 - delta`` for every block. The first
    decomposition keeps the sub-stochastic diagonal blocks, the second
    replaces them by their dangling node fixes.
    """
    A = as_stochastic(T)
    n = A.shape[0]
    blocks = [as_index_set(b, n) for b in partition]
    allidx = np.concatenate(blocks)
    if np.sort(allidx).tolist() != list(range(n)):
        raise MatrixError("partition must cover every state exactly once")
    W = coupling_matrix(A, blocks, np.ones(n))
    low = float(W.diagonal.min())
    if low < 1 - delta - 1e-12:
        raise MatrixError(f"coupling diagonal {low:.6g} is below 1 - delta = {1 - delta:.6g}")
    m = len(blocks)
    Bs = np.zeros_like(A)
    Bd = np.zeros_like(A)
    for b in blocks:
        ix = np.ix_(b, b)
        Bs[ix] = A[ix]
        Bd[ix] = dnf(A[ix])
    Es = A - Bs
    Ed = A - Bd
    dn = delta * n
    reports = [
        BoundReport("off-block ||E||_F", float(np.linalg.norm(Es, "fro")),
                    min(math.sqrt(dn), dn)),
        BoundReport("off-block ||E||_inf", inf_norm(Es), min(1.0, dn)),
        BoundReport("dnf-block ||E||_inf", inf_norm(Ed), 2 * min(1.0, dn)),
        BoundReport("dnf-block ||E||_F", float(np.linalg.norm(Ed, "fro")),
                    min(2 * dn, math.sqrt(dn * dn + delta * m), math.sqrt(dn + delta * m))),
    ]
    return NearDecoupledDecomposition(Bs, Es, Bd, Ed, reports)


def _norms(X):
    return {"inf": inf_norm(X), "2": float(np.linalg.norm(X, 2)), "fro": float(np.linalg.norm(X, "fro"))}


def dnf_optimality_check(T, trials=1000, seed=0):
    """``||T - dnf(T)|| <= ||T - S||`` against `trials` random stochastic `S`.

    Half the competitors are unstructured random matrices, half are small
    random perturbations of ``dnf(T)`` itself. Returns one report per norm
    with ``rhs`` the smallest distance seen.
    """
    A = as_substochastic(T)
    n = A.shape[0]
    rng = np.random.default_rng(seed)
    D = dnf(A)
    best = {"inf": np.inf, "2": np.inf, "fro": np.inf}
    for t in range(trials):
        if t % 2:
            S = perturb_stochastic(D, rng.uniform(1e-6, 0.2), rng)
        else:
            S = random_stochastic(n, rng)
        for key, val in _norms(A - S).items():
            best[key] = min(best[key], val)
    own = _norms(A - D)
    return [BoundReport(f"dnf optimal ({key})", own[key], float(best[key])) for key in own]


def noblowup_check(T0, T, S):
    """Restricting to `S` and applying the dangling node fix does not increase the error."""
    A0 = as_stochastic(T0)
    A = as_stochastic(T)
    S = as_index_set(S, A.shape[0])
    sub0 = A0[np.ix_(S, S)]
    if np.max(np.abs(sub0.sum(axis=1) - 1)) > 1e-9:
        raise MatrixError("T0[S] is not stochastic")
    Tt = dnf(A[np.ix_(S, S)])
    small = _norms(Tt - sub0)
    big = _norms(A - A0)
    return [BoundReport(f"dnf no blowup ({key})", small[key], big[key]) for key in small]


def smalldiag_example(params):
    """Build the three-block example with a small coupling diagonal and check its predictions.

    Returns ``(T, reports)``: `x + y` is a singular value of multiplicity
    ``n - 3``; ``sigma_{n-1}`` matches the closed-form leading term within
    ``10 eps^2``; the sign split is ``{0}`` versus the rest; and the second
    coupling diagonal ``mu`` is below ``1 - sqrt(n) sigma_{n-1}``.
    """
    p = params
    T = p.matrix()
    n = p.n
    lap = np.eye(n) - T
    s = singular_values(lap)
    mult = int(np.sum(np.abs(s - (p.x + p.y)) <= 1e-9))
    pair = second_smallest_pair(lap)
    u = pair.left
    eta = sign_threshold(u)
    pos, neg = np.flatnonzero(u > eta), np.flatnonzero(u < -eta)
    first, rest = (pos, neg) if 0 in pos else (neg, pos)
    split_ok = first.tolist() == [0] and rest.tolist() == list(range(1, n))
    W = coupling_matrix(T, [first, rest], np.abs(u))
    mu = float(W.values[1, 1])
    closed = p.sigma_leading_term()
    reports = [
        BoundReport("x+y multiplicity n-3", float(abs(mult - (n - 3))), 0.0, {"multiplicity": mult}),
        BoundReport("sigma_{n-1} vs closed form", abs(pair.sigma - closed), 10 * p.eps ** 2,
                    {"sigma": pair.sigma, "closed_form": closed}),
        BoundReport("sign split {1}|{2..n}", 0.0 if split_ok else 1.0, 0.0),
        BoundReport("mu<1-sqrt(n)*sigma", mu, 1 - math.sqrt(n) * pair.sigma, {"mu": mu}),
    ]
    return T, reports


# --- battery used by the CLI ----------------------------------------------

def analytic_two_block(k=5, a=0.1):
    """Two ``k x k`` uniform blocks leaking probability `a` to each other, and its decoupled limit."""
    J = np.ones((k, k)) / k
    T = np.block([[(1 - a) * J, a * J], [a * J, (1 - a) * J]])
    S = direct_sum(J, J)
    return as_stochastic(T), S


def matrix_battery(T, tau=0.1, seed=0, trials=200):
    """Checks that apply to an arbitrary stochastic matrix and its clustering."""
    from .cluster import lsv_cluster

    A = as_stochastic(T)
    n = A.shape[0]
    reports = [stochastic_sigma1_bound(A)]
    if n < 2:
        return reports
    lap = np.eye(n) - A
    try:
        pair = second_smallest_pair(lap)
    except ArithmeticError:
        pair = None
    if pair is not None and pair.sigma > 0:
        reports.append(coupling_lower_bound(A, pair.sigma, pair.left))
        reports.extend(perron_lower_bounds(A, pair.sigma, pair.left, pair.right))
    result = lsv_cluster(A, tau)
    blocks = result.partition(singletons=True)
    if len(blocks) >= 2:
        S = np.zeros_like(A)
        for b in blocks:
            S[np.ix_(b, b)] = dnf(A[np.ix_(b, b)])
        reports.append(frob_vs_sigma(A, S, blocks))
        delta = 1 - float(coupling_matrix(A, blocks, np.ones(n)).diagonal.min())
        reports.extend(near_decoupled_decomp(A, blocks, delta).reports)
        reports.extend(noblowup_check(S, A, blocks[0]))
    reports.extend(dnf_optimality_check(A[np.ix_(result.clusters[0], result.clusters[0])],
                                        trials=trials, seed=seed))
    return reports


def builtin_battery(seed=0):
    """Checks on the closed-form constructions."""
    reports = []
    T, S = analytic_two_block(5, 0.1)
    half = np.arange(5)
    reports.append(frob_vs_sigma(T, S, [half, half + 5]))
    reports.append(count_small_singvals(T, 2, 0.1))
    n = 4
    e = np.eye(n)
    reports.append(diff_norm_bound(np.outer(np.ones(n), e[0]), np.outer(np.ones(n), e[1])))
    for j in range(n):
        reports.append(stochastic_sigma1_bound(np.outer(np.ones(n), e[j])))
    reports.append(maxlem_grid_check(1, 2, 100_001))
    reports.append(maxlem_grid_check(3, 7, 100_000))
    for n_ex in (10, 4):
        _, reps = smalldiag_example(SmallDiagExample(n_ex, 0.2, 0.3, 1e-3, 1e-6))
        reports.extend(reps)
    rng = np.random.default_rng(seed)
    reports.extend(dnf_optimality_check(random_substochastic(6, rng), trials=200, seed=seed))
    return reports
