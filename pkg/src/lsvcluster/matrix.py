"""Dense matrix plumbing: validation, Laplacian, dangling node fix, normalization.

Matrices are plain ``numpy.ndarray`` objects. The ``as_*`` helpers validate
their input and return a read-only float64 copy, so a validated matrix can be
shared freely without defensive copying.
"""

import numpy as np

STOCHASTIC_TOL = 1e-9
NEG_DUST = 1e-12


class MatrixError(ValueError):
    """Raised when a matrix violates a structural or numerical precondition."""


def _frozen(a):
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


def as_matrix(A):
    """Return `A` as a finite, non-empty 2-d float array (read-only copy)."""
    a = np.asarray(A, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise MatrixError(f"expected a non-empty 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise MatrixError("matrix has non-finite entries")
    return _frozen(a)


def _square(A):
    a = as_matrix(A)
    if a.shape[0] != a.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {a.shape}")
    return a


def _clamp_dust(a):
    if a.size and a.min() < -NEG_DUST:
        i, j = np.unravel_index(np.argmin(a), a.shape)
        raise MatrixError(f"negative entry {a[i, j]!r} at ({i}, {j})")
    return np.where(a < 0.0, 0.0, a)


def as_stochastic(T, tol=STOCHASTIC_TOL):
    """Validate a row-stochastic matrix and renormalize its rows to sum to 1.

    Entries in ``[-1e-12, 0)`` are treated as rounding dust and clamped to 0;
    anything more negative is an error. Row sums must be within `tol` of 1.
    """
    a = _clamp_dust(_square(T))
    r = a.sum(axis=1)
    bad = np.flatnonzero(np.abs(r - 1.0) > tol)
    if bad.size:
        raise MatrixError(f"row {bad[0]} sums to {r[bad[0]]!r}, not 1 (tol={tol})")
    return _frozen(a / r[:, None])


def as_substochastic(T, tol=STOCHASTIC_TOL):
    """Validate a nonnegative square matrix whose rows sum to at most 1."""
    a = _clamp_dust(_square(T))
    r = a.sum(axis=1)
    bad = np.flatnonzero(r > 1.0 + tol)
    if bad.size:
        raise MatrixError(f"row {bad[0]} sums to {r[bad[0]]!r} > 1")
    return _frozen(a)


def is_stochastic(T, tol=STOCHASTIC_TOL):
    try:
        as_stochastic(T, tol)
    except MatrixError:
        return False
    return True


def as_index_set(S, n):
    """Sorted, duplicate-free int array of positions in ``range(n)``."""
    idx = np.asarray(S, dtype=np.int64).ravel()
    if idx.size and (idx.min() < 0 or idx.max() >= n):
        raise MatrixError(f"index set {idx.tolist()} out of range for n={n}")
    if np.unique(idx).size != idx.size:
        raise MatrixError(f"index set {idx.tolist()} has duplicates")
    out = np.sort(idx)
    out.setflags(write=False)
    return out


def laplacian(A):
    """``diag(row sums) - A``; equals ``I - A`` for stochastic `A`."""
    a = _square(A)
    return np.diag(a.sum(axis=1)) - a


def dnf(T, tol=STOCHASTIC_TOL):
    """Dangling node fix: spread each row's deficit ``1 - rowsum`` evenly over the row.

    Parameters
    ----------
    T : (n, n) array_like
        Sub-stochastic matrix.

    Returns
    -------
    (n, n) ndarray
        The nearest stochastic matrix to `T` in the 2-, infinity- and
        Frobenius norms.
    """
    t = as_substochastic(T, tol)
    n = t.shape[0]
    deficit = 1.0 - t.sum(axis=1)
    return as_stochastic(t + deficit[:, None] / n, tol)


def principal_submatrix(M, S):
    """Rows and columns `S` of square `M`, in the order given by the sorted set."""
    m = _square(M)
    idx = as_index_set(S, m.shape[0])
    return _frozen(m[np.ix_(idx, idx)])


def row_normalize(A, zero_row_policy="error"):
    """Divide each row by its sum to obtain the random-walk transition matrix.

    `zero_row_policy` is ``"error"`` (default) or ``"uniform"``, which replaces
    an all-zero row by ``1/n``.
    """
    if zero_row_policy not in ("error", "uniform"):
        raise ValueError(f"unknown zero_row_policy {zero_row_policy!r}")
    a = _clamp_dust(_square(A))
    n = a.shape[0]
    r = a.sum(axis=1)
    zero = r <= 0.0
    if zero.any():
        if zero_row_policy == "error":
            raise MatrixError(f"row {np.flatnonzero(zero)[0]} is all zeros")
        a = a.copy()
        a[zero] = 1.0
        r = np.where(zero, float(n), r)
    return as_stochastic(a / r[:, None])


def bipartite_embed(D, weights=None):
    """Symmetric ``[[0, D], [D^T, 0]]`` adjacency of a two-mode network.

    `weights`, if given, multiplies `D` entrywise (same shape).
    """
    d = _clamp_dust(as_matrix(D))
    if weights is not None:
        w = as_matrix(weights)
        if w.shape != d.shape:
            raise MatrixError(f"weights shape {w.shape} != D shape {d.shape}")
        d = d * w
    m, n = d.shape
    A = np.zeros((m + n, m + n))
    A[:m, m:] = d
    A[m:, :m] = d.T
    return _frozen(A)


def direct_sum(*blocks):
    """Block-diagonal matrix of square `blocks`."""
    blocks = [as_matrix(b) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n))
    k = 0
    for b in blocks:
        s = b.shape[0]
        out[k:k + s, k:k + s] = b
        k += s
    return _frozen(out)


def inf_norm(A):
    """Induced infinity norm (max absolute row sum)."""
    return float(np.abs(np.asarray(A)).sum(axis=1).max())
