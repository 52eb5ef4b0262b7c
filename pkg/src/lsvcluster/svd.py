"""Singular value decomposition helpers and Perron values of nonnegative matrices."""

from dataclasses import dataclass

import numpy as np

from .matrix import MatrixError, as_matrix

DEGENERACY_TOL = 1e-10
SIGN_REL_TOL = 1e-12


class NoMixedSignVector(ArithmeticError):
    """The requested singular subspace has no mixed-sign left singular vector."""


@dataclass(frozen=True)
class SvdResult:
    """``M = U @ diag(s) @ Vt`` with `s` sorted in descending order."""

    U: np.ndarray
    s: np.ndarray
    Vt: np.ndarray

    @property
    def V(self):
        return self.Vt.T


@dataclass(frozen=True)
class SingularPair:
    sigma: float
    left: np.ndarray
    right: np.ndarray
    # True when the left vector was rotated inside a degenerate singular subspace
    rotated: bool = False


@dataclass(frozen=True)
class PerronResult:
    rho: float
    vector: np.ndarray
    converged: bool
    iterations: int
    method: str = "power"


def full_svd(M):
    """Full SVD of a square matrix (LAPACK ``gesdd`` via numpy)."""
    m = as_matrix(M)
    if m.shape[0] != m.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {m.shape}")
    U, s, Vt = np.linalg.svd(m)
    return SvdResult(U, s, Vt)


def singular_values(M):
    return np.linalg.svd(as_matrix(M), compute_uv=False)


def sign_threshold(u):
    """Entries with ``|u_i|`` at or below this value count as zero."""
    return SIGN_REL_TOL * float(np.max(np.abs(u)))


def has_mixed_signs(u, eta=None):
    eta = sign_threshold(u) if eta is None else eta
    return bool(np.any(u > eta) and np.any(u < -eta))


def canonical_sign(u):
    """Flip `u` so that its entry of largest magnitude is positive."""
    return u if u[np.argmax(np.abs(u))] >= 0 else -u


def _mixed_in_subspace(u, basis):
    """Unit vector in span(`basis`) with mixed signs, given uniform-sign `u` in that span."""
    u = canonical_sign(u)
    for w in basis.T:
        w = w - (w @ u) * u
        nrm = np.linalg.norm(w)
        if nrm < 1e-8:
            continue
        w = canonical_sign(w / nrm)
        if has_mixed_signs(w):
            return w
        # u and w are orthogonal and both nonnegative, so their supports are
        # disjoint and their difference has mixed signs.
        d = u - w
        return canonical_sign(d / np.linalg.norm(d))
    raise NoMixedSignVector("degenerate subspace is spanned by the uniform-sign vector")


def _fill_zeros(u, basis):
    """Move `u` inside span(`basis`) so that zero-classified entries become nonzero.

    Adds a small multiple of the projection of the all-ones vector, scaled so
    that no nonzero entry of `u` changes sign. Returns `u` unchanged when that
    does not reduce the number of zero entries.
    """
    eta = sign_threshold(u)
    zero = np.abs(u) <= eta
    if not zero.any():
        return u
    p = basis @ (basis.T @ np.ones(u.size))
    top = np.max(np.abs(p))
    if top == 0:
        return u
    w = u + 0.5 * np.min(np.abs(u[~zero])) / top * p
    w = w / np.linalg.norm(w)
    if np.sum(np.abs(w) <= sign_threshold(w)) >= zero.sum():
        return u
    return w


def second_smallest_pair(M, degeneracy_tol=DEGENERACY_TOL, svd=None):
    """Second-smallest singular value of `M` with a mixed-sign left singular vector.

    If the left vector returned by the SVD has uniform sign but the singular
    value is (numerically) repeated, a mixed-sign vector is constructed inside
    the corresponding left singular subspace.

    Parameters
    ----------
    M : (n, n) array_like
        Typically the Laplacian ``I - T`` of a stochastic matrix.
    degeneracy_tol : float
        Singular values within this distance of ``sigma_{n-1}`` belong to the
        same singular subspace.
    svd : SvdResult, optional
        Precomputed decomposition of `M`.

    Returns
    -------
    SingularPair
        Left vector sign-canonicalized (largest-magnitude entry positive); the
        right vector is ``M^T u / sigma`` (or the matching SVD column when
        ``sigma`` is zero).

    Raises
    ------
    NoMixedSignVector
        If the left vector has uniform sign and the singular value is simple.
    """
    m = as_matrix(M)
    n = m.shape[0]
    if n < 2 or m.shape[1] != n:
        raise MatrixError(f"need a square matrix of order >= 2, got {m.shape}")
    res = svd if svd is not None else full_svd(m)
    k = n - 2
    sigma = float(res.s[k])
    u = res.U[:, k]
    v = res.Vt[k]
    rotated = False
    near = np.flatnonzero(np.abs(res.s - sigma) <= degeneracy_tol)
    basis = res.U[:, near]
    if not has_mixed_signs(u):
        if near.size < 2:
            raise NoMixedSignVector(
                f"left singular vector for sigma={sigma:.3e} has uniform sign")
        others = [j for j in near if j != k]
        u = _mixed_in_subspace(u, np.column_stack([res.U[:, j] for j in others] + [u]))
        rotated = True
    if near.size >= 2:
        # in a repeated singular value, avoid splits that leave whole blocks unclassified
        w = _fill_zeros(u, basis)
        rotated = rotated or w is not u
        u = w
    flip = u[np.argmax(np.abs(u))] < 0
    if flip:
        u = -u
    if rotated:
        if sigma > degeneracy_tol:
            mu = u @ m
            v = mu / np.linalg.norm(mu)
        # for sigma == 0 any unit vector satisfies u^T M = sigma v^T; keep the SVD one
    elif flip:
        v = -v
    return SingularPair(sigma, u.copy(), np.asarray(v).copy(), rotated)


def spectral_radius(M, tol=1e-12, maxiter=20_000, x0=None):
    """Perron root and nonnegative unit eigenvector of a nonnegative matrix.

    Power iteration on the shifted matrix ``M + I``: the shift has the same
    Perron vector, keeps the iteration nonnegative and stops periodic
    (e.g. bipartite) matrices from oscillating. Stops when successive
    eigenvalue estimates differ by less than `tol`; if that does not happen
    within `maxiter` steps the dense eigensolver answers instead
    (``method == "eig"``).
    """
    m = as_matrix(M)
    if m.shape[0] != m.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {m.shape}")
    if m.min() < 0:
        raise MatrixError("spectral_radius needs a nonnegative matrix")
    n = m.shape[0]
    x = np.full(n, 1.0 / n) if x0 is None else np.asarray(x0, dtype=float) / np.sum(x0)
    lam = 0.0
    converged = False
    it = 0
    for it in range(1, maxiter + 1):
        y = m @ x + x
        s = y.sum()
        new = s - 1.0
        x = y / s
        if abs(new - lam) < tol:
            lam = new
            converged = True
            break
        lam = new
    if not converged:
        # sublinear convergence (e.g. nilpotent or defective M): dense eigensolver
        w, V = np.linalg.eig(m)
        k = int(np.argmax(w.real))
        vec = np.abs(V[:, k].real)
        return PerronResult(float(max(w[k].real, 0.0)), vec / np.linalg.norm(vec), True, it, "eig")
    rho = max(lam, 0.0)
    vec = x / np.linalg.norm(x)
    return PerronResult(float(rho), vec, converged, it)
