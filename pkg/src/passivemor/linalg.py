"""Dense linear-algebra primitives.

Contract-checked wrappers around LAPACK (via numpy/scipy) plus a pivoted
Cholesky factorization that exposes its pivot order, which the greedy
spectral-zero selection relies on.  All functions are pure and operate on
plain ``numpy`` arrays with finite entries.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import EigenDecompositionError, RankDeficiencyError, SingularOperatorError

__all__ = [
    "EigenPair",
    "as_matrix",
    "eig",
    "symmetric_eig",
    "solve_lyapunov",
    "pivoted_cholesky",
    "pivoted_cholesky_partial",
    "singular_values",
]


def as_matrix(a, name="matrix"):
    """Validate ``a`` as a 2-d real array with finite entries and return a copy."""
    m = np.array(a, dtype=float, ndmin=2)
    if m.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


@dataclass(frozen=True)
class EigenPair:
    """An (eigenvalue, unit-norm eigenvector) pair."""

    value: complex
    vector: np.ndarray


def _sort_key(values):
    # Deterministic output order: real part ascending, ties by imaginary part.
    return np.lexsort((values.imag, values.real))


def eig(m, tol=1e-8):
    """Eigenpairs of a square real matrix.

    Returns a list of :class:`EigenPair` sorted by real part ascending,
    ties broken by imaginary part ascending.  Eigenvectors have unit
    2-norm.  For real input the multiset of eigenvalues is closed under
    conjugation.

    Raises
    ------
    EigenDecompositionError
        If any residual ``||M v - lambda v||`` exceeds ``tol * ||M||``.
    """
    m = as_matrix(m)
    n, nc = m.shape
    if n != nc:
        raise ValueError(f"eig expects a square matrix, got {n}x{nc}")
    if n == 0:
        return []
    values, vectors = np.linalg.eig(m)
    order = _sort_key(values)
    values = values[order]
    vectors = vectors[:, order]
    scale = max(np.linalg.norm(m, 2), np.finfo(float).tiny)
    residuals = np.linalg.norm(m @ vectors - vectors * values, axis=0)
    worst = float(residuals.max())
    if worst > tol * scale:
        raise EigenDecompositionError(
            f"eigenpair residual {worst:.3e} exceeds {tol:.1e} * ||M||", residual=worst
        )
    return [EigenPair(complex(values[j]), vectors[:, j].copy()) for j in range(n)]


def symmetric_eig(m, sym_tol=1e-10):
    """Eigendecomposition of a symmetric matrix.

    Returns ``(w, q)`` with eigenvalues ``w`` ascending and orthogonal ``q``
    such that ``m = q @ diag(w) @ q.T``.  The input is symmetrized before
    factoring; asymmetry beyond ``sym_tol * ||m||`` is an error.
    """
    m = as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError("symmetric_eig expects a square matrix")
    scale = max(np.linalg.norm(m, 2), np.finfo(float).tiny)
    asym = np.linalg.norm(m - m.T, 2)
    if asym > sym_tol * scale:
        raise ValueError(
            f"matrix asymmetry {asym:.3e} exceeds {sym_tol:.1e} * ||M|| = {sym_tol * scale:.3e}"
        )
    w, q = np.linalg.eigh((m + m.T) / 2.0)
    return w, q


def solve_lyapunov(a, q, tol=1e-9):
    """Solve the continuous Lyapunov equation ``A X + X A^T + Q = 0``.

    ``A`` must admit a unique solution (no two eigenvalues of ``A`` summing
    to zero); a residual beyond ``tol * (||A|| ||X|| + ||Q||)`` raises
    :class:`SingularOperatorError`.
    """
    a = as_matrix(a, "A")
    q = as_matrix(q, "Q")
    if a.shape[0] != a.shape[1] or a.shape != q.shape:
        raise ValueError("A and Q must be square and of equal size")
    try:
        x = sla.solve_continuous_lyapunov(a, -q)
    except Exception as exc:  # scipy raises LinAlgError-likes on breakdown
        raise SingularOperatorError(f"Lyapunov solve failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SingularOperatorError("Lyapunov solve produced non-finite entries")
    x = (x + x.T) / 2.0
    residual = np.linalg.norm(a @ x + x @ a.T + q, 2)
    bound = tol * (np.linalg.norm(a, 2) * np.linalg.norm(x, 2) + np.linalg.norm(q, 2))
    if residual > max(bound, np.finfo(float).tiny):
        raise SingularOperatorError(
            f"Lyapunov residual {residual:.3e} exceeds tolerance {bound:.3e} "
            "(eigenvalue pair of A close to summing to zero?)"
        )
    return x


def pivoted_cholesky_partial(m, tol=1e-12):
    """Pivoted Cholesky with early exit on a non-positive pivot.

    Greedily picks the largest remaining diagonal of the Schur complement.
    Returns ``(perm, L, rank)`` where ``m[perm][:, perm][:rank, :rank]``
    equals ``L[:rank] @ L[:rank].T`` and ``rank`` counts the pivots that
    stayed above ``tol * max(diag(m), 1e-300)``.
    """
    m = as_matrix(m)
    n = m.shape[0]
    if n != m.shape[1]:
        raise ValueError("pivoted Cholesky expects a square matrix")
    work = (m + m.T) / 2.0
    perm = np.arange(n)
    threshold = tol * max(float(work.diagonal().max(initial=0.0)), 1e-300)
    rank = n
    for k in range(n):
        d = work.diagonal()
        j = k + int(np.argmax(d[k:]))
        if d[j] <= threshold:
            rank = k
            break
        if j != k:
            work[:, [k, j]] = work[:, [j, k]]
            work[[k, j], :] = work[[j, k], :]
            perm[[k, j]] = perm[[j, k]]
        pivot = np.sqrt(work[k, k])
        work[k, k] = pivot
        work[k + 1:, k] /= pivot
        work[k, k + 1:] = 0.0
        work[k + 1:, k + 1:] -= np.outer(work[k + 1:, k], work[k + 1:, k])
    return perm, np.tril(work), rank


def pivoted_cholesky(m, tol=1e-12):
    """Pivoted Cholesky factorization of a symmetric positive definite matrix.

    Returns ``(perm, L)`` with ``m[perm][:, perm] = L @ L.T``, the pivot
    order selecting the largest remaining Schur-complement diagonal at each
    step (so ``diag(L)`` is non-increasing).

    Raises
    ------
    RankDeficiencyError
        On a non-positive pivot; ``rank`` carries the failure index.
    """
    perm, lower, rank = pivoted_cholesky_partial(m, tol=tol)
    n = m.shape[0] if hasattr(m, "shape") else len(m)
    if rank < n:
        raise RankDeficiencyError(
            f"matrix is not positive definite: pivot {rank} is non-positive", rank=rank
        )
    return perm, lower


def singular_values(m):
    """Singular values of a (possibly complex) matrix, descending."""
    m = np.atleast_2d(np.asarray(m))
    if not np.all(np.isfinite(m)):
        raise ValueError("singular_values: input contains non-finite entries")
    return np.linalg.svd(m, compute_uv=False)
