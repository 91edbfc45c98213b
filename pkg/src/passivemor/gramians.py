"""Gramian-based references: Hankel singular values and balanced truncation.

These supply the provable error envelope for any reduction of a stable
model: no order-k approximation beats the (k+1)-th Hankel singular value,
and square-root balanced truncation achieves at most twice the tail sum.
Balanced truncation does not preserve passivity; it is reference output.
"""

import warnings
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from .errors import NumericalError
from .linalg import solve_lyapunov
from .model import StateSpaceModel

__all__ = ["HankelSpectrum", "hankel_singular_values", "balanced_truncation"]


@dataclass(frozen=True)
class HankelSpectrum:
    """Descending Hankel singular values of a stable model."""

    values: np.ndarray

    def lower_bound(self, order):
        """Best-case H-infinity error of any reduction to ``order`` states."""
        return float(self.values[order]) if order < len(self.values) else 0.0


def _check_stable(model):
    if model.n and model.poles.real.max() >= 0:
        raise NumericalError("Gramians require an asymptotically stable model")


def _psd_factor(p):
    # Cholesky when definite, eigenvalue-clipped square root otherwise.
    try:
        return sla.cholesky(p, lower=True)
    except np.linalg.LinAlgError:
        pass
    except sla.LinAlgError:
        pass
    w, q = np.linalg.eigh((p + p.T) / 2.0)
    return q * np.sqrt(np.clip(w, 0.0, None))


def _gramian_factors(model):
    p = solve_lyapunov(model.A, model.B @ model.B.T)
    q = solve_lyapunov(model.A.T, model.C.T @ model.C)
    return _psd_factor(p), _psd_factor(q)


def hankel_singular_values(model):
    """Hankel singular values ``sigma_i = sqrt(lambda_i(P Q))``, descending."""
    _check_stable(model)
    if model.n == 0:
        return HankelSpectrum(values=np.zeros(0))
    lc, lo = _gramian_factors(model)
    sv = np.linalg.svd(lo.T @ lc, compute_uv=False)
    return HankelSpectrum(values=sv)


def balanced_truncation(model, order, gap_tol=1e-9):
    """Square-root balanced truncation to ``order`` states.

    Returns ``(reduced, error_bound)`` with the guaranteed bound
    ``2 * sum of truncated Hankel singular values``.  When the requested
    order splits a Hankel-value cluster the order is reduced to the
    nearest clean gap, with a warning.
    """
    _check_stable(model)
    n = model.n
    if not 0 <= order <= n:
        raise ValueError(f"order must lie in [0, {n}]")
    lc, lo = _gramian_factors(model)
    u, sv, vt = np.linalg.svd(lo.T @ lc)
    k = int(order)
    while 0 < k < n and (sv[k - 1] - sv[k]) <= gap_tol * max(sv[0], np.finfo(float).tiny):
        k -= 1
    if k != order:
        warnings.warn(
            f"no clean Hankel gap at order {order}; reduced to order {k}",
            stacklevel=2,
        )
    error_bound = 2.0 * float(sv[k:].sum())
    if k == 0:
        reduced = StateSpaceModel(
            A=np.zeros((0, 0)),
            B=np.zeros((0, model.m)),
            C=np.zeros((model.m, 0)),
            D=model.D,
        )
        return reduced, error_bound
    s_half = 1.0 / np.sqrt(sv[:k])
    t_right = lc @ vt[:k].T * s_half
    t_left = (lo @ u[:, :k]) * s_half
    reduced = StateSpaceModel(
        A=t_left.T @ model.A @ t_right,
        B=t_left.T @ model.B,
        C=model.C @ t_right,
        D=model.D,
    )
    if reduced.n and reduced.poles.real.max() >= 0:
        raise NumericalError("balanced truncation produced an unstable model")
    return reduced, error_bound
