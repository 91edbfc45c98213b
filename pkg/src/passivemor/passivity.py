"""Kalman-Yakubovich-Popov machinery.

The KYP block matrix ``W(X, M)``, certificate verification, the
Hamiltonian matrix whose eigenvalues are the spectral zeros, strict
passivity testing, extremal Riccati solutions via ordered Schur forms,
the largest admissible shift of the transfer function, and the passivity
radius of normalized port-Hamiltonian realizations.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla

from .errors import EigenDecompositionError, NumericalError
from .linalg import as_matrix
from .model import FrequencySample, evaluate_phi, shift_model

__all__ = [
    "Certificate",
    "CertificateViolation",
    "AREResult",
    "PassivityDiagnostics",
    "kyp_matrix",
    "verify_certificate",
    "hamiltonian_matrix",
    "is_strictly_passive",
    "solve_are_extremal",
    "compute_xi_limit",
    "xi_limit_grid_scan",
    "normalized_passivity_radius",
    "phi_grid_minimum",
    "riccati_residual",
]

PASSIVE = "passive"
STRICTLY_PASSIVE = "strictly-passive"


@dataclass(frozen=True)
class Certificate:
    """A symmetric matrix witnessing (strict) passivity through the KYP LMI."""

    X: np.ndarray
    kind: str
    w_margin: float  # smallest eigenvalue of W(X, M)
    x_margin: float  # smallest eigenvalue of X

    ok = True

    @property
    def margin(self):
        return min(self.w_margin, self.x_margin)


@dataclass(frozen=True)
class CertificateViolation:
    """Report produced when a candidate matrix fails the KYP conditions."""

    kind: str
    w_margin: float
    x_margin: float
    message: str

    ok = False

    @property
    def magnitude(self):
        return max(0.0, -min(self.w_margin, self.x_margin))


@dataclass(frozen=True)
class AREResult:
    """A stabilizing/anti-stabilizing Riccati solution with its feedback."""

    X: np.ndarray
    F: np.ndarray
    residual: float
    closed_loop_spectrum: np.ndarray


@dataclass(frozen=True)
class PassivityDiagnostics:
    """Outcome of the strict-passivity test with the failing condition, if any."""

    strictly_passive: bool
    stable: bool
    feedthrough_definite: bool
    no_imaginary_zeros: bool
    max_pole_real: float
    min_feedthrough_eig: float
    min_abs_real_zero: float
    reason: str = ""

    def __bool__(self):
        return self.strictly_passive


def kyp_matrix(model, x):
    """The KYP block matrix ``[[-A^T X - X A, C^T - X B], [C - B^T X, D^T + D]]``.

    Exactly symmetric for symmetric ``x`` (the off-diagonal blocks are built
    once and mirrored).
    """
    x = as_matrix(x, "X")
    n, m = model.n, model.m
    if x.shape != (n, n):
        raise ValueError(f"X must be {n}x{n}, got {x.shape}")
    xa = x @ model.A
    topleft = -(xa + xa.T)
    topleft = (topleft + topleft.T) / 2.0
    offdiag = model.C.T - x @ model.B
    bottom = model.D.T + model.D
    bottom = (bottom + bottom.T) / 2.0
    w = np.block([[topleft, offdiag], [offdiag.T, bottom]])
    assert np.array_equal(w, w.T)
    return w


def verify_certificate(model, x, kind=PASSIVE, psd_tol=1e-10):
    """Check whether ``x`` certifies (strict) passivity of ``model``.

    ``kind`` is ``"passive"`` (W(X, M) >= 0, X > 0) or
    ``"strictly-passive"`` (W(X, M) > 0, X > 0).  The semidefiniteness
    boundary is ``-psd_tol * scale``; strict definiteness requires the
    margin to clear ``+psd_tol * scale``.  Violations are reported, not
    raised.
    """
    if kind not in (PASSIVE, STRICTLY_PASSIVE):
        raise ValueError(f"unknown certificate kind {kind!r}")
    x = as_matrix(x, "X")
    x = (x + x.T) / 2.0
    w = kyp_matrix(model, x)
    w_min = float(np.linalg.eigvalsh(w).min()) if w.size else 0.0
    x_min = float(np.linalg.eigvalsh(x).min()) if x.size else float("inf")
    w_band = psd_tol * max(1.0, np.linalg.norm(w, 2))
    x_band = psd_tol * max(1.0, np.linalg.norm(x, 2))

    if x_min <= x_band:
        return CertificateViolation(kind, w_min, x_min, "X is not positive definite")
    if kind == STRICTLY_PASSIVE:
        if w_min <= w_band:
            return CertificateViolation(
                kind, w_min, x_min, "W(X, M) is not positive definite"
            )
    elif w_min < -w_band:
        return CertificateViolation(
            kind, w_min, x_min, "W(X, M) is not positive semidefinite"
        )
    return Certificate(X=x, kind=kind, w_margin=w_min, x_margin=x_min)


def _feedthrough_gram(model, pd_tol=1e-12):
    k = model.D.T + model.D
    k = (k + k.T) / 2.0
    k_min = float(np.linalg.eigvalsh(k).min())
    band = pd_tol * (1.0 + np.linalg.norm(model.D, 2))
    return k, k_min, band


def hamiltonian_matrix(model, pd_tol=1e-12):
    """Hamiltonian matrix whose eigenvalues are the spectral zeros of ``Z``.

    ``H = [[A - B K^{-1} C, -B K^{-1} B^T], [C^T K^{-1} C, -(A - B K^{-1} C)^T]]``
    with ``K = D^T + D``, which must be positive definite.
    """
    k, k_min, band = _feedthrough_gram(model, pd_tol)
    if k_min <= band:
        raise NumericalError(
            f"D^T + D is not positive definite (min eig {k_min:.3e}); "
            "the Hamiltonian matrix does not exist"
        )
    kinv_c = np.linalg.solve(k, model.C)
    kinv_bt = np.linalg.solve(k, model.B.T)
    a_eff = model.A - model.B @ kinv_c
    return np.block(
        [
            [a_eff, -model.B @ kinv_bt],
            [model.C.T @ kinv_c, -a_eff.T],
        ]
    )


def is_strictly_passive(model, tol_stab=1e-9, tol_pd=1e-12, tol_imag=1e-9):
    """Strict passivity test: stability, definite feedthrough, and no
    spectral zero on the imaginary axis.

    For asymptotically stable ``A`` with ``D^T + D > 0``, the absence of
    Hamiltonian eigenvalues with ``|Re| <= tol_imag * ||A||`` certifies
    ``Phi(i w) > 0`` for every frequency.  Returns diagnostics that
    evaluate truthy exactly when all three conditions hold.
    """
    a_scale = max(1.0, np.linalg.norm(model.A, 2)) if model.n else 1.0
    max_re = float(model.poles.real.max()) if model.n else -np.inf
    stable = max_re < -tol_stab * a_scale

    _, k_min, band = _feedthrough_gram(model, tol_pd)
    feed_ok = k_min > band

    min_abs_re = np.inf
    zeros_ok = False
    if feed_ok:
        if model.n:
            ham_evals = np.linalg.eigvals(hamiltonian_matrix(model, pd_tol=tol_pd))
            min_abs_re = float(np.abs(ham_evals.real).min())
        zeros_ok = min_abs_re > tol_imag * a_scale

    reason = ""
    if not stable:
        reason = f"A is not asymptotically stable (max Re eig = {max_re:.3e})"
    elif not feed_ok:
        reason = f"D^T + D is not positive definite (min eig = {k_min:.3e})"
    elif not zeros_ok:
        reason = f"spectral zero within {min_abs_re:.3e} of the imaginary axis"
    return PassivityDiagnostics(
        strictly_passive=stable and feed_ok and zeros_ok,
        stable=stable,
        feedthrough_definite=feed_ok,
        no_imaginary_zeros=zeros_ok,
        max_pole_real=max_re,
        min_feedthrough_eig=k_min,
        min_abs_real_zero=min_abs_re,
        reason=reason,
    )


def riccati_residual(model, x):
    """Norm of ``-XA - A^T X - (C^T - XB)(D^T + D)^{-1}(C - B^T X)`` at ``x``."""
    k = model.D.T + model.D
    g = model.C - model.B.T @ x
    ricc = -x @ model.A - model.A.T @ x - g.T @ np.linalg.solve(k, g)
    return float(np.linalg.norm(ricc, 2))


def _are_from_subspace(model, basis):
    """Riccati solution from an n-dimensional invariant-subspace basis
    ``[Y1; Y2]`` of the Hamiltonian matrix, via ``X = -Y2 Y1^{-1}``."""
    n = model.n
    y1, y2 = basis[:n, :], basis[n:, :]
    cond = np.linalg.cond(y1)
    if not np.isfinite(cond) or cond > 1e12:
        raise NumericalError(
            "invariant subspace does not parameterize a Riccati solution "
            f"(top block condition {cond:.3e})"
        )
    x = -np.linalg.solve(y1.T, y2.T).T
    x = (x + x.T) / 2.0
    k = model.D.T + model.D
    f = np.linalg.solve(k, model.C - model.B.T @ x)
    closed = np.linalg.eigvals(model.A - model.B @ f)
    closed = closed[np.lexsort((closed.imag, closed.real))]
    return AREResult(
        X=x, F=f, residual=riccati_residual(model, x), closed_loop_spectrum=closed
    )


def solve_are_extremal(model, tol_imag=1e-9):
    """The extremal Riccati solutions ``(X_minus, X_plus)``.

    ``X_minus`` comes from the stable n-dimensional invariant subspace of
    the Hamiltonian matrix (stabilizing feedback), ``X_plus`` from the
    anti-stable one.  Any other certificate solving the Riccati equation
    lies between them in the semidefinite order.
    """
    h = hamiltonian_matrix(model)
    n = model.n
    a_scale = max(1.0, np.linalg.norm(model.A, 2))
    evals = np.linalg.eigvals(h)
    if np.abs(evals.real).min(initial=np.inf) <= tol_imag * a_scale:
        raise NumericalError(
            "Hamiltonian matrix has imaginary-axis eigenvalues: no dichotomy, "
            "extremal Riccati solutions are not defined"
        )
    results = []
    for sort in ("lhp", "rhp"):
        _, z, sdim = sla.schur(h, output="real", sort=sort)
        if sdim != n:
            raise NumericalError(
                f"expected an invariant subspace of dimension {n}, got {sdim}"
            )
        results.append(_are_from_subspace(model, z[:, :n]))
    return results[0], results[1]


def compute_xi_limit(model, tol=1e-8, tol_stab=1e-9, tol_pd=1e-12, tol_imag=1e-9):
    """Largest shift ``Xi`` keeping the shifted transfer function strictly passive.

    Bisection on ``xi`` over ``[0, lambda_min(D^T + D))`` with the strict
    passivity test of the shifted model as predicate, to absolute
    tolerance ``tol``.  The model itself must be strictly passive.
    Monotonicity of the predicate on the bracket is assumed; cross-check
    with :func:`xi_limit_grid_scan` when in doubt.
    """
    def predicate(xi):
        return bool(
            is_strictly_passive(
                shift_model(model, xi), tol_stab=tol_stab, tol_pd=tol_pd, tol_imag=tol_imag
            )
        )

    if not predicate(0.0):
        diag = is_strictly_passive(model, tol_stab=tol_stab, tol_pd=tol_pd, tol_imag=tol_imag)
        raise NumericalError(f"model is not strictly passive: {diag.reason}")
    _, k_min, _ = _feedthrough_gram(model)
    lo, hi = 0.0, k_min  # predicate is False at hi: D^T + D - xi I is singular there
    while hi - lo > tol:
        mid = (lo + hi) / 2.0
        if predicate(mid):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def xi_limit_grid_scan(model, points=200, **kwargs):
    """Grid-scan estimate of the shift limit (cross-check for the bisection).

    Scans ``points`` equidistant shifts on ``(0, lambda_min(D^T + D))`` and
    returns the midpoint between the last strictly passive shift and the
    first failing one.
    """
    _, k_min, _ = _feedthrough_gram(model)
    grid = np.linspace(0.0, k_min, points + 1)[1:]
    last_good = 0.0
    for xi in grid:
        if is_strictly_passive(shift_model(model, xi), **kwargs):
            last_good = xi
        else:
            return (last_good + xi) / 2.0
    return (last_good + k_min) / 2.0


def normalized_passivity_radius(ph, tol=1e-10):
    """Passivity radius of a normalized port-Hamiltonian model.

    For ``Q = I`` this is the smallest eigenvalue of the dissipation block
    ``[[R, P], [P^T, S]]``; larger perturbations of the realization are
    needed to destroy passivity.
    """
    if not ph.is_normalized(tol):
        raise ValueError("model is not normalized (Q differs from the identity)")
    return float(np.linalg.eigvalsh(ph.dissipation_block).min())


def phi_grid_minimum(model, omegas=None):
    """Frequency-sweep diagnostic: ``min_w lambda_min(Phi(i w))`` on a grid.

    A coarse cross-check of the Hamiltonian-based strict positive-realness
    test.  Returns ``(min_value, sample_at_minimum)``.
    """
    if omegas is None:
        omegas = np.concatenate(([0.0], np.logspace(-4, 4, 81)))
    best = np.inf
    best_sample = None
    for w in omegas:
        phi = evaluate_phi(model, w)
        lam = float(np.linalg.eigvalsh(phi).min())
        if lam < best:
            best = lam
            best_sample = FrequencySample(1j * float(w), phi)
    return best, best_sample
