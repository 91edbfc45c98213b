"""Frequency-response sampling and H-infinity norms.

Sigma plots (per-frequency singular values of the transfer function) and
the H-infinity norm via level-set bisection: a candidate level ``gamma``
exceeds the norm exactly when the associated Hamiltonian matrix has no
imaginary-axis eigenvalue, so a grid-seeded bisection converges to the
peak gain without grid-miss risk.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, PoleError
from .fileio import format_sig
from .model import StateSpaceModel, evaluate_transfer

__all__ = ["SigmaPlot", "sigma_sample", "hinf_norm", "relative_error", "error_system"]


@dataclass(frozen=True)
class SigmaPlot:
    """Descending singular values of ``Z(i w)`` on an increasing grid."""

    frequencies: np.ndarray
    values: np.ndarray
    flagged: tuple = ()

    def to_csv(self):
        """Serialize as ``omega,sigma_1,...,sigma_m`` rows, 12 significant digits."""
        m = self.values.shape[1]
        lines = ["omega," + ",".join(f"sigma_{j + 1}" for j in range(m))]
        for w, row in zip(self.frequencies, self.values):
            lines.append(",".join(format_sig(x) for x in (w, *row)))
        return "\n".join(lines) + "\n"


def sigma_sample(model, omega_min, omega_max, points):
    """Singular values of the transfer function on a log-spaced grid.

    Frequencies hitting a pole of ``Z`` are flagged (values set to NaN),
    not fatal.
    """
    if omega_min <= 0 or omega_max <= omega_min:
        raise ValueError("need 0 < omega_min < omega_max")
    if points < 2:
        raise ValueError("need at least two sample points")
    omegas = np.logspace(np.log10(omega_min), np.log10(omega_max), int(points))
    values = np.empty((len(omegas), model.m))
    flagged = []
    for i, w in enumerate(omegas):
        try:
            z = evaluate_transfer(model, 1j * w)
            values[i] = np.linalg.svd(z, compute_uv=False)
        except PoleError:
            values[i] = np.nan
            flagged.append(i)
    return SigmaPlot(frequencies=omegas, values=values, flagged=tuple(flagged))


def _transfer_grid(model, omegas):
    """Transfer-function values on a frequency grid, ``(len(omegas), m, m)``.

    Fast path diagonalizes ``A`` once; falls back to per-point solves when
    the eigenvector basis is ill conditioned.  Only used for seeding --
    certified results never depend on its accuracy.
    """
    n, m = model.n, model.m
    omegas = np.asarray(omegas, dtype=float)
    if n == 0:
        return np.broadcast_to(model.D.astype(complex), (len(omegas), m, m)).copy()
    lam, vec = np.linalg.eig(model.A)
    cond = np.linalg.cond(vec)
    if np.isfinite(cond) and cond < 1e8:
        cv = model.C @ vec
        vb = np.linalg.solve(vec, model.B.astype(complex))
        denom = 1j * omegas[:, None] - lam[None, :]
        out = np.einsum("ij,kj,jl->kil", cv, 1.0 / denom, vb)
        return out + model.D
    out = np.empty((len(omegas), m, m), dtype=complex)
    eye = np.eye(n)
    for i, w in enumerate(omegas):
        out[i] = model.C @ np.linalg.solve(1j * w * eye - model.A, model.B) + model.D
    return out


def _sigma_max_grid(model, omegas):
    zs = _transfer_grid(model, omegas)
    return np.linalg.svd(zs, compute_uv=False)[:, 0]


def _level_hamiltonian(model, gamma):
    """Level-set matrix whose imaginary-axis eigenvalues mark frequencies
    where some singular value of ``Z(i w)`` equals ``gamma``."""
    d = model.D
    r = gamma**2 * np.eye(model.m) - d.T @ d
    rinv_dt_c = np.linalg.solve(r, d.T @ model.C)
    rinv_bt = np.linalg.solve(r, model.B.T)
    a_eff = model.A + model.B @ rinv_dt_c
    return np.block(
        [
            [a_eff, model.B @ rinv_bt],
            [-model.C.T @ (model.C + d @ rinv_dt_c), -a_eff.T],
        ]
    )


def _crosses_level(model, gamma, sigma_d, imag_tol):
    if gamma <= sigma_d * (1.0 + 1e-12):
        return True
    evals = np.linalg.eigvals(_level_hamiltonian(model, gamma))
    return bool(np.any(np.abs(evals.real) <= imag_tol * np.maximum(1.0, np.abs(evals))))


def hinf_norm(
    model,
    rel_tol=1e-6,
    omega_min=1e-4,
    omega_max=1e4,
    grid_points=400,
    seed_lower=None,
    imag_tol=1e-9,
    max_iter=200,
):
    """H-infinity norm of a stable model by level-set bisection.

    A log grid (including ``w = 0``) seeds a certified lower level; the
    upper level is grown until the level-set test reports no
    imaginary-axis eigenvalue, then bisected to relative width
    ``rel_tol``.  ``seed_lower`` may supply an externally computed achieved
    gain in place of the grid sweep.
    """
    if model.n and model.poles.real.max() >= 0:
        raise NumericalError("H-infinity norm requires an asymptotically stable model")
    sigma_d = float(np.linalg.svd(model.D, compute_uv=False)[0]) if model.m else 0.0
    if model.n == 0 or not (np.any(model.B) and np.any(model.C)):
        return sigma_d
    if seed_lower is None:
        omegas = np.concatenate(([0.0], np.logspace(np.log10(omega_min), np.log10(omega_max), grid_points)))
        seed_lower = float(_sigma_max_grid(model, omegas).max())
    lo = max(float(seed_lower), sigma_d)
    scale = max(
        sigma_d,
        np.linalg.norm(model.B, 2) * np.linalg.norm(model.C, 2),
        1.0,
    )
    if lo <= 1e-14 * scale:
        return lo  # transfer function is numerically zero
    hi = lo * (1.0 + max(1e-3, 10.0 * rel_tol))
    for _ in range(max_iter):
        if not _crosses_level(model, hi, sigma_d, imag_tol):
            break
        lo = hi
        hi *= 2.0
    else:
        raise NumericalError("level search failed to bracket the H-infinity norm")
    it = 0
    while hi - lo > rel_tol * lo and it < max_iter:
        mid = (lo + hi) / 2.0
        if _crosses_level(model, mid, sigma_d, imag_tol):
            lo = mid
        else:
            hi = mid
        it += 1
    return (lo + hi) / 2.0


def error_system(model, reduced):
    """Parallel-difference realization of ``Z - Z_hat`` (states stacked)."""
    if model.m != reduced.m:
        raise ValueError("port dimensions differ")
    n1, n2 = model.n, reduced.n
    a = np.zeros((n1 + n2, n1 + n2))
    a[:n1, :n1] = model.A
    a[n1:, n1:] = reduced.A
    b = np.vstack([model.B, reduced.B])
    c = np.hstack([model.C, -reduced.C])
    return StateSpaceModel(A=a, B=b, C=c, D=model.D - reduced.D)


def relative_error(model, reduced, rel_tol=1e-6, seed_lower=None, reference=None, **kwargs):
    """Relative H-infinity error ``||Z - Z_hat|| / ||Z||``.

    ``reference`` may carry a precomputed ``||Z||`` to avoid recomputing it
    across many reductions of the same model.
    """
    err = error_system(model, reduced)
    denom = reference if reference is not None else hinf_norm(model, rel_tol=rel_tol, **kwargs)
    if denom <= 0:
        raise NumericalError("reference H-infinity norm is zero")
    num = hinf_norm(err, rel_tol=rel_tol, seed_lower=seed_lower, **kwargs)
    return num / denom
