"""Projection to reduced-order models with passivity certificates.

The plain spectral-zero projection, its shift-parameterized variant (which
projects the original dynamics with a basis computed from the shifted
pencil and inherits a strict certificate with margin ``xi``), tangential
interpolation verification, projection along an arbitrary trial basis with
a given strict certificate, and diagnostics quantifying how much basis
inaccuracy the certificate can absorb.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import CertificateError, NumericalError, RankDeficiencyError, ReductionRejected
from .linalg import as_matrix, eig, pivoted_cholesky
from .model import StateSpaceModel, evaluate_transfer, normalize_with_certificate, shift_model
from .passivity import (
    PASSIVE,
    STRICTLY_PASSIVE,
    Certificate,
    kyp_matrix,
    normalized_passivity_radius,
    verify_certificate,
)
from .spectral import GreedySelection, assemble_deflating_basis, gram_matrix, spectral_zeros

__all__ = [
    "ReducedModel",
    "InterpolationReport",
    "RobustnessReport",
    "project",
    "project_shifted",
    "spectral_zero_reduction",
    "verify_interpolation",
    "project_with_certificate",
    "robustness_diagnostics",
]

COND_LIMIT = 1e12


@dataclass(frozen=True)
class ReducedModel:
    """A reduced-order model with its passivity certificate and provenance.

    ``basis`` is the deflating basis used for the projection (``None`` for
    the certificate-only projection), ``normalized`` the port-Hamiltonian
    realization obtained from the certificate factorization, and
    ``radius_lower_bound`` a guaranteed lower bound on the passivity radius
    of that normalized realization.
    """

    model: StateSpaceModel
    certificate: Certificate
    xi: float
    basis: object
    normalized: object
    T: np.ndarray
    radius_lower_bound: float
    lmi_margin: float
    gram_asymmetry: float
    projection_condition: float

    @property
    def order(self):
        return self.model.n


@dataclass(frozen=True)
class InterpolationReport:
    """Relative tangential-interpolation residuals of a reduced model."""

    max_residual: float
    right_residuals: tuple
    left_residuals: tuple
    feedthrough_residual: float
    interpolation_points: tuple
    repeated_zeros: bool


@dataclass(frozen=True)
class RobustnessReport:
    """How a perturbed deflating basis affects the projected certificate.

    ``residual_norms`` are the three block residuals of the pencil
    relation for the perturbed basis; ``symmetrized_margin`` is the
    smallest eigenvalue of the KYP matrix of the projected model with the
    symmetrized Gram certificate.  ``bound_check`` verifies that margin
    against ``xi * lambda_min(diag(X_s, I)) - slack`` where ``slack`` is
    the norm of the residual-induced perturbation block.
    """

    residual_norms: tuple
    asymmetry: float
    symmetrized_margin: float
    shifted_margin: float
    slack: float
    bound_check: bool
    model: object
    certificate_matrix: object
    delta11: object
    delta21: object

    @property
    def passivity_preserved(self):
        return bool(np.isfinite(self.symmetrized_margin) and self.symmetrized_margin > 0.0)


def _projected_quadruple(model, u, v):
    """Petrov-Galerkin quadruple ``{(U^T V)^{-1} U^T A V, ..., C V, D}``.

    The inverse is applied as a linear solve; the condition number of
    ``U^T V`` is returned and must be checked by the caller.
    """
    uv = u.T @ v
    cond = float(np.linalg.cond(uv))
    rhs = np.hstack([u.T @ model.A @ v, u.T @ model.B])
    sol = np.linalg.solve(uv, rhs)
    k = v.shape[1]
    a_hat = sol[:, :k]
    b_hat = sol[:, k:]
    return StateSpaceModel(A=a_hat, B=b_hat, C=model.C @ v, D=model.D), cond


def _certify(reduced_ss, x_hat, xi, psd_tol):
    """LMI margin of the reduced model against the ``xi``-scaled diagonal."""
    w = kyp_matrix(reduced_ss, x_hat)
    offset = xi * np.block(
        [
            [x_hat, np.zeros((x_hat.shape[0], reduced_ss.m))],
            [np.zeros((reduced_ss.m, x_hat.shape[0])), np.eye(reduced_ss.m)],
        ]
    )
    margin = float(np.linalg.eigvalsh(w - offset).min())
    scale = max(1.0, np.linalg.norm(w, 2))
    if margin < -psd_tol * scale:
        raise ReductionRejected(
            f"reduced certificate violates the shifted LMI by {-margin:.3e} "
            f"(tolerance {psd_tol * scale:.3e})"
        )
    return margin


def _finalize(model, basis, xi, psd_tol):
    x_raw, asymmetry = gram_matrix(basis)
    try:
        pivoted_cholesky(x_raw)
    except RankDeficiencyError as exc:
        raise ReductionRejected(
            "Gram matrix of the selected basis is not positive definite "
            f"(pivot {exc.rank})",
            pivot_index=exc.rank,
        ) from exc
    reduced_ss, cond = _projected_quadruple(model, basis.U, basis.V)
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise ReductionRejected(
            f"projection is numerically singular (cond(U^T V) = {cond:.3e}); "
            "selection touches nearly uncontrollable/unobservable modes"
        )
    lmi_margin = _certify(reduced_ss, x_raw, xi, psd_tol)
    max_re = float(np.linalg.eigvals(reduced_ss.A).real.max())
    if max_re >= 0.0:
        raise ReductionRejected(
            f"reduced model is not asymptotically stable (max Re eig = {max_re:.3e})"
        )
    kind = STRICTLY_PASSIVE if xi > 0 else PASSIVE
    cert = verify_certificate(reduced_ss, x_raw, kind)
    if not cert.ok:
        cert = verify_certificate(reduced_ss, x_raw, PASSIVE)
    if not cert.ok:
        raise ReductionRejected(f"reduced certificate check failed: {cert.message}")
    normalized = None
    t = None
    try:
        normalized, t = normalize_with_certificate(reduced_ss, x_raw)
    except CertificateError as exc:
        warnings.warn(f"no normalized port-Hamiltonian form: {exc}", stacklevel=3)
    return ReducedModel(
        model=reduced_ss,
        certificate=cert,
        xi=float(xi),
        basis=basis,
        normalized=normalized,
        T=t,
        radius_lower_bound=float(xi) / 2.0,
        lmi_margin=lmi_margin,
        gram_asymmetry=asymmetry,
        projection_condition=cond,
    )


def project(model, basis, psd_tol=1e-8):
    """Project ``model`` onto a deflating basis of its own pencil.

    The Gram matrix ``-U^T V`` certifies passivity of the reduced model;
    the reduced KYP matrix is positive semidefinite of rank ``m`` with the
    columns of ``[I; W]`` in its kernel, and the feedthrough is inherited
    unchanged.
    """
    return _finalize(model, basis, 0.0, psd_tol)


def project_shifted(model, xi, selection, normalization="unit", psd_tol=1e-8):
    """Reduce ``model`` by interpolation at spectral zeros of its shifted
    transfer function.

    The deflating basis is assembled on ``shift_model(model, xi)`` but the
    original dynamics are projected, so the reduced transfer function
    interpolates the original one at the shifted-back points.  For
    ``0 < xi`` below the strict-passivity shift limit the Gram certificate
    is guaranteed positive definite and satisfies
    ``W(X, M_hat) >= xi * diag(X, I)``; larger shifts are attempted and
    rejected when the certificate loses definiteness.

    ``selection`` is either a :class:`~passivemor.spectral.GreedySelection`
    or an explicit list of indices into the shifted model's zero set.
    """
    xi = float(xi)
    if xi < 0:
        raise ValueError("shift must be non-negative")
    shifted = shift_model(model, xi) if xi else model
    if isinstance(selection, GreedySelection):
        if abs(selection.xi - xi) > 1e-12 * max(1.0, abs(xi)):
            raise ValueError(
                f"selection was computed for shift {selection.xi}, not {xi}"
            )
        zeros = selection.zeros
        indices = selection.indices
        normalization = selection.normalization
    else:
        zeros = None
        indices = list(selection)
    try:
        basis = assemble_deflating_basis(
            shifted, indices, zeros=zeros, normalization=normalization
        )
    except NumericalError as exc:
        raise ReductionRejected(f"basis assembly failed: {exc}") from exc
    return _finalize(model, basis, xi, psd_tol)


def spectral_zero_reduction(model, order, xi=0.0, normalization="unit", psd_tol=1e-8):
    """Greedy zero selection followed by the shifted projection."""
    from .spectral import greedy_select

    selection = greedy_select(model, order, xi=xi, normalization=normalization)
    return project_shifted(model, xi, selection, psd_tol=psd_tol)


def verify_interpolation(model, reduced, repeat_tol=1e-8):
    """Largest relative tangential-interpolation residual of ``reduced``.

    For every eigenpair ``(sigma, r)`` of the basis matrix ``R`` the right
    condition at ``sigma - xi/2`` along direction ``W r`` and the left
    condition at ``-sigma - xi/2`` along ``r^T W^T`` are evaluated against
    the original transfer function, along with the exact feedthrough match.
    Repeated interpolation zeros are flagged (derivative conditions are not
    verified for them).
    """
    basis = reduced.basis
    if basis is None:
        raise ValueError("reduced model carries no interpolation basis")
    xi = reduced.xi
    pairs = eig(basis.R)
    values = np.array([p.value for p in pairs])
    repeated = False
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if abs(values[i] - values[j]) <= repeat_tol * max(1.0, abs(values[i])):
                repeated = True
    if repeated:
        warnings.warn(
            "repeated interpolation zeros: matching of derivative conditions "
            "is not verified",
            stacklevel=2,
        )
    rights = []
    lefts = []
    points = []
    tiny = np.finfo(float).tiny
    for pair in pairs:
        sigma = pair.value
        direction = basis.W @ pair.vector
        p_right = sigma - xi / 2.0
        p_left = -sigma - xi / 2.0
        z_r = evaluate_transfer(model, p_right)
        zh_r = evaluate_transfer(reduced.model, p_right)
        ref_r = np.linalg.norm(z_r @ direction)
        rights.append(float(np.linalg.norm((z_r - zh_r) @ direction) / max(ref_r, tiny)))
        z_l = evaluate_transfer(model, p_left)
        zh_l = evaluate_transfer(reduced.model, p_left)
        row = direction[None, :]  # r^T W^T = (W r)^T, transpose without conjugation
        ref_l = np.linalg.norm(row @ z_l)
        lefts.append(float(np.linalg.norm(row @ (z_l - zh_l)) / max(ref_l, tiny)))
        points.append((complex(p_right), complex(p_left)))
    d_res = float(np.linalg.norm(model.D - reduced.model.D, 2))
    max_residual = max([*rights, *lefts, d_res], default=d_res)
    return InterpolationReport(
        max_residual=max_residual,
        right_residuals=tuple(rights),
        left_residuals=tuple(lefts),
        feedthrough_residual=d_res,
        interpolation_points=tuple(points),
        repeated_zeros=repeated,
    )


def project_with_certificate(model, x, v, psd_tol=1e-10):
    """Strictly passive reduction along an arbitrary full-rank trial basis.

    Given a strict certificate ``x`` of ``model`` and any ``n x k`` matrix
    ``v`` of full column rank, the left basis ``u = -x v (v^T x v)^{-1}``
    gives ``u^T v = -I`` and the projected model inherits the strict
    certificate ``v^T x v``.  This holds on an open neighborhood of ``v``,
    which is what makes the spectral-zero bases forgiving of perturbation.
    """
    if isinstance(x, Certificate):
        x = x.X
    x = as_matrix(x, "X")
    v = as_matrix(v, "V")
    check = verify_certificate(model, x, STRICTLY_PASSIVE, psd_tol=psd_tol)
    if not check.ok:
        raise CertificateError(
            f"X is not a strict certificate: {check.message}",
            violation=check.magnitude,
        )
    sv = np.linalg.svd(v, compute_uv=False)
    if sv.size == 0 or sv[-1] <= 1e-12 * sv[0]:
        raise ValueError("trial basis V is rank deficient")
    x_hat = v.T @ x @ v
    x_hat = (x_hat + x_hat.T) / 2.0
    u = -np.linalg.solve(x_hat.T, (x @ v).T).T
    uv = u.T @ v
    assert np.linalg.norm(uv + np.eye(uv.shape[0]), 2) <= 1e-8 * max(1.0, np.linalg.norm(uv, 2))
    reduced_ss, cond = _projected_quadruple(model, u, v)
    cert = verify_certificate(reduced_ss, x_hat, STRICTLY_PASSIVE, psd_tol=psd_tol)
    if not cert.ok:
        raise NumericalError(
            f"projected certificate lost strictness numerically: {cert.message}"
        )
    normalized, t = normalize_with_certificate(reduced_ss, x_hat)
    return ReducedModel(
        model=reduced_ss,
        certificate=cert,
        xi=0.0,
        basis=None,
        normalized=normalized,
        T=t,
        radius_lower_bound=normalized_passivity_radius(normalized),
        lmi_margin=cert.w_margin,
        gram_asymmetry=0.0,
        projection_condition=cond,
    )


def robustness_diagnostics(model, u, v, w, r, xi=0.0, tol=1e-8):
    """Diagnose a (possibly inexact) deflating basis of the shifted pencil.

    Computes the block residuals of the pencil relation for the computed
    quantities, the asymmetry of the Gram matrix, and the KYP margin of
    the projected model with the symmetrized Gram certificate.  Never
    raises: a degenerate projection yields NaN margins and a failed
    ``bound_check``.
    """
    u = as_matrix(u, "U")
    v = as_matrix(v, "V")
    w = np.asarray(w, dtype=float).reshape(model.m, -1)
    r = as_matrix(r, "R")
    xi = float(xi)
    a_shift = model.A + (xi / 2.0) * np.eye(model.n)
    k_shift = model.D.T + model.D - xi * np.eye(model.m)
    delta_u = a_shift @ v + model.B @ w - v @ r
    delta_v = a_shift.T @ u + model.C.T @ w + u @ r
    delta_w = model.B.T @ u + model.C @ v + k_shift @ w
    norms = tuple(float(np.linalg.norm(d, 2)) for d in (delta_u, delta_v, delta_w))

    x_tilde = -u.T @ v
    asymmetry = float(np.linalg.norm(x_tilde - x_tilde.T, 2))
    x_s = (x_tilde + x_tilde.T) / 2.0
    x_a = (x_tilde - x_tilde.T) / 2.0

    try:
        reduced_ss, cond = _projected_quadruple(model, u, v)
        if not np.isfinite(cond) or cond > COND_LIMIT:
            raise NumericalError(f"cond(U^T V) = {cond:.3e}")
    except (NumericalError, np.linalg.LinAlgError):
        return RobustnessReport(
            residual_norms=norms,
            asymmetry=asymmetry,
            symmetrized_margin=float("nan"),
            shifted_margin=float("nan"),
            slack=float("inf"),
            bound_check=False,
            model=None,
            certificate_matrix=x_s,
            delta11=None,
            delta21=None,
        )

    w_kyp = kyp_matrix(reduced_ss, x_s)
    sym_margin = float(np.linalg.eigvalsh(w_kyp).min())
    diag_block = np.block(
        [
            [x_s, np.zeros((x_s.shape[0], model.m))],
            [np.zeros((model.m, x_s.shape[0])), np.eye(model.m)],
        ]
    )
    shifted_margin = float(np.linalg.eigvalsh(w_kyp - xi * diag_block).min())

    # Residual-induced perturbation of the shifted KYP identity.  The
    # symmetric part of the Gram matrix replaces it exactly up to these
    # blocks, so their norm bounds the loss of margin.
    delta = (x_tilde.T - x_tilde) @ r + u.T @ delta_u + v.T @ delta_v - delta_w.T @ w
    delta11 = delta + x_a @ reduced_ss.A - reduced_ss.A.T @ x_a
    delta11 = (delta11 + delta11.T) / 2.0
    delta21 = delta_w - reduced_ss.B.T @ x_a
    block = np.block(
        [[delta11, delta21.T], [delta21, np.zeros((model.m, model.m))]]
    )
    slack = float(np.linalg.norm(block, 2))
    scale = max(1.0, np.linalg.norm(w_kyp, 2))
    lower = xi * float(np.linalg.eigvalsh(diag_block).min()) - slack - tol * scale
    return RobustnessReport(
        residual_norms=norms,
        asymmetry=asymmetry,
        symmetrized_margin=sym_margin,
        shifted_margin=shifted_margin,
        slack=slack,
        bound_check=bool(sym_margin >= lower),
        model=reduced_ss,
        certificate_matrix=x_s,
        delta11=delta11,
        delta21=delta21,
    )
