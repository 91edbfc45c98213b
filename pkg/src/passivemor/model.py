"""System representations and conversions.

State-space quadruples ``{A, B, C, D}`` with equal input/output dimension,
port-Hamiltonian structured realizations ``{J, R, Q, G, P, N, S}``,
transfer-function evaluation, transfer-function shifting, conversion to a
normalized port-Hamiltonian form via a certificate, and Hautus-style
minimality margins.
"""

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .errors import CertificateError, PoleError
from .linalg import as_matrix

__all__ = [
    "StateSpaceModel",
    "PortHamiltonianModel",
    "FrequencySample",
    "evaluate_transfer",
    "evaluate_phi",
    "shift_model",
    "ph_to_statespace",
    "normalize_with_certificate",
    "minimality_report",
]


@dataclass(frozen=True)
class StateSpaceModel:
    """Real state-space model ``x' = A x + B u``, ``y = C x + D u``.

    The input and output dimensions are both ``m`` (square transfer
    function); the state dimension ``n`` may be zero for a purely static
    model.  Arrays are validated, copied and frozen on construction.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        d = as_matrix(self.D, "D")
        m = d.shape[0]
        if d.shape != (m, m):
            raise ValueError(f"D must be square, got {d.shape}")
        a = as_matrix(self.A, "A") if np.size(self.A) else np.zeros((0, 0))
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError(f"A must be square, got {a.shape}")
        b = np.asarray(self.B, dtype=float).reshape(n, -1) if np.size(self.B) else np.zeros((n, m))
        c = np.asarray(self.C, dtype=float).reshape(-1, n) if np.size(self.C) else np.zeros((m, n))
        if b.shape != (n, m):
            raise ValueError(f"B must be {n}x{m}, got {b.shape}")
        if c.shape != (m, n):
            raise ValueError(f"C must be {m}x{n}, got {c.shape}")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(c))):
            raise ValueError("B or C contains non-finite entries")
        for name, arr in (("A", a), ("B", b.copy()), ("C", c.copy()), ("D", d)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def m(self):
        return self.D.shape[0]

    @cached_property
    def poles(self):
        """Eigenvalues of A (sorted by real part, then imaginary part)."""
        if self.n == 0:
            return np.zeros(0, dtype=complex)
        values = np.linalg.eigvals(self.A)
        return values[np.lexsort((values.imag, values.real))]


@dataclass(frozen=True)
class PortHamiltonianModel:
    """Structured realization ``x' = (J - R) Q x + (G - P) u``,
    ``y = (G + P)^T Q x + (N + S) u``.

    Construction enforces the structure: J and N skew-symmetric, Q
    symmetric positive semidefinite, and ``[[R, P], [P^T, S]]`` symmetric
    positive semidefinite.  ``Q = I`` is the normalized form.
    """

    J: np.ndarray
    R: np.ndarray
    Q: np.ndarray
    G: np.ndarray
    P: np.ndarray
    N: np.ndarray
    S: np.ndarray

    #: relative band for skew/symmetry checks
    skew_tol: float = 1e-12
    #: relative band below zero tolerated in the semidefiniteness checks
    psd_tol: float = 1e-10

    def __post_init__(self):
        j = as_matrix(self.J, "J")
        n = j.shape[0]
        r = as_matrix(self.R, "R")
        q = as_matrix(self.Q, "Q")
        s = as_matrix(self.S, "S")
        m = s.shape[0]
        g = np.asarray(self.G, dtype=float).reshape(n, m)
        p = np.asarray(self.P, dtype=float).reshape(n, m)
        nn = as_matrix(self.N, "N")
        if r.shape != (n, n) or q.shape != (n, n) or nn.shape != (m, m):
            raise ValueError("inconsistent port-Hamiltonian block dimensions")
        scale = max(1.0, *(np.linalg.norm(x, 2) for x in (j, r, q, s, nn) if x.size))
        if np.linalg.norm(j + j.T, 2) > self.skew_tol * scale:
            raise ValueError("J is not skew-symmetric within tolerance")
        if np.linalg.norm(nn + nn.T, 2) > self.skew_tol * scale:
            raise ValueError("N is not skew-symmetric within tolerance")
        if np.linalg.norm(q - q.T, 2) > self.skew_tol * scale:
            raise ValueError("Q is not symmetric within tolerance")
        w = np.block([[r, p], [p.T, s]])
        if np.linalg.norm(w - w.T, 2) > self.skew_tol * scale:
            raise ValueError("[[R, P], [P^T, S]] is not symmetric within tolerance")
        if np.linalg.eigvalsh((w + w.T) / 2.0).min(initial=0.0) < -self.psd_tol * scale:
            raise ValueError("[[R, P], [P^T, S]] is not positive semidefinite")
        if n and np.linalg.eigvalsh((q + q.T) / 2.0).min() < -self.psd_tol * scale:
            raise ValueError("Q is not positive semidefinite")
        for name, arr in (("J", j), ("R", r), ("Q", q), ("G", g.copy()),
                          ("P", p.copy()), ("N", nn), ("S", s)):
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n(self):
        return self.J.shape[0]

    @property
    def m(self):
        return self.S.shape[0]

    @property
    def dissipation_block(self):
        """The symmetric block ``[[R, P], [P^T, S]]``."""
        return np.block([[self.R, self.P], [self.P.T, self.S]])

    def is_normalized(self, tol=1e-10):
        return bool(np.linalg.norm(self.Q - np.eye(self.n), 2) <= tol * max(1.0, np.linalg.norm(self.Q, 2)))


@dataclass(frozen=True)
class FrequencySample:
    """A transfer-function value at one complex frequency."""

    s: complex
    value: np.ndarray

    def __post_init__(self):
        v = np.atleast_2d(np.asarray(self.value, dtype=complex))
        if not np.all(np.isfinite(v)):
            raise ValueError("frequency sample value is not finite")
        v.flags.writeable = False
        object.__setattr__(self, "value", v)


def evaluate_transfer(model, s, pole_tol=1e-12):
    """Evaluate ``Z(s) = C (sI - A)^{-1} B + D`` by a linear solve.

    Raises :class:`PoleError` when ``s`` lies within ``pole_tol * max(1, ||A||)``
    of an eigenvalue of ``A``.
    """
    s = complex(s)
    if model.n == 0:
        return model.D.astype(complex)
    gap = np.abs(model.poles - s).min()
    if gap <= pole_tol * max(1.0, np.linalg.norm(model.A, 2)):
        raise PoleError(f"s = {s} is within {gap:.3e} of a pole")
    x = np.linalg.solve(s * np.eye(model.n) - model.A, model.B)
    return model.C @ x + model.D


def evaluate_phi(model, omega, pole_tol=1e-12, herm_tol=1e-12):
    """Evaluate ``Phi(i w) = Z(i w)^H + Z(i w)`` (twice the Hermitian part).

    The result is Hermitian by construction; an asymmetry beyond
    ``herm_tol`` relative would indicate a broken evaluation and raises.
    """
    z = evaluate_transfer(model, 1j * float(omega), pole_tol=pole_tol)
    phi = z.conj().T + z
    asym = np.linalg.norm(phi - phi.conj().T, 2)
    if asym > herm_tol * max(1.0, np.linalg.norm(phi, 2)):
        raise ArithmeticError("Hermitian part construction lost symmetry")
    return (phi + phi.conj().T) / 2.0


def shift_model(model, xi):
    """Model of the shifted transfer function ``Z(s - xi/2) - (xi/2) I``.

    Additive in ``xi`` and the identity for ``xi = 0``.
    """
    xi = float(xi)
    n, m = model.n, model.m
    return StateSpaceModel(
        A=model.A + (xi / 2.0) * np.eye(n),
        B=model.B,
        C=model.C,
        D=model.D - (xi / 2.0) * np.eye(m),
    )


def ph_to_statespace(ph):
    """Expand a port-Hamiltonian realization to a plain state-space model."""
    a = (ph.J - ph.R) @ ph.Q
    b = ph.G - ph.P
    c = (ph.G + ph.P).T @ ph.Q
    d = ph.N + ph.S
    return StateSpaceModel(A=a, B=b, C=c, D=d)


def normalize_with_certificate(model, x, cert_tol=1e-8, warn_tol=1e-12):
    """Turn a certified passive model into normalized port-Hamiltonian form.

    Given a symmetric positive definite ``x`` certifying passivity of
    ``model``, factor ``x = T^T T`` with upper-triangular Cholesky ``T``
    and split ``[[-A_T, -B_T], [C_T, D_T]]`` (the transformed realization)
    into its symmetric part ``[[R, P], [P^T, S]]`` and skew part
    ``[[-J, -G], [G^T, N]]``.  Returns ``(ph, T)`` with ``ph.Q = I``; the
    transformed model has the same transfer function as ``model``.

    Raises :class:`CertificateError` when ``x`` is not positive definite or
    when the certificate inequality is violated beyond
    ``cert_tol * ||W(x, model)||``.
    """
    from .passivity import kyp_matrix  # local import to avoid a module cycle

    x = as_matrix(x, "X")
    n = model.n
    if x.shape != (n, n):
        raise ValueError(f"certificate must be {n}x{n}, got {x.shape}")
    x = (x + x.T) / 2.0
    w = kyp_matrix(model, x)
    w_scale = max(1.0, np.linalg.norm(w, 2))
    w_min = float(np.linalg.eigvalsh(w).min()) if w.size else 0.0
    if w_min < -cert_tol * w_scale:
        raise CertificateError(
            f"X does not certify passivity: min eig of W(X, M) is {w_min:.3e}",
            violation=-w_min,
        )
    if w_min < -warn_tol * w_scale:
        warnings.warn(
            f"certificate is marginal: min eig of W(X, M) = {w_min:.3e}", stacklevel=2
        )
    try:
        t = sla.cholesky(x, lower=False) if n else np.zeros((0, 0))
    except np.linalg.LinAlgError as exc:
        raise CertificateError("X is not positive definite", violation=None) from exc
    except sla.LinAlgError as exc:
        raise CertificateError("X is not positive definite", violation=None) from exc

    t_inv = sla.solve_triangular(t, np.eye(n)) if n else np.zeros((0, 0))
    a_t = t @ model.A @ t_inv
    b_t = t @ model.B
    c_t = model.C @ t_inv
    d_t = model.D
    smat = np.block([[-a_t, -b_t], [c_t, d_t]])
    sym = (smat + smat.T) / 2.0
    skew = (smat - smat.T) / 2.0
    # sym = [[R, P], [P^T, S]], skew = [[-J, -G], [G^T, N]]
    ph = PortHamiltonianModel(
        J=-skew[:n, :n],
        R=sym[:n, :n],
        Q=np.eye(n),
        G=-skew[:n, n:],
        P=sym[:n, n:],
        N=skew[n:, n:],
        S=sym[n:, n:],
    )
    return ph, t


def minimality_report(model):
    """Hautus-test margins ``(controllability, observability)``.

    For each eigenvalue ``lambda`` of ``A`` the smallest singular value of
    ``[A - lambda I, B]`` (controllability) and ``[A - lambda I; C]``
    (observability) is taken; the minima over the spectrum, normalized by
    ``||[A B]||``, are returned.  A zero margin means the model is not
    minimal; small margins warn of nearly uncontrollable/unobservable modes.
    """
    n = model.n
    if n == 0:
        return float("inf"), float("inf")
    scale = np.linalg.norm(np.hstack([model.A, model.B]), 2)
    scale = max(scale, np.finfo(float).tiny)
    eye = np.eye(n)
    ctrb = min(
        np.linalg.svd(np.hstack([model.A - lam * eye, model.B]), compute_uv=False)[-1]
        for lam in model.poles
    )
    obsv = min(
        np.linalg.svd(np.vstack([model.A - lam * eye, model.C]), compute_uv=False)[-1]
        for lam in model.poles
    )
    return float(ctrb) / scale, float(obsv) / scale
