"""Spectral zeros, deflating bases, and greedy zero selection.

The spectral zeros of a transfer function with definite feedthrough Gram
``D^T + D`` are the eigenvalues of the associated Hamiltonian matrix.  A
self-conjugate subset of right-half-plane zeros, realified, yields a real
deflating basis ``(U, V, W, R)``; the Gram matrix ``-U^T V`` is symmetric
and drives both the projection and the greedy pivoted-Cholesky ordering
used to pick interpolation zeros.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError, ReductionRejected
from .linalg import eig, pivoted_cholesky_partial
from .model import shift_model
from .passivity import hamiltonian_matrix

__all__ = [
    "SpectralZeroSet",
    "DeflatingBasis",
    "SelectionContext",
    "GreedySelection",
    "spectral_zeros",
    "assemble_deflating_basis",
    "gram_matrix",
    "deflation_residuals",
    "build_selection_context",
    "select_order",
    "greedy_select",
]

RIGHT = "right"
LEFT = "left"
IMAGINARY = "imaginary"


@dataclass(frozen=True)
class SpectralZeroSet:
    """Eigenpairs of the Hamiltonian matrix, tagged by half plane.

    ``vectors`` is ``2n x k`` with columns ``[v; u]`` satisfying
    ``H [v; u] = lambda [v; u]``; ``v`` is the state-direction block.
    Zeros are sorted by real part ascending (ties by imaginary part) and
    closed under conjugation for real models.
    """

    zeros: np.ndarray
    vectors: np.ndarray
    half_plane: tuple
    n: int

    def right_indices(self):
        return [j for j, tag in enumerate(self.half_plane) if tag == RIGHT]

    def conjugate_partner(self, j, tol=1e-8):
        """Index of the zero conjugate to zero ``j``."""
        target = np.conj(self.zeros[j])
        dist = np.abs(self.zeros - target)
        k = int(np.argmin(dist))
        scale = max(1.0, abs(self.zeros[j]))
        if dist[k] > tol * scale:
            raise NumericalError(f"no conjugate partner found for zero {self.zeros[j]}")
        return k


@dataclass(frozen=True)
class DeflatingBasis:
    """Real basis ``(U, V, W, R)`` of a deflating subspace of the system pencil.

    ``R`` is block upper triangular (1x1 blocks for real zeros, 2x2
    rotation-like blocks for conjugate pairs) with spectrum ``zero_list``
    in the open right half plane.
    """

    U: np.ndarray
    V: np.ndarray
    W: np.ndarray
    R: np.ndarray
    zero_list: np.ndarray

    @property
    def order(self):
        return self.U.shape[1]


def spectral_zeros(model, band_tol=1e-9, eig_tol=1e-8):
    """Spectral zeros of ``model`` as eigenpairs of its Hamiltonian matrix.

    Zeros with ``|Re| <= band_tol * max(1, ||A||)`` are tagged imaginary
    and are never admissible for interpolation.
    """
    h = hamiltonian_matrix(model)
    pairs = eig(h, tol=eig_tol)
    n = model.n
    values = np.array([p.value for p in pairs])
    vectors = np.column_stack([p.vector for p in pairs]) if pairs else np.zeros((2 * n, 0), dtype=complex)
    band = band_tol * max(1.0, np.linalg.norm(model.A, 2) if n else 1.0)
    tags = tuple(
        RIGHT if z.real > band else (LEFT if z.real < -band else IMAGINARY) for z in values
    )
    return SpectralZeroSet(zeros=values, vectors=vectors, half_plane=tags, n=n)


def _phase_align(column, n):
    """Rotate a complex column so the dominant state-block entry is real
    positive (falls back to the full column when the state block vanishes)."""
    top = column[:n] if n else column
    idx = int(np.argmax(np.abs(top)))
    pivot = top[idx]
    if abs(pivot) < 1e-14 * np.linalg.norm(column):
        idx = int(np.argmax(np.abs(column)))
        pivot = column[idx]
    return column * (abs(pivot) / pivot)


def _group_selection(zeroset, selection):
    """Partition a self-conjugate selection into real zeros and conjugate
    pairs, preserving the selection order."""
    if len(set(selection)) != len(selection):
        raise ValueError("selection contains duplicate zero indices")
    for j in selection:
        if zeroset.half_plane[j] != RIGHT:
            raise ValueError(
                f"zero {zeroset.zeros[j]} is not in the open right half plane"
            )
    groups = []
    seen = set()
    chosen = set(selection)
    for j in selection:
        if j in seen:
            continue
        z = zeroset.zeros[j]
        if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
            groups.append((j,))
            seen.add(j)
            continue
        k = zeroset.conjugate_partner(j)
        if k not in chosen:
            raise ValueError(
                f"selection is not self-conjugate: partner of {z} is missing"
            )
        j_plus, j_minus = (j, k) if z.imag > 0 else (k, j)
        groups.append((j_plus, j_minus))
        seen.update((j, k))
    return groups


def _realify_group(zeroset, group, normalization):
    """Real columns and the R block for one zero group."""
    n = zeroset.n
    if len(group) == 1:
        j = group[0]
        col = _phase_align(zeroset.vectors[:, j], n)
        imag_left = np.linalg.norm(col.imag)
        if imag_left > 1e-8 * np.linalg.norm(col):
            raise NumericalError(
                f"eigenvector of real zero {zeroset.zeros[j]} could not be realified "
                f"(imaginary residue {imag_left:.3e})"
            )
        real_col = col.real[:, None]
        block = np.array([[zeroset.zeros[j].real]])
    else:
        j_plus = group[0]
        col = _phase_align(zeroset.vectors[:, j_plus], n)
        real_col = np.column_stack([col.real, col.imag])
        a, b = zeroset.zeros[j_plus].real, zeroset.zeros[j_plus].imag
        block = np.array([[a, b], [-b, a]])

    if normalization == "v-block":
        scale = np.linalg.norm(real_col[:n, :])
        if scale < 1e-12 * np.linalg.norm(real_col):
            warnings.warn(
                "state block of an eigenvector is negligible; "
                "falling back to unit-column normalization",
                stacklevel=3,
            )
            scale = np.linalg.norm(real_col)
    elif normalization == "unit":
        scale = np.linalg.norm(real_col)
    else:
        raise ValueError(f"unknown normalization policy {normalization!r}")
    return real_col / scale, block


def assemble_deflating_basis(
    model, selection, zeros=None, normalization="unit", residual_tol=1e-8
):
    """Assemble the real deflating basis for a self-conjugate selection of
    right-half-plane zeros of ``model``.

    Conjugate pairs contribute two columns (real and imaginary part of one
    eigenvector) and a ``[[a, b], [-b, a]]`` block in ``R``.  The ``W``
    block is recovered from the port row of the pencil relation,
    ``W = -(D^T + D)^{-1} (B^T U + C V)``.  The defining relations are
    verified to ``residual_tol`` (relative, per equation).
    """
    zeroset = zeros if zeros is not None else spectral_zeros(model)
    groups = _group_selection(zeroset, list(selection))
    cols = []
    blocks = []
    zero_list = []
    for group in groups:
        real_col, block = _realify_group(zeroset, group, normalization)
        cols.append(real_col)
        blocks.append(block)
        zero_list.extend(zeroset.zeros[j] for j in group)
    n = model.n
    stacked = np.hstack(cols) if cols else np.zeros((2 * n, 0))
    v = stacked[:n, :]
    u = stacked[n:, :]
    k = model.D.T + model.D
    w = -np.linalg.solve(k, model.B.T @ u + model.C @ v)
    r = _block_diag(blocks, sum(b.shape[0] for b in blocks))
    basis = DeflatingBasis(U=u, V=v, W=w, R=r, zero_list=np.array(zero_list))
    residuals, scales = deflation_residuals(model, basis)
    worst = max(
        (res / max(sc, np.finfo(float).tiny) for res, sc in zip(residuals, scales)),
        default=0.0,
    )
    if worst > residual_tol:
        raise NumericalError(
            f"deflating-basis residual {worst:.3e} exceeds {residual_tol:.1e}"
        )
    return basis


def _block_diag(blocks, size):
    out = np.zeros((size, size))
    pos = 0
    for b in blocks:
        w = b.shape[0]
        out[pos:pos + w, pos:pos + w] = b
        pos += w
    return out


def deflation_residuals(model, basis):
    """Residual norms of the three block rows of the pencil relation.

    Returns ``(residuals, scales)`` for
    ``A V + B W - V R``, ``A^T U + C^T W + U R`` and
    ``B^T U + C V + (D^T + D) W``.
    """
    u, v, w, r = basis.U, basis.V, basis.W, basis.R
    k = model.D.T + model.D
    res_a = np.linalg.norm(model.A @ v + model.B @ w - v @ r, 2)
    res_b = np.linalg.norm(model.A.T @ u + model.C.T @ w + u @ r, 2)
    res_c = np.linalg.norm(model.B.T @ u + model.C @ v + k @ w, 2)
    norm = lambda x: np.linalg.norm(x, 2) if x.size else 0.0
    sc_a = norm(model.A) * norm(v) + norm(model.B) * norm(w) + norm(v) * norm(r)
    sc_b = norm(model.A) * norm(u) + norm(model.C) * norm(w) + norm(u) * norm(r)
    sc_c = norm(model.B) * norm(u) + norm(model.C) * norm(v) + norm(k) * norm(w)
    return (res_a, res_b, res_c), (sc_a, sc_b, sc_c)


def gram_matrix(basis):
    """Symmetrized Gram matrix ``-U^T V`` and its relative asymmetry."""
    x = -basis.U.T @ basis.V
    scale = max(np.linalg.norm(x, 2), np.finfo(float).tiny)
    asymmetry = np.linalg.norm(x - x.T, 2) / scale
    return (x + x.T) / 2.0, float(asymmetry)


@dataclass(frozen=True)
class SelectionContext:
    """Per-shift data shared by greedy selections of every order.

    Holds the full realified right-half-plane basis of the shifted model,
    its Gram matrix, and the pivoted-Cholesky greedy column order.
    """

    xi: float
    zeros: SpectralZeroSet
    groups: tuple
    columns_of_group: tuple
    group_of_column: tuple
    X: np.ndarray
    asymmetry: float
    pivot_order: np.ndarray
    pivot_rank: int
    normalization: str

    @property
    def admissible_states(self):
        return sum(len(g) for g in self.groups)


@dataclass(frozen=True)
class GreedySelection:
    """An ordered self-conjugate zero selection with its dominance score.

    ``score`` is the smallest eigenvalue of the principal Gram submatrix on
    the selected columns; ``zeros`` is the zero set of the shifted model the
    indices refer to.
    """

    indices: tuple
    score: float
    xi: float
    zeros: SpectralZeroSet
    normalization: str


def build_selection_context(model, xi=0.0, normalization="unit", band_tol=1e-9):
    """Compute the shift-dependent selection data for ``model``.

    Raises :class:`ReductionRejected` when the shifted model has no
    Hamiltonian matrix (singular shifted feedthrough Gram).
    """
    shifted = shift_model(model, xi) if xi else model
    try:
        zeroset = spectral_zeros(shifted, band_tol=band_tol)
    except NumericalError as exc:
        raise ReductionRejected(f"shift {xi} is not admissible: {exc}") from exc
    right = zeroset.right_indices()
    groups = []
    seen = set()
    for j in right:
        if j in seen:
            continue
        z = zeroset.zeros[j]
        if abs(z.imag) <= 1e-12 * max(1.0, abs(z)):
            groups.append((j,))
            seen.add(j)
        else:
            k = zeroset.conjugate_partner(j)
            j_plus, j_minus = (j, k) if z.imag > 0 else (k, j)
            groups.append((j_plus, j_minus))
            seen.update((j, k))
    cols = []
    columns_of_group = []
    group_of_column = []
    pos = 0
    for gi, group in enumerate(groups):
        real_col, _ = _realify_group(zeroset, group, normalization)
        cols.append(real_col)
        width = real_col.shape[1]
        columns_of_group.append(tuple(range(pos, pos + width)))
        group_of_column.extend([gi] * width)
        pos += width
    n = zeroset.n
    stacked = np.hstack(cols) if cols else np.zeros((2 * n, 0))
    x = -stacked[n:, :].T @ stacked[:n, :]
    scale = max(np.linalg.norm(x, 2), np.finfo(float).tiny)
    asymmetry = float(np.linalg.norm(x - x.T, 2) / scale)
    x = (x + x.T) / 2.0
    perm, _, rank = pivoted_cholesky_partial(x)
    return SelectionContext(
        xi=float(xi),
        zeros=zeroset,
        groups=tuple(groups),
        columns_of_group=tuple(columns_of_group),
        group_of_column=tuple(group_of_column),
        X=x,
        asymmetry=asymmetry,
        pivot_order=perm,
        pivot_rank=int(rank),
        normalization=normalization,
    )


def select_order(context, order):
    """Leading self-conjugate selection of ``order`` states from the greedy
    column order.

    Walks the pivot order; a complex zero pulls in its conjugate (two
    states).  A pair that would overflow ``order`` is dropped and the walk
    continues.  Raises :class:`ReductionRejected` when the positive part of
    the Gram matrix is exhausted before ``order`` states are found, or when
    there are fewer than ``order`` admissible states altogether.
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if context.admissible_states < order:
        raise ReductionRejected(
            f"only {context.admissible_states} admissible zero states, "
            f"requested {order}"
        )
    filled = 0
    chosen_groups = []
    chosen_set = set()
    for col in context.pivot_order[: context.pivot_rank]:
        gi = context.group_of_column[col]
        if gi in chosen_set:
            continue
        width = len(context.groups[gi])
        if filled + width > order:
            continue  # drop rule: pair does not fit, keep walking
        chosen_groups.append(gi)
        chosen_set.add(gi)
        filled += width
        if filled == order:
            break
    if filled < order:
        if context.pivot_rank < len(context.group_of_column):
            raise ReductionRejected(
                "Gram matrix is not positive definite beyond pivot "
                f"{context.pivot_rank}; cannot select {order} states",
                pivot_index=context.pivot_rank,
            )
        if filled == 0:
            raise ReductionRejected(f"no self-conjugate selection of size {order} exists")
        # odd leftover against pair-only remainder: return the largest
        # self-conjugate subset the drop rule allows
    indices = []
    cols = []
    for gi in chosen_groups:
        indices.extend(context.groups[gi])
        cols.extend(context.columns_of_group[gi])
    sub = context.X[np.ix_(cols, cols)]
    score = float(np.linalg.eigvalsh(sub).min()) if cols else 0.0
    return GreedySelection(
        indices=tuple(indices),
        score=score,
        xi=context.xi,
        zeros=context.zeros,
        normalization=context.normalization,
    )


def greedy_select(model, order, xi=0.0, normalization="unit", band_tol=1e-9):
    """Greedy selection of ``order`` interpolation zeros for a shift ``xi``.

    Builds the full right-half-plane basis of the shifted model, orders its
    columns by pivoted Cholesky of the Gram matrix, and post-processes the
    order into a leading self-conjugate subset.
    """
    context = build_selection_context(
        model, xi=xi, normalization=normalization, band_tol=band_tol
    )
    return select_order(context, order)
