"""Order/shift sweep: the full reduction pipeline over a grid.

For every requested order and every shift on an equidistant grid over
``[0, Xi]`` (optionally probing beyond ``Xi``), the pipeline selects
zeros greedily, projects, verifies interpolation and the certificate, and
measures the relative H-infinity error.  Rejected cells are recorded, not
fatal.  Reference columns (balanced-truncation error/bound and the Hankel
lower bound) accompany the per-order error envelope.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .fileio import format_sig
from .gramians import balanced_truncation, hankel_singular_values
from .hinf import _sigma_max_grid, _transfer_grid, error_system, hinf_norm, relative_error
from .passivity import compute_xi_limit, is_strictly_passive
from .reduction import project_shifted, verify_interpolation
from .spectral import build_selection_context, select_order

__all__ = ["SweepConfig", "SweepCell", "SweepResult", "run_sweep",
           "cells_csv", "summary_csv", "bounds_csv"]


@dataclass(frozen=True)
class SweepConfig:
    """Sweep parameters.

    ``xi_count`` equidistant shifts on ``[0, Xi]`` are used unless
    ``xi_values`` is given explicitly.  With ``probe_beyond_xi`` the grid
    is extended at the same spacing up to ``probe_limit_factor * Xi``
    (capped below the singular-shift bound); cells there are accepted for
    as long as the Gram certificate stays positive definite.
    """

    orders: tuple
    xi_count: int = 20
    xi_values: tuple = None
    probe_beyond_xi: bool = False
    probe_limit_factor: float = 2.0
    hinf_rel_tol: float = 1e-4
    psd_tol: float = 1e-8
    normalization: str = "unit"
    omega_min: float = 1e-4
    omega_max: float = 1e4
    grid_points: int = 400
    jobs: int = 1

    def __post_init__(self):
        if not self.orders:
            raise ValueError("no reduction orders requested")
        if self.xi_values is None and self.xi_count < 1:
            raise ValueError("xi grid needs at least one point")


@dataclass(frozen=True)
class SweepCell:
    order: int
    xi: float
    accepted: bool
    relative_error: float = None
    lmi_margin: float = None
    interpolation_residual: float = None
    reason: str = ""


@dataclass(frozen=True)
class SweepResult:
    xi_limit: float
    xi_grid: tuple
    hinf_reference: float
    hankel: object
    cells: tuple
    summary: tuple = field(default=())  # (order, err_min, err_max, best_xi)
    bounds: tuple = field(default=())   # (order, bt_error, bt_bound, hankel_lower), relative


def _xi_grid(config, xi_limit, k_min):
    if config.xi_values is not None:
        return tuple(float(x) for x in config.xi_values)
    grid = list(np.linspace(0.0, xi_limit, config.xi_count))
    if config.probe_beyond_xi:
        spacing = xi_limit / max(config.xi_count - 1, 1) if xi_limit > 0 else k_min / 20.0
        cap = min(config.probe_limit_factor * xi_limit, 0.999 * k_min)
        xi = grid[-1] + spacing
        while spacing > 0 and xi <= cap:
            grid.append(xi)
            xi += spacing
    return tuple(grid)


def _cells_for_shift(model, xi, config, omegas, z_grid, hinf_ref):
    """All per-order cells for one shift (shares the zero data)."""
    cells = []
    try:
        context = build_selection_context(model, xi=xi, normalization=config.normalization)
    except NumericalError as exc:
        return [
            SweepCell(order=k, xi=xi, accepted=False, reason=str(exc))
            for k in config.orders
        ]
    for order in config.orders:
        try:
            selection = select_order(context, order)
            reduced = project_shifted(model, xi, selection, psd_tol=config.psd_tol)
            interp = verify_interpolation(model, reduced)
            zh_grid = _transfer_grid(reduced.model, omegas)
            seed = float(np.linalg.svd(z_grid - zh_grid, compute_uv=False)[:, 0].max())
            err = relative_error(
                model,
                reduced.model,
                rel_tol=config.hinf_rel_tol,
                seed_lower=seed,
                reference=hinf_ref,
                omega_min=config.omega_min,
                omega_max=config.omega_max,
                grid_points=config.grid_points,
            )
            cells.append(
                SweepCell(
                    order=order,
                    xi=xi,
                    accepted=True,
                    relative_error=err,
                    lmi_margin=reduced.lmi_margin,
                    interpolation_residual=interp.max_residual,
                )
            )
        except NumericalError as exc:
            cells.append(SweepCell(order=order, xi=xi, accepted=False, reason=str(exc)))
    return cells


def run_sweep(model, config):
    """Run the full sweep; returns a :class:`SweepResult`."""
    diag = is_strictly_passive(model)
    if not diag:
        raise NumericalError(f"sweep requires a strictly passive model: {diag.reason}")
    bad = [k for k in config.orders if not 1 <= k < model.n]
    if bad:
        raise ValueError(f"orders must lie in [1, n); offending: {bad}")
    xi_limit = compute_xi_limit(model)
    k_min = float(np.linalg.eigvalsh(model.D + model.D.T).min())
    grid = _xi_grid(config, xi_limit, k_min)

    omegas = np.concatenate(
        ([0.0], np.logspace(np.log10(config.omega_min), np.log10(config.omega_max), config.grid_points))
    )
    z_grid = _transfer_grid(model, omegas)
    hinf_ref = hinf_norm(
        model,
        rel_tol=min(config.hinf_rel_tol, 1e-6),
        seed_lower=float(np.linalg.svd(z_grid, compute_uv=False)[:, 0].max()),
    )
    hankel = hankel_singular_values(model)

    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            per_shift = list(
                pool.map(
                    lambda xi: _cells_for_shift(model, xi, config, omegas, z_grid, hinf_ref),
                    grid,
                )
            )
    else:
        per_shift = [
            _cells_for_shift(model, xi, config, omegas, z_grid, hinf_ref) for xi in grid
        ]
    by_order = {k: [] for k in config.orders}
    cells = []
    for shift_cells in per_shift:
        for cell in shift_cells:
            cells.append(cell)
            by_order[cell.order].append(cell)

    summary = []
    bounds = []
    for order in config.orders:
        accepted = [c for c in by_order[order] if c.accepted]
        if accepted:
            errors = [c.relative_error for c in accepted]
            best = min(accepted, key=lambda c: c.relative_error)
            summary.append((order, min(errors), max(errors), best.xi))
        else:
            summary.append((order, None, None, None))
        bt_model, bt_bound = balanced_truncation(model, order)
        err_sys = error_system(model, bt_model)
        bt_seed = float(_sigma_max_grid(err_sys, omegas).max())
        bt_err = hinf_norm(err_sys, rel_tol=config.hinf_rel_tol, seed_lower=bt_seed) / hinf_ref
        bounds.append(
            (order, bt_err, bt_bound / hinf_ref, hankel.lower_bound(order) / hinf_ref)
        )
    return SweepResult(
        xi_limit=xi_limit,
        xi_grid=grid,
        hinf_reference=hinf_ref,
        hankel=hankel,
        cells=tuple(cells),
        summary=tuple(summary),
        bounds=tuple(bounds),
    )


def _cell_fields(value):
    return "" if value is None else format_sig(value)


def cells_csv(result):
    lines = ["order,xi,relative_error,accepted,lmi_margin"]
    for c in result.cells:
        lines.append(
            ",".join(
                (
                    str(c.order),
                    format_sig(c.xi),
                    _cell_fields(c.relative_error),
                    "true" if c.accepted else "false",
                    _cell_fields(c.lmi_margin),
                )
            )
        )
    return "\n".join(lines) + "\n"


def summary_csv(result):
    lines = ["order,error_min,error_max,best_xi"]
    for order, emin, emax, best_xi in result.summary:
        lines.append(
            ",".join((str(order), _cell_fields(emin), _cell_fields(emax), _cell_fields(best_xi)))
        )
    return "\n".join(lines) + "\n"


def bounds_csv(result):
    lines = ["order,bt_relative_error,bt_relative_bound,hankel_relative_lower"]
    for order, bt_err, bt_bound, lower in result.bounds:
        lines.append(
            ",".join((str(order), format_sig(bt_err), format_sig(bt_bound), format_sig(lower)))
        )
    return "\n".join(lines) + "\n"
