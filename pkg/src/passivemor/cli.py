"""Command-line interface.

Subcommands: ``generate`` (benchmark models), ``xi`` (shift limit),
``reduce`` (single reduction with report), ``sweep`` (order/shift grid
with CSV tables), ``sigma`` (singular-value sampling).  Report paths
write figures next to the delimited output unless ``--no-plot`` is given.

Exit codes: 0 success, 1 numerical failure, 2 invalid input or usage.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .benchmarks import BenchmarkSpec
from .errors import NumericalError
from .fileio import format_sig, load_model, save_model
from .hinf import error_system, sigma_sample
from .model import minimality_report
from .passivity import compute_xi_limit, is_strictly_passive, normalized_passivity_radius
from .reduction import project_shifted, verify_interpolation
from .spectral import greedy_select, spectral_zeros
from .sweep import SweepConfig, bounds_csv, cells_csv, run_sweep, summary_csv


def _common_flags():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output-dir", default=".", help="directory for generated files")
    common.add_argument("--jobs", type=int, default=1, help="parallel sweep cells")
    common.add_argument("--seed", type=int, default=0, help="seed for random generation")
    common.add_argument("--tol-psd", type=float, default=1e-8,
                        help="semidefiniteness band for certificate checks")
    common.add_argument("--tol-bisect", type=float, default=1e-8,
                        help="absolute tolerance of the shift-limit bisection")
    common.add_argument("--tol-hinf", type=float, default=1e-6,
                        help="relative tolerance of H-infinity norms")
    common.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    return common


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="passivemor",
        description="Passivity-preserving model reduction by spectral-zero interpolation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate a benchmark model file")
    gensub = gen.add_subparsers(dest="benchmark", required=True)
    rlc = gensub.add_parser("rlc", parents=[common], help="RLC ladder network")
    rlc.add_argument("--sections", type=int, required=True)
    rlc.add_argument("--resistance", type=float, default=1.0)
    rlc.add_argument("--inductance", type=float, default=1.0)
    rlc.add_argument("--capacitance", type=float, default=1.0)
    rlc.add_argument("--output", default=None, help="model file name")
    rlc.set_defaults(func=cmd_generate_rlc)
    rph = gensub.add_parser("random-ph", parents=[common],
                            help="random normalized port-Hamiltonian model")
    rph.add_argument("--n", type=int, required=True, help="state dimension")
    rph.add_argument("--m", type=int, required=True, help="port dimension")
    rph.add_argument("--lambda-min", type=float, default=0.5,
                     help="smallest eigenvalue of the dissipation block")
    rph.add_argument("--output", default=None, help="model file name")
    rph.set_defaults(func=cmd_generate_random_ph)

    xi = sub.add_parser("xi", parents=[common], help="shift limit of a model")
    xi.add_argument("model", help="model file")
    xi.set_defaults(func=cmd_xi)

    red = sub.add_parser("reduce", parents=[common], help="reduce a model once")
    red.add_argument("model", help="model file")
    red.add_argument("--order", type=int, required=True, help="reduced order")
    red.add_argument("--xi", type=float, default=0.0, help="shift parameter")
    red.set_defaults(func=cmd_reduce)

    sw = sub.add_parser("sweep", parents=[common], help="order/shift sweep with CSV output")
    sw.add_argument("model", help="model file")
    sw.add_argument("--orders", type=int, nargs="+", required=True)
    sw.add_argument("--xi-count", type=int, default=20,
                    help="equidistant shifts on [0, Xi]")
    sw.add_argument("--xi-values", type=float, nargs="+", default=None,
                    help="explicit shift grid (overrides --xi-count)")
    sw.add_argument("--probe-beyond-xi", action="store_true",
                    help="extend the grid past the shift limit")
    sw.add_argument("--hinf-rel-tol", type=float, default=1e-4,
                    help="relative tolerance for per-cell error norms")
    sw.set_defaults(func=cmd_sweep)

    sig = sub.add_parser("sigma", parents=[common], help="singular-value sampling")
    sig.add_argument("model", help="model file")
    sig.add_argument("model2", nargs="?", default=None,
                     help="second model; also emits the error-system plot")
    sig.add_argument("--omega-min", type=float, default=1e-2)
    sig.add_argument("--omega-max", type=float, default=1e2)
    sig.add_argument("--points", type=int, default=200)
    sig.set_defaults(func=cmd_sigma)
    return parser


def _outdir(args):
    path = Path(args.output_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _summary(model):
    diag = is_strictly_passive(model)
    k_min = np.linalg.eigvalsh(model.D + model.D.T).min()
    print(f"n = {model.n}, m = {model.m}")
    print(f"strictly passive: {bool(diag)}")
    print(f"lambda_min(D^T + D) = {format_sig(k_min)}")


def cmd_generate_rlc(args):
    spec = BenchmarkSpec(
        kind="rlc-ladder",
        sections=args.sections,
        r_val=args.resistance,
        l_val=args.inductance,
        c_val=args.capacitance,
    )
    model, ph = spec.build()
    name = args.output or f"rlc_{model.n}.json"
    path = _outdir(args) / name
    save_model(path, model, ph)
    print(f"wrote {path}")
    _summary(model)
    return 0


def cmd_generate_random_ph(args):
    spec = BenchmarkSpec(
        kind="random-ph", n=args.n, m=args.m, lambda_min_w=args.lambda_min, seed=args.seed
    )
    model, ph = spec.build()
    name = args.output or f"random_ph_n{args.n}_m{args.m}_seed{args.seed}.json"
    path = _outdir(args) / name
    save_model(path, model, ph)
    print(f"wrote {path}")
    _summary(model)
    print(f"normalized passivity radius = {format_sig(normalized_passivity_radius(ph))}")
    return 0


def cmd_xi(args):
    model, _ = load_model(args.model)
    diag = is_strictly_passive(model)
    if not diag:
        raise ValueError(f"model is not strictly passive: {diag.reason}")
    k_min = float(np.linalg.eigvalsh(model.D + model.D.T).min())
    xi_limit = compute_xi_limit(model, tol=args.tol_bisect)
    print(f"Xi = {xi_limit:.6f}")
    print(f"bracket: 0 < Xi < lambda_min(D^T + D) = {format_sig(k_min)}")
    return 0


def cmd_reduce(args):
    model, _ = load_model(args.model)
    if not 1 <= args.order < model.n:
        raise ValueError(f"order must lie in [1, {model.n}), got {args.order}")
    if args.xi < 0:
        raise ValueError("shift must be non-negative")
    outdir = _outdir(args)
    selection = greedy_select(model, args.order, xi=args.xi)
    reduced = project_shifted(model, args.xi, selection, psd_tol=args.tol_psd)
    interp = verify_interpolation(model, reduced)
    ctrb, obsv = minimality_report(model)

    stem = f"reduced_order{args.order}_xi{args.xi:g}"
    model_path = outdir / f"{stem}.json"
    if reduced.normalized is not None:
        from .model import ph_to_statespace

        save_model(model_path, ph_to_statespace(reduced.normalized), reduced.normalized)
    else:
        save_model(model_path, reduced.model)
    report = {
        "order": reduced.order,
        "xi": reduced.xi,
        "selected_zeros": [[z.real, z.imag] for z in reduced.basis.zero_list],
        "interpolation_residual": interp.max_residual,
        "feedthrough_residual": interp.feedthrough_residual,
        "lmi_margin": reduced.lmi_margin,
        "radius_lower_bound": reduced.radius_lower_bound,
        "gram_asymmetry": reduced.gram_asymmetry,
        "projection_condition": reduced.projection_condition,
        "selection_score": selection.score,
        "input_minimality": {"controllability": ctrb, "observability": obsv},
    }
    report_path = outdir / f"{stem}_report.json"
    report_path.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    print(f"wrote {model_path}")
    print(f"wrote {report_path}")
    print(f"interpolation residual = {format_sig(interp.max_residual)}")
    print(f"LMI margin = {format_sig(reduced.lmi_margin)}")
    print(f"passivity radius lower bound = {format_sig(reduced.radius_lower_bound)}")
    if not args.no_plot:
        from .plots import save_zero_figure

        zeros = spectral_zeros(model).zeros
        points = reduced.basis.zero_list - args.xi / 2.0
        fig_path = outdir / f"{stem}_zeros.png"
        save_zero_figure(zeros, points, fig_path)
        print(f"wrote {fig_path}")
    return 0


def cmd_sweep(args):
    model, _ = load_model(args.model)
    diag = is_strictly_passive(model)
    if not diag:
        raise ValueError(f"sweep requires a strictly passive model: {diag.reason}")
    bad = [k for k in args.orders if not 1 <= k < model.n]
    if bad:
        raise ValueError(f"orders must lie in [1, {model.n}); offending: {bad}")
    config = SweepConfig(
        orders=tuple(args.orders),
        xi_count=args.xi_count,
        xi_values=tuple(args.xi_values) if args.xi_values else None,
        probe_beyond_xi=args.probe_beyond_xi,
        hinf_rel_tol=args.hinf_rel_tol,
        psd_tol=args.tol_psd,
        jobs=args.jobs,
    )
    result = run_sweep(model, config)
    outdir = _outdir(args)
    for name, text in (
        ("sweep_cells.csv", cells_csv(result)),
        ("sweep_summary.csv", summary_csv(result)),
        ("sweep_bounds.csv", bounds_csv(result)),
    ):
        (outdir / name).write_text(text)
        print(f"wrote {outdir / name}")
    accepted = sum(1 for c in result.cells if c.accepted)
    print(f"Xi = {result.xi_limit:.6f}; accepted {accepted}/{len(result.cells)} cells")
    if not args.no_plot:
        from .plots import save_sweep_figure

        fig_path = outdir / "sweep.png"
        save_sweep_figure(result, fig_path)
        print(f"wrote {fig_path}")
    return 0


def cmd_sigma(args):
    model, _ = load_model(args.model)
    outdir = _outdir(args)
    plot = sigma_sample(model, args.omega_min, args.omega_max, args.points)
    plots = [plot]
    labels = [Path(args.model).stem]
    (outdir / "sigma.csv").write_text(plot.to_csv())
    print(f"wrote {outdir / 'sigma.csv'}")
    if args.model2:
        second, _ = load_model(args.model2)
        plot2 = sigma_sample(second, args.omega_min, args.omega_max, args.points)
        err_plot = sigma_sample(
            error_system(model, second), args.omega_min, args.omega_max, args.points
        )
        (outdir / "sigma_second.csv").write_text(plot2.to_csv())
        (outdir / "sigma_error.csv").write_text(err_plot.to_csv())
        print(f"wrote {outdir / 'sigma_second.csv'}")
        print(f"wrote {outdir / 'sigma_error.csv'}")
        plots += [plot2, err_plot]
        labels += [Path(args.model2).stem, "error system"]
    if not args.no_plot:
        from .plots import save_sigma_figure

        fig_path = outdir / "sigma.png"
        save_sigma_figure(plots, labels, fig_path)
        print(f"wrote {fig_path}")
    return 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
