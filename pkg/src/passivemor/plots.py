"""File-based figure rendering for the CLI report paths.

Every function writes a PNG next to the delimited data it illustrates;
nothing here opens a window (the Agg backend is forced).
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["save_sigma_figure", "save_sweep_figure", "save_zero_figure"]


def save_sigma_figure(plots, labels, path, title="Singular value plot"):
    """Overlay sigma plots (log-log) and save to ``path``."""
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for plot, label in zip(plots, labels):
        for j in range(plot.values.shape[1]):
            ax.loglog(
                plot.frequencies,
                np.maximum(plot.values[:, j], 1e-300),
                label=label if j == 0 else None,
            )
    ax.set_xlabel(r"$\omega$ [rad/s]")
    ax.set_ylabel(r"$\sigma_i(Z(i\omega))$")
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(result, path):
    """Error envelope per order against the balanced-truncation and Hankel
    reference bounds."""
    orders = [row[0] for row in result.summary]
    emin = [row[1] for row in result.summary]
    emax = [row[2] for row in result.summary]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    have = [k for k, e in zip(orders, emin) if e is not None]
    ax.semilogy(have, [e for e in emin if e is not None], "o-", label="best over shifts")
    ax.semilogy(have, [e for e in emax if e is not None], "s-", label="worst over shifts")
    ax.semilogy(
        orders, [row[2] for row in result.bounds], "k--", label="balanced-truncation bound"
    )
    ax.semilogy(
        orders,
        [max(row[3], 1e-300) for row in result.bounds],
        "k:",
        label="Hankel lower bound",
    )
    ax.set_xlabel("reduced order")
    ax.set_ylabel(r"relative $H_\infty$ error")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_zero_figure(zeros, selected, path):
    """Scatter of spectral zeros with the selected interpolation points."""
    zeros = np.asarray(zeros, dtype=complex)
    selected = np.asarray(selected, dtype=complex)
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.plot(zeros.real, zeros.imag, ".", color="tab:blue", label="spectral zeros")
    if selected.size:
        ax.plot(
            selected.real,
            selected.imag,
            "+",
            color="tab:red",
            markersize=10,
            markeredgewidth=2,
            label="interpolation points",
        )
    ax.axvline(0.0, color="k", linewidth=0.8)
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
