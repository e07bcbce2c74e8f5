"""Matplotlib renderers for the CLI report path (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import analysis, dynamics


def dispersion_figure(path, op, branch: int | None = None, samples=None) -> None:
    """Bands along the body diagonal plus the grid error distribution.

    Left: closed-form eigenphase curves at k = (kappa, kappa, kappa) with
    numeric markers from the assembled operator.  Right: histogram of the
    matched phase errors of `samples` (if given).
    """
    kappas = np.linspace(-np.pi, np.pi, 241)
    diag = np.stack([kappas] * 3, axis=-1)
    cf = np.array([analysis.spectrum_sample(op, k, branch).closed_form_phases for k in diag])

    probe_idx = np.linspace(0, len(kappas) - 1, 25).astype(int)
    num = np.array(
        [analysis.spectrum_sample(op, diag[i], branch).numeric_phases for i in probe_idx]
    )

    ncols = 2 if samples else 1
    fig, axes = plt.subplots(1, ncols, figsize=(5.5 * ncols, 4.0))
    ax = axes[0] if samples else axes
    for band in range(cf.shape[1]):
        ax.plot(kappas, cf[:, band], "-", color="tab:blue", lw=1.2)
    for band in range(num.shape[1]):
        ax.plot(kappas[probe_idx], num[:, band], "o", color="tab:red", ms=3.5, mfc="none")
    ax.set_xlabel(r"$\kappa$  along  $(\kappa,\kappa,\kappa)$")
    ax.set_ylabel("eigenphase")
    ax.set_title("dispersion: closed form (lines) vs numeric (dots)")
    ax.grid(alpha=0.3)

    if samples:
        errs = np.array([max(s.abs_err, 1e-18) for s in samples])
        ax2 = axes[1]
        ax2.hist(np.log10(errs), bins=40, color="tab:gray")
        ax2.set_xlabel(r"$\log_{10}$ |phase error|")
        ax2.set_ylabel("grid points")
        ax2.set_title(f"max error {errs.max():.2e}")
        ax2.grid(alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def trajectory_figure(path, states: list[dynamics.FieldState]) -> None:
    """Centroid components and norm drift over a packet trajectory."""
    times = np.array([s.time_step for s in states], dtype=float)
    cents = np.array([dynamics.centroid(s) for s in states])
    norms = np.array([s.norm() for s in states])

    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(6.0, 6.0), sharex=True)
    for axis, label in enumerate("xyz"):
        ax1.plot(times, cents[:, axis], label=f"c{label}")
    ax1.set_ylabel("centroid (lattice units)")
    ax1.legend(loc="best")
    ax1.grid(alpha=0.3)

    ax2.plot(times, norms - norms[0], color="tab:red")
    ax2.set_xlabel("time step")
    ax2.set_ylabel("norm drift")
    ax2.grid(alpha=0.3)

    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def convergence_figure(path, labeled_fits: list[tuple[str, analysis.ConvergenceFit]]) -> None:
    """Log-log residual curves with a slope-2 reference."""
    fig, ax = plt.subplots(figsize=(5.5, 4.2))
    for label, fit in labeled_fits:
        ax.loglog(fit.scales, fit.residuals, "o-", ms=3, lw=0.8, alpha=0.6, label=label)
    ref = labeled_fits[0][1]
    anchor = ref.residuals[0]
    ax.loglog(
        ref.scales,
        anchor * (np.asarray(ref.scales) / ref.scales[0]) ** 2,
        "k--",
        lw=1.2,
        label="slope 2",
    )
    orders = [fit.fitted_order for _, fit in labeled_fits]
    ax.set_xlabel(r"scale $\epsilon$")
    ax.set_ylabel("max-entry residual")
    ax.set_title(f"fitted orders in [{min(orders):.3f}, {max(orders):.3f}]")
    if len(labeled_fits) <= 8:
        ax.legend(loc="best", fontsize=8)
    ax.grid(alpha=0.3, which="both")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
