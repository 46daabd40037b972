"""Optional matplotlib rendering of the delimited outputs to PNG files.

Imported lazily by the CLI so plain runs never pay the matplotlib import.
Each renderer takes the same data that went into the CSV/JSON output and
writes one figure file; nothing here participates in the verification logic.
"""

from __future__ import annotations

import numpy as np

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def save_roots_figure(roots_list, path) -> None:
    """Root locus in the complex plane, colored by mode index."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ns = [r.n for r in roots_list]
    cmap = matplotlib.colormaps["viridis"]
    hi = max(ns) or 1
    for r in roots_list:
        col = cmap((r.n - 1) / hi)
        pts = np.array(r.roots[1:])
        ax.plot(pts.real, pts.imag, ".", color=col, markersize=3)
    ax.axhline(0.0, color="0.8", lw=0.5)
    ax.axvline(0.0, color="0.8", lw=0.5)
    ax.set_xlabel(r"Re $\lambda$")
    ax.set_ylabel(r"Im $\lambda$")
    ax.set_title("characteristic roots by mode")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_trace_figure(traces, path) -> None:
    """Displacement and control time series for the traced modes."""
    fig, (ax1, ax2) = plt.subplots(2, 1, sharex=True, figsize=(6.4, 5.6))
    for tr in traces:
        ax1.plot(tr.times, tr.theta, lw=0.8, label=f"n={tr.mode}")
        ax2.plot(tr.times, tr.u, lw=0.8)
    ax1.set_ylabel(r"$\theta_n(t)$")
    ax2.set_ylabel(r"$u_n(t)$")
    ax2.set_xlabel("t")
    ax1.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_verify_figure(report, path) -> None:
    """Per-mode terminal residuals on a log scale."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ns = [m.n for m in report.modes]
    floor = 1e-18
    theta = [max(abs(m.terminal_theta), floor) for m in report.modes]
    dtheta = [max(abs(m.terminal_dtheta), floor) for m in report.modes]
    rest = [max(m.rest_residual, floor) for m in report.modes]
    ax.semilogy(ns, theta, "o-", ms=3, lw=0.8, label=r"$|\theta_n(T)|$")
    ax.semilogy(ns, dtheta, "s-", ms=3, lw=0.8, label=r"$|\theta_n'(T)|$")
    ax.semilogy(ns, rest, "^-", ms=3, lw=0.8, label="rest residual")
    ax.set_xlabel("mode n")
    ax.set_ylabel("residual")
    ax.set_title(f"terminal residuals, scheme={report.scheme}, T={report.T:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_field_figure(field, T, path) -> None:
    """Space-time heat map of the control field |u(t, x)|."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    im = ax.imshow(
        np.abs(field).T,
        origin="lower",
        aspect="auto",
        extent=(0.0, T, 0.0, np.pi),
        cmap="magma",
    )
    fig.colorbar(im, ax=ax, label=r"$|u(t,x)|$")
    ax.set_xlabel("t")
    ax.set_ylabel("x")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def save_sweep_figure(rows, path) -> None:
    """Certified bound against the horizon, with the fitted exponential trend."""
    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    ts = np.array([r[0] for r in rows])
    bounds = np.array([r[1] for r in rows])
    ax.semilogy(ts, bounds, "o", label="certified bound")
    if len(ts) >= 2 and np.all(bounds > 0):
        slope, intercept = np.polyfit(ts, np.log(bounds), 1)
        grid = np.linspace(ts.min(), ts.max(), 100)
        ax.semilogy(grid, np.exp(intercept + slope * grid), "-", lw=0.8,
                    label=f"fit slope {slope:.3f}")
    ax.set_xlabel("horizon T")
    ax.set_ylabel("global bound")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
