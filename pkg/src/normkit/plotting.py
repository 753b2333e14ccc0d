"""Static figures of spectra, curves and eigenvalue trajectories (Agg backend)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .curve import PolyCurve, rotated_coordinates  # noqa: E402


def _finish(fig, ax, path):
    ax.set_xlabel("Re")
    ax.set_ylabel("Im")
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_trajectory(traj, path, title: str = "", reference=None) -> None:
    """One line per matched eigenvalue path; start marked by a star, end by a square."""
    paths = np.array([lam for _, lam in traj])
    fig, ax = plt.subplots(figsize=(6, 5))
    for k in range(paths.shape[1]):
        ax.plot(paths[:, k].real, paths[:, k].imag, "-o", ms=2, lw=1)
    ax.plot(paths[0].real, paths[0].imag, "k*", ms=10, label="start")
    ax.plot(paths[-1].real, paths[-1].imag, "ks", ms=6, mfc="none", label="end")
    if reference is not None:
        ref = np.asarray(reference)
        ax.plot(ref.real, ref.imag, "k:", lw=1, label="reference")
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    _finish(fig, ax, path)


def plot_spectrum(path, before, after=None, curve: PolyCurve | None = None, title: str = "") -> None:
    before = np.asarray(before)
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.plot(before.real, before.imag, "k*", ms=10, label="A")
    pts = before
    if after is not None:
        after = np.asarray(after)
        ax.plot(after.real, after.imag, "s", ms=7, mfc="none", label="A+")
        pts = np.concatenate([before, after])
    if curve is not None:
        x, _ = rotated_coordinates(pts, curve.theta)
        lo, hi = x.min(), x.max()
        pad = 0.25 * (hi - lo) + 0.5
        rho = np.linspace(lo - pad, hi + pad, 400)
        c = curve(rho)
        ax.plot(c.real, c.imag, "-", lw=1, label="curve")
    ax.legend(loc="best", fontsize=8)
    if title:
        ax.set_title(title)
    _finish(fig, ax, path)
