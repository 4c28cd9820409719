"""Static figures from telemetry (matplotlib, non-interactive backend)."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

FIG_FORMAT = "svg"


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_run(tel, out_dir, label: str = "", fmt: str = FIG_FORMAT) -> list[Path]:
    """Estimation errors, trajectory, control and radius error of one run."""
    out_dir = Path(out_dir)
    return [
        plot_estimation_errors({label or "run": tel}, out_dir / f"estimation_error.{fmt}"),
        plot_trajectory({label or "run": tel}, out_dir / f"trajectory.{fmt}"),
        plot_control({label or "run": tel}, out_dir / f"control.{fmt}"),
        plot_radius_error({label or "run": tel}, out_dir / f"radius_error.{fmt}"),
    ]


def plot_estimation_errors(runs: dict, path) -> Path:
    fig, axes = plt.subplots(1, 3, figsize=(13, 3.8))
    for label, tel in runs.items():
        axes[0].semilogy(tel.t, np.linalg.norm(tel.pos_error, axis=1), lw=0.7, label=label)
        axes[1].semilogy(tel.t, np.linalg.norm(tel.vel_error, axis=1), lw=0.7, label=label)
        axes[2].semilogy(tel.t, tel.E_t, lw=0.7, label=label)
    axes[0].set_ylabel("position error [m]")
    axes[1].set_ylabel("velocity error [m/s]")
    axes[2].set_ylabel("estimation factor E [m/s]")
    for ax in axes:
        ax.set_xlabel("t [s]")
        ax.grid(True, which="both", alpha=0.3)
    axes[0].legend(fontsize=7)
    return _save(fig, Path(path))


def plot_trajectory(runs: dict, path) -> Path:
    fig, axes = plt.subplots(1, 3, figsize=(12, 4))
    pairs = ((0, 1, "x", "y"), (0, 2, "x", "z"), (1, 2, "y", "z"))
    for label, tel in runs.items():
        for ax, (i, j, a, b) in zip(axes, pairs):
            ax.plot(tel.truth[:, i], tel.truth[:, j], lw=0.7, label=label)
            ax.set_xlabel(f"{a} [m]")
            ax.set_ylabel(f"{b} [m]")
    for ax in axes:
        ax.set_aspect("equal", adjustable="datalim")
        ax.grid(True, alpha=0.3)
    axes[0].legend(fontsize=7)
    return _save(fig, Path(path))


def plot_control(runs: dict, path) -> Path:
    fig, axes = plt.subplots(3, 1, figsize=(10, 6), sharex=True)
    for label, tel in runs.items():
        for i, ax in enumerate(axes):
            ax.plot(tel.t, tel.u_cmd[:, i], lw=0.5, label=label)
    for ax, c in zip(axes, "xyz"):
        ax.set_ylabel(f"u_{c} [m/s²]")
        ax.grid(True, alpha=0.3)
    axes[-1].set_xlabel("t [s]")
    axes[0].legend(fontsize=7)
    return _save(fig, Path(path))


def plot_radius_error(runs: dict, path) -> Path:
    fig, ax = plt.subplots(figsize=(8, 3.8))
    for label, tel in runs.items():
        ax.plot(tel.t, tel.radius_err, lw=0.7, label=label)
    ax.set_xlabel("t [s]")
    ax.set_ylabel("‖p‖ − R [m]")
    ax.set_yscale("symlog", linthresh=1e-3)
    ax.grid(True, alpha=0.3)
    ax.legend(fontsize=7)
    return _save(fig, Path(path))


def plot_comparison(runs: dict, out_dir, fmt: str = FIG_FORMAT) -> list[Path]:
    """Overlay figures for a suite; ``runs`` maps labels to telemetry."""
    out_dir = Path(out_dir)
    return [
        plot_estimation_errors(runs, out_dir / f"estimation_error.{fmt}"),
        plot_trajectory(runs, out_dir / f"trajectory.{fmt}"),
        plot_control(runs, out_dir / f"control.{fmt}"),
        plot_radius_error(runs, out_dir / f"radius_error.{fmt}"),
    ]
