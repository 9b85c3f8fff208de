"""Matplotlib renderings written next to the delimited outputs."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .full_dynamics import Trajectory
from .portrait import Chart, PortraitGrid, extract_contours
from .reduced_dynamics import ReducedTrajectory

__all__ = [
    "render_portrait_figure",
    "render_trajectory_figure",
    "render_reduced_figure",
]

_TWO_PI = 2.0 * math.pi


def render_portrait_figure(
    grid: PortraitGrid, levels: "list[float] | np.ndarray", path: str
) -> None:
    """Contour lines and collision dots of a sampled portrait."""
    contours = extract_contours(grid, levels)
    fig, ax = plt.subplots(figsize=(8, 5))
    for polylines in contours:
        for line in polylines:
            vv = line[:, 1] % _TWO_PI
            # break strokes where the modulo wraps
            jumps = np.nonzero(np.abs(np.diff(vv)) > math.pi)[0]
            start = 0
            for j in (*jumps, len(vv) - 1):
                if j + 1 > start + 1:
                    ax.plot(vv[start : j + 1], line[start : j + 1, 0],
                            color="#1f4e8c", lw=0.9)
                start = j + 1
    for cp in grid.collision_points:
        ax.plot([cp.v % _TWO_PI], [cp.u], "ko", ms=6)
    if grid.chart is Chart.ALPHA:
        ax.set_xlabel(r"$\alpha$")
        ax.set_ylabel(r"$a_3$")
    else:
        ax.set_xlabel(r"$2\varphi_1$")
        ax.set_ylabel(r"$I_1$")
    ax.set_xlim(0.0, _TWO_PI)
    ax.set_ylim(-grid.mu, grid.mu)
    ax.set_title(f"energy levels on the shape sphere, mu = {grid.mu:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_trajectory_figure(traj: Trajectory, path: str) -> None:
    """Vortex paths in the plane, one color per vortex."""
    pos = traj.positions
    fig, ax = plt.subplots(figsize=(6, 6))
    for k, color in enumerate(("tab:blue", "tab:orange", "tab:green")):
        ax.plot(pos[:, k].real, pos[:, k].imag, color=color, lw=0.8,
                label=f"vortex {k + 1}")
        ax.plot([pos[0, k].real], [pos[0, k].imag], "o", color=color, ms=5)
    ax.set_aspect("equal", adjustable="datalim")
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.legend(loc="best", fontsize=8)
    ax.set_title(f"vortex trajectories, t in [0, {traj.times[-1]:g}]")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_reduced_figure(rt: ReducedTrajectory, path: str) -> None:
    """Reduced orbit drawn on the cylindrical chart (alpha, a3)."""
    coords = rt.coords()
    alpha = np.arctan2(coords[:, 2], coords[:, 1]) % _TWO_PI
    a3 = coords[:, 3]
    fig, ax = plt.subplots(figsize=(8, 5))
    jumps = np.nonzero(np.abs(np.diff(alpha)) > math.pi)[0]
    start = 0
    for j in (*jumps, len(alpha) - 1):
        if j + 1 > start + 1:
            ax.plot(alpha[start : j + 1], a3[start : j + 1], color="#8c1f2f", lw=0.9)
        start = j + 1
    ax.plot([alpha[0]], [a3[0]], "ko", ms=5)
    mu = rt.states[0].mu
    ax.set_xlim(0.0, _TWO_PI)
    ax.set_ylim(-mu, mu)
    ax.set_xlabel(r"$\alpha$")
    ax.set_ylabel(r"$a_3$")
    ax.set_title(f"reduced orbit on the shape sphere, mu = {mu:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
