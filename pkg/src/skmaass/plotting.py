"""Static PNG figures written next to a report when ``--out-dir`` is given.

Uses the non-interactive Agg backend; nothing is ever shown on screen.
"""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, ax, path: Path, title: str, xlabel: str, ylabel: str) -> Path:
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)
    return path


def plot_series(
    path: Path,
    xs: Sequence[float],
    series: dict[str, Sequence[float]],
    title: str,
    xlabel: str,
    ylabel: str,
    logx: bool = False,
    hline: float | None = None,
) -> Path:
    """One or more named curves against a shared x axis."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, ys in series.items():
        ax.plot(xs, ys, marker="o" if len(xs) <= 20 else None, ms=4, lw=1.2, label=label)
    if hline is not None:
        ax.axhline(hline, color="0.4", lw=0.8, ls="--")
    if logx:
        ax.set_xscale("log")
    if len(series) > 1:
        ax.legend(frameon=False)
    return _finish(fig, ax, path, title, xlabel, ylabel)


def plot_points(
    path: Path,
    groups: dict[str, tuple[Sequence[float], Sequence[float]]],
    title: str,
    xlabel: str,
    ylabel: str,
    logx: bool = False,
    hline: float | None = None,
) -> Path:
    """Scatter plot of labelled point groups."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, (xs, ys) in groups.items():
        ax.scatter(xs, ys, s=14, label=label)
    if hline is not None:
        ax.axhline(hline, color="0.4", lw=0.8, ls="--")
    if logx:
        ax.set_xscale("log")
    ax.legend(frameon=False)
    return _finish(fig, ax, path, title, xlabel, ylabel)
