"""Figure rendering for sweep results.

Takes the per-cell CSV a sweep emits and draws the two standard views: the
runtime curve over the population size (median with interquartile band, log
axes, optional cap line) and the genetic-drift curve (median count of bits
that visited the lower boundary or dipped below beta).  Files are written
next to the delimited output; nothing is shown interactively.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt


def load_cells(path) -> list[dict]:
    """Read a per-cell CSV into numeric dictionaries."""
    with open(path, newline="") as handle:
        reader = csv.DictReader(handle)
        cells = [
            {key: float(value) for key, value in row.items()} for row in reader
        ]
    cells.sort(key=lambda c: c["K"])
    return cells


def render_runtime_figure(cells: list[dict], out_path, cap: float | None = None) -> None:
    """Median iterations vs k on log-log axes with an interquartile band."""
    ks = [c["K"] for c in cells]
    med = [c["median_iterations"] for c in cells]
    q25 = [c["q25"] for c in cells]
    q75 = [c["q75"] for c in cells]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.fill_between(ks, q25, q75, alpha=0.25, color="tab:blue", label="interquartile range")
    ax.plot(ks, med, color="tab:blue", marker="o", markersize=3, label="median iterations")
    if cap is not None:
        ax.axhline(cap, color="tab:red", linestyle="--", linewidth=1, label="iteration cap")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("population size k")
    ax.set_ylabel("iterations")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_boundary_figure(cells: list[dict], out_path) -> None:
    """Median drift counts vs k: lower-boundary visits and dips below beta."""
    ks = [c["K"] for c in cells]
    lower = [c["median_lower_boundary_bits"] for c in cells]
    below = [c["median_bits_below_beta"] for c in cells]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(ks, lower, color="tab:orange", marker="o", markersize=3,
            label="bits at lower boundary")
    ax.plot(ks, below, color="tab:green", marker="s", markersize=3,
            label="bits below beta")
    ax.set_xscale("log")
    ax.set_xlabel("population size k")
    ax.set_ylabel("median bits per run")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def render_all(cells_path, out_dir, cap: float | None = None) -> list[str]:
    """Render both figures from a cells CSV; returns the written paths."""
    cells = load_cells(cells_path)
    paths = []
    runtime_path = os.path.join(out_dir, "runtime_vs_k.png")
    render_runtime_figure(cells, runtime_path, cap=cap)
    paths.append(runtime_path)
    boundary_path = os.path.join(out_dir, "boundary_bits_vs_k.png")
    render_boundary_figure(cells, boundary_path)
    paths.append(boundary_path)
    return paths
