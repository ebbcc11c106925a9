"""Figures for analysis reports: Cayley tables and relation membership grids."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .algebra import FiniteAlgebra, Relation  # noqa: E402

DPI = 120


def _cell_size(n):
    return max(2.5, 0.55 * n + 1.2)


def plot_table(ax, table, n, title, zero=None):
    grid = np.asarray(table).reshape(n, n)
    ax.imshow(grid, cmap="viridis", vmin=0, vmax=max(n - 1, 1))
    for a in range(n):
        for b in range(n):
            v = grid[a, b]
            ax.text(b, a, str(v), ha="center", va="center",
                    color="white" if v < (n - 1) / 2 else "black",
                    fontweight="bold" if v == zero else "normal")
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xlabel("second argument")
    ax.set_ylabel("first argument")
    ax.set_title(title)


def plot_relation(ax, R: Relation, n, title):
    grid = np.zeros((n, n))
    for a, b in R.tuples:
        grid[a, b] = 1
    ax.imshow(grid, cmap="Greys", vmin=0, vmax=1.4)
    ax.set_xticks(range(n))
    ax.set_yticks(range(n))
    ax.set_xlabel("b")
    ax.set_ylabel("a")
    ax.set_title(title)


def render_figures(alg: FiniteAlgebra, outdir, witness_table=None, R: Relation | None = None) -> list[Path]:
    """Write PNGs for the binary operations, the subtraction witness and R; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    n = alg.size
    written = []

    panels = [(op.name, op.table) for op in alg.operations if op.arity == 2]
    if witness_table is not None:
        panels.append(("subtraction witness", witness_table))
    if panels:
        fig, axes = plt.subplots(1, len(panels), figsize=(_cell_size(n) * len(panels), _cell_size(n)), squeeze=False)
        for ax, (title, table) in zip(axes[0], panels):
            plot_table(ax, table, n, title, zero=alg.zero)
        fig.suptitle(f"{alg.name}: binary operations (zero = {alg.zero})")
        fig.tight_layout()
        path = outdir / f"{alg.name}_tables.png"
        fig.savefig(path, dpi=DPI)
        plt.close(fig)
        written.append(path)

    if R is not None:
        fig, ax = plt.subplots(figsize=(_cell_size(n), _cell_size(n)))
        full = len(R) == n * n
        plot_relation(ax, R, n, f"R ({len(R)}/{n * n} pairs{', full' if full else ''})")
        fig.tight_layout()
        path = outdir / f"{alg.name}_relation_R.png"
        fig.savefig(path, dpi=DPI)
        plt.close(fig)
        written.append(path)
    return written
