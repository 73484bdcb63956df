"""Figure rendering.  Pure functions of the input CSV: fixed figure
geometry, fixed dpi, fixed metadata, so reruns produce identical bytes."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)
import numpy as np  # noqa: E402

from .csvio import (  # noqa: E402
    KIND_DYNAMICS,
    KIND_LINECUT,
    KIND_SWEEP,
    SchemaError,
    Table,
    read_table,
    require_kind,
)

_DPI = 150
# constant PNG metadata: matplotlib would otherwise embed its version string
_META = {"Software": "figplots"}


@dataclass(frozen=True)
class PlotJob:
    """One rendering request.

    output_image is a directory for sweep-surface jobs (they emit one
    file per plotted quantity) and a file path for the other kinds.
    """

    input_csv: str
    kind: str
    output_image: str
    title: str = ""

    def __post_init__(self) -> None:
        if self.kind not in (KIND_SWEEP, KIND_LINECUT, KIND_DYNAMICS):
            raise SchemaError(f"unknown plot kind {self.kind!r}")

    def load(self) -> Table:
        """Read the input and fail if its schema does not match the kind."""
        table = read_table(self.input_csv)
        require_kind(table.names, self.kind)
        return table

    def label(self) -> str:
        return self.title or Path(self.input_csv).stem


def _save(fig, path: str) -> str:
    fig.savefig(path, dpi=_DPI, metadata=_META)
    plt.close(fig)
    return str(path)


def _grid(table: Table, quantity: str):
    alphas = np.unique(table["alpha"])
    betas = np.unique(table["beta"])
    grid = np.full((alphas.size, betas.size), np.nan)
    ia = np.searchsorted(alphas, table["alpha"])
    ib = np.searchsorted(betas, table["beta"])
    grid[ia, ib] = table[quantity]
    if np.isnan(grid).any():
        raise SchemaError("sweep grid is incomplete; missing (alpha, beta) cells")
    return alphas, betas, grid


def _extent(vals: np.ndarray):
    half = 0.5 * (vals[1] - vals[0]) if vals.size > 1 else 0.5
    return vals[0] - half, vals[-1] + half


def plot_sweep(job: PlotJob):
    """Render the order-dependence map: one heatmap per quantity for a
    full sweep, or a single multi-curve figure for a fixed-alpha cut.
    Returns the list of files written."""
    table = job.load()

    if job.kind == KIND_LINECUT:
        out = job.output_image
        if not out.endswith(".png"):
            out = os.path.join(out, "linecut.png")
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        fig, ax = plt.subplots(figsize=(6.0, 4.0))
        beta = table["beta"]
        ax.plot(beta, table["P"], label="P")
        ax.plot(beta, table["P_prime"], label="P'")
        ax.plot(beta, table["P_d"], label="P_d")
        ax.axhline(0.0, color="0.7", lw=0.8)
        ax.set_xlabel("beta")
        ax.set_ylabel("population")
        ax.set_title(job.label())
        ax.legend()
        return [_save(fig, out)]

    os.makedirs(job.output_image, exist_ok=True)
    written = []
    for quantity in ("P", "P_prime", "P_d"):
        alphas, betas, grid = _grid(table, quantity)
        fig, ax = plt.subplots(figsize=(5.4, 4.2))
        image = ax.imshow(
            grid,
            origin="lower",
            aspect="auto",
            extent=(*_extent(betas), *_extent(alphas)),
        )
        fig.colorbar(image, ax=ax, label=quantity)
        ax.set_xlabel("beta")
        ax.set_ylabel("alpha")
        ax.set_title(f"{job.label()}: {quantity}")
        written.append(
            _save(fig, os.path.join(job.output_image, quantity + ".png"))
        )
    return written


def plot_dynamics(job: PlotJob) -> str:
    """Two stacked panels: dark-state populations on top, bright-state
    leakage below with the worst total bright population annotated."""
    table = job.load()
    t = table["t"]
    p_bright = table["P_B1"] + table["P_B2"]
    p_b_max = float(np.max(p_bright))

    fig, (top, bot) = plt.subplots(
        2, 1, sharex=True, figsize=(6.4, 5.6),
        gridspec_kw={"height_ratios": [2, 1]},
    )
    top.plot(t, table["P_D1"], label="P_D1")
    top.plot(t, table["P_D2"], label="P_D2")
    top.set_ylabel("dark populations")
    top.set_ylim(-0.05, 1.05)
    top.legend(loc="center left")
    top.set_title(job.label())

    bot.plot(t, table["P_B1"], label="P_B1")
    bot.plot(t, table["P_B2"], label="P_B2")
    bot.plot(t, p_bright, color="0.3", lw=0.9, label="P_B1+P_B2")
    bot.axhline(0.01, color="0.6", ls="--", lw=0.8)
    bot.axhline(p_b_max, color="C3", ls=":", lw=0.8)
    bot.text(
        t[0], p_b_max, f" P_B_max = {p_b_max:.3g}",
        va="bottom", ha="left", fontsize=8, color="C3",
    )
    bot.set_xlabel("t")
    bot.set_ylabel("bright populations")
    bot.legend(loc="upper left", fontsize=8)

    return _save(fig, job.output_image)
