"""Figure rendering for speedup tables.

Output is deterministic for a given CSV: fixed figure geometry, default
fonts, no timestamps (SVG metadata dates are stripped and the id hash salt
is pinned).
"""
from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .series import SpeedupSeries, read_speedup_csv

FIGSIZE = (6.4, 4.8)
DPI = 100


def render(csv_path: str, out_path: str, svg: bool = False,
           title: str | None = None) -> SpeedupSeries:
    """Render a speedup CSV into a PNG (or SVG) figure and return the series.

    Measured mean iterations are the solid blue curve, the ell/tau baseline
    is the dotted green one, and the predicted 1/(1-rho) appears dashed
    wherever the table carries it. The y axis is log scaled.
    """
    series = read_speedup_csv(csv_path)
    plt.rcParams["svg.hashsalt"] = "gossip-plots"
    fig, ax = plt.subplots(figsize=FIGSIZE, dpi=DPI)
    try:
        ax.plot(series.taus, series.mean_iters, "o-", color="tab:blue",
                label="measured iterations")
        ax.plot(series.taus, series.baseline, "s:", color="tab:green",
                label="linear speedup ell/tau")
        if series.has_theoretical:
            known = [(t, v) for t, v in zip(series.taus, series.theoretical)
                     if v is not None]
            ax.plot([t for t, _ in known], [v for _, v in known], "d--",
                    color="tab:purple", label="predicted 1/(1-rho)")
        ax.set_xlabel("block size tau (edges per step)")
        ax.set_ylabel("iterations to reach tolerance")
        ax.set_yscale("log")
        ax.set_title(title or os.path.splitext(os.path.basename(csv_path))[0])
        ax.grid(True, which="both", alpha=0.3)
        ax.legend()
        fig.tight_layout()
        if svg:
            fig.savefig(out_path, format="svg", metadata={"Date": None})
        else:
            fig.savefig(out_path, format="png")
    finally:
        plt.close(fig)
    return series
