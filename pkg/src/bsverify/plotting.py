"""SVG rendering of value curves and surfaces.

Figures go through matplotlib's SVG writer; glyphs are embedded as
paths so files carry no external font or image references, and the hash salt
and date metadata are pinned so identical inputs give identical bytes.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

STYLE = {
    "svg.fonttype": "path",
    "svg.hashsalt": "bsverify",
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.figsize": (6.0, 4.2),
}


def _save(fig, target) -> None:
    fig.savefig(target, format="svg", metadata={"Date": None}, bbox_inches="tight")
    plt.close(fig)


def curve_figure(spots, values, payoffs, *, kind: str, strike: float, tenor: float, target) -> None:
    """Value against spot with the payoff dashed underneath."""
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots()
        ax.plot(spots, values, color="tab:blue", lw=1.6, label=f"{kind} value, T-t={tenor:g}")
        ax.plot(spots, payoffs, color="0.3", lw=1.0, ls="--", label="payoff")
        ax.axvline(strike, color="0.7", lw=0.6)
        ax.set_xlabel("stock price S")
        ax.set_ylabel("option value V")
        ax.set_xlim(spots[0], spots[-1])
        ax.legend(frameon=False)
        _save(fig, target)


def surface_figure(spots, tenors, values, payoffs, *, kind: str, target) -> None:
    """Value over (spot, time to expiry); the payoff is dashed along T-t = 0."""
    with plt.rc_context(STYLE):
        fig = plt.figure(figsize=(6.4, 4.8))
        ax = fig.add_subplot(projection="3d")
        grid_s, grid_t = np.meshgrid(spots, tenors)
        ax.plot_surface(grid_s, grid_t, values, cmap="viridis", linewidth=0, antialiased=False)
        ax.plot(spots, np.zeros_like(spots), payoffs, color="k", lw=1.0, ls="--")
        ax.set_xlabel("stock price S")
        ax.set_ylabel("time to expiry T-t")
        ax.set_zlabel(f"{kind} value V")
        _save(fig, target)
