"""Matplotlib renderers for the three figure kinds.

All renderers consume a :class:`figplot.io.Table` (plus an optional
key,value overlay dict) and return a matplotlib Figure.  Overlay marker
positions are read from the input files; nothing is computed here beyond
plotting transforms (logs, pivots, per-row maxima of plotted data).
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import TwoSlopeNorm

from .io import Table, pivot
from .recipes import FigureRecipe, RecipeError

_FIGSIZE = (6.0, 4.5)
_DPI = 150


def render(recipe: FigureRecipe, table: Table, analytic: dict | None = None):
    if recipe.kind == "heatmap":
        return _render_heatmap(recipe, table, analytic or {})
    if recipe.kind == "spectrogram":
        return _render_spectrogram(recipe, table, analytic or {})
    if recipe.kind == "cuts":
        return _render_cuts(recipe, table)
    raise RecipeError(f"unknown figure kind {recipe.kind!r}")


def save_png(fig, path: str) -> None:
    """Write a byte-deterministic PNG (fixed dpi, fixed metadata)."""
    fig.savefig(path, format="png", dpi=_DPI,
                metadata={"Software": "figplot"})
    plt.close(fig)


def _new_axes(recipe: FigureRecipe):
    fig, ax = plt.subplots(figsize=_FIGSIZE, dpi=_DPI)
    ax.set_xscale(recipe.xscale)
    ax.set_yscale(recipe.yscale)
    ax.set_xlabel(recipe.xlabel)
    ax.set_ylabel(recipe.ylabel)
    ax.set_title(recipe.title)
    return fig, ax


def _render_heatmap(recipe, table, analytic):
    xs, ys, grid = pivot(table, recipe.x, recipe.y, recipe.value)
    # diverging scale in log10(g2), centred on g2 = 1 so bunching and
    # antibunching get opposite hues
    logg = np.log10(np.maximum(grid, 1e-300))
    span = max(np.max(np.abs(logg)), 1e-3)
    norm = TwoSlopeNorm(vcenter=0.0, vmin=-span, vmax=span)
    fig, ax = _new_axes(recipe)
    mesh = ax.pcolormesh(xs, ys, logg, norm=norm, cmap="RdBu_r",
                         shading="nearest")
    fig.colorbar(mesh, ax=ax, label="log₁₀ g²(0)")
    if np.any(logg > 0) and np.any(logg < 0):
        ax.contour(xs, ys, logg, levels=[0.0], colors="k",
                   linewidths=1.0, linestyles="--")
    if "critical_J" in analytic and "critical_U" in analytic:
        ax.plot([analytic["critical_U"]], [analytic["critical_J"]],
                marker="o", color="k", markersize=6, zorder=5)
        ax.annotate("bunching onset",
                    (analytic["critical_U"], analytic["critical_J"]),
                    textcoords="offset points", xytext=(6, 6), fontsize=8)
    fig.tight_layout()
    return fig


def _render_spectrogram(recipe, table, analytic):
    xs, ys, grid = pivot(table, recipe.x, recipe.y, recipe.value)
    if len(ys) == 1:
        # single scan slice: fall back to an ordinary line plot
        fig, ax = _new_axes(recipe)
        ax.set_yscale("log")
        ax.set_ylabel("spectral power (arb.)")
        ax.plot(xs, np.maximum(grid[0], 1e-300), color="C0")
        ax.set_title(f"{recipe.title} ({recipe.y} = {ys[0]:g})")
        fig.tight_layout()
        return fig
    fig, ax = _new_axes(recipe)
    logp = np.log10(np.maximum(grid, 1e-300))
    mesh = ax.pcolormesh(xs, ys, logp, cmap="magma", shading="nearest",
                         vmin=np.max(logp) - 8, vmax=np.max(logp))
    fig.colorbar(mesh, ax=ax, label="log₁₀ power (arb.)")
    # per-slice ridge: frequency of maximum power on the positive side
    pos = xs > 0
    ridge = xs[pos][np.argmax(grid[:, pos], axis=1)]
    ax.plot(ridge, ys, color="w", lw=0.8, ls=":")
    if "line_crossing_ratio" in analytic and "fixed_j" in table.metadata:
        u_cross = analytic["line_crossing_ratio"] * table.meta_float(
            "fixed_j")
        if ys.min() <= u_cross <= ys.max():
            ax.axhline(u_cross, color="c", lw=1.0, ls="--")
            ax.annotate("line crossing", (xs.min(), u_cross),
                        textcoords="offset points", xytext=(4, 4),
                        color="c", fontsize=8)
    fig.tight_layout()
    return fig


def _render_cuts(recipe, table):
    fig, ax = _new_axes(recipe)
    sizes = sorted(set(table.column("M")))
    status = table.column("status")
    plotted = False
    for i, m in enumerate(sizes):
        sel = (table.column("M") == m) & (status == "ok")
        if not np.any(sel):
            continue
        j = table.column("j")[sel]
        lo = table.column("u_lhs")[sel]
        hi = table.column("u_rhs")[sel]
        color = f"C{i}"
        ax.fill_between(j, lo, hi, alpha=0.25, color=color)
        ax.plot(j, lo, color=color, label=f"M = {int(m)} sites")
        ax.plot(j, hi, color=color)
        plotted = True
    if not plotted:
        raise RecipeError("no bunching-region rows with status 'ok'")
    ax.legend(loc="upper left")
    fig.tight_layout()
    return fig
