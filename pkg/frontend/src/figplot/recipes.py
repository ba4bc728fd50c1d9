"""Figure recipes: which shipped table feeds which renderer, and how.

A recipe is pure configuration — column names, axis scales, labels and the
name of the packaged sample CSV.  All numbers that appear in a figure
(including overlay positions) come from the input files, never from code.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources


class RecipeError(ValueError):
    """Unknown preset or unusable recipe configuration."""


@dataclass(frozen=True)
class FigureRecipe:
    name: str
    kind: str                 # "heatmap" | "cuts" | "spectrogram"
    data: str                 # packaged CSV file name
    x: str = ""
    y: str = ""
    value: str = ""
    xscale: str = "linear"
    yscale: str = "linear"
    xlabel: str = ""
    ylabel: str = ""
    title: str = ""
    analytic: str | None = None   # packaged key,value overlay file


RECIPES = {
    "fig2a": FigureRecipe(
        name="fig2a", kind="heatmap", data="fig2a_sweep.csv",
        x="u", y="j", value="g2_site0", xscale="log", yscale="log",
        xlabel="interaction U / γ", ylabel="hopping J / γ",
        title="zero-delay photon correlation g²(0), weak-drive limit",
        analytic="analytic.csv"),
    "fig3": FigureRecipe(
        name="fig3", kind="spectrogram", data="fig3_spectrum.csv",
        x="omega", y="u", value="power",
        xlabel="emission frequency ω / γ",
        ylabel="interaction U / γ",
        title="fluctuation emission spectrum vs interaction",
        analytic="analytic.csv"),
    "fig4": FigureRecipe(
        name="fig4", kind="cuts", data="fig4_region.csv",
        x="j", xscale="log", yscale="log",
        xlabel="hopping J / γ", ylabel="interaction U / γ",
        title="photon-bunching region boundaries"),
    "fig5a": FigureRecipe(
        name="fig5a", kind="heatmap", data="fig5a_sweep.csv",
        x="j", y="delta", value="g2_site0", xscale="log",
        xlabel="hopping J / γ", ylabel="detuning Δ / γ",
        title="zero-delay photon correlation g²(0), two-level-system "
              "array"),
}


def get_recipe(name: str) -> FigureRecipe:
    try:
        return RECIPES[name]
    except KeyError:
        raise RecipeError(
            f"unknown preset {name!r}; available: "
            f"{', '.join(sorted(RECIPES))}") from None


def packaged_data_path(filename: str):
    """Path to a sample CSV shipped inside the package."""
    return resources.files("figplot").joinpath("data", filename)
