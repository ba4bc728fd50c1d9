"""figplot: publication-style figures from simulation CSV tables."""

__version__ = "0.1.0"

from .io import Table, TableFormatError, read_keyvalue, read_table
from .recipes import RECIPES, FigureRecipe, RecipeError, get_recipe
from .render import render, save_png

__all__ = [
    "Table", "TableFormatError", "read_keyvalue", "read_table",
    "RECIPES", "FigureRecipe", "RecipeError", "get_recipe",
    "render", "save_png", "__version__",
]
