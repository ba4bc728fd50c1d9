"""Command-line entry point: render a figure preset to a PNG file.

Exit codes: 0 success, 1 usage or recipe error, 2 data/render failure.
"""

from __future__ import annotations

import argparse
import sys

from .io import TableFormatError, read_keyvalue, read_table
from .recipes import RECIPES, RecipeError, get_recipe, packaged_data_path
from .render import render, save_png


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="figplot",
        description="Render publication-style figures from simulation "
                    "CSV tables.")
    parser.add_argument("preset", help="figure preset: "
                        + ", ".join(sorted(RECIPES)))
    parser.add_argument("-o", "--output", default=None,
                        help="output PNG path (default: <preset>.png)")
    parser.add_argument("--data", default=None,
                        help="CSV table to plot instead of the packaged "
                             "sample data")
    parser.add_argument("--analytic", default=None,
                        help="key,value overlay file instead of the "
                             "packaged one")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        recipe = get_recipe(args.preset)
    except RecipeError as exc:
        print(f"figplot: {exc}", file=sys.stderr)
        return 1
    data_path = args.data or packaged_data_path(recipe.data)
    analytic = None
    analytic_path = args.analytic or (
        packaged_data_path(recipe.analytic) if recipe.analytic else None)
    try:
        table = read_table(str(data_path))
        if analytic_path is not None:
            analytic = read_keyvalue(str(analytic_path))
        fig = render(recipe, table, analytic)
        out = args.output or f"{recipe.name}.png"
        save_png(fig, out)
    except (TableFormatError, RecipeError, OSError) as exc:
        print(f"figplot: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
