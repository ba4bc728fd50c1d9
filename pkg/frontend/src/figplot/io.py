"""Readers for the delimited tables produced by the simulation CLI.

Two formats are consumed:

* sweep/spectrum/region tables: '#'-prefixed ``key = value`` metadata
  lines, a header row, then comma-separated data rows;
* flat key,value files (analytic quantities used for overlay positions).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class TableFormatError(ValueError):
    """Input file does not follow the expected delimited-table layout."""


@dataclass
class Table:
    """Metadata plus columnar rows from one CSV file."""

    metadata: dict
    columns: tuple
    rows: list = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise TableFormatError(
                f"no column {name!r}; available: {', '.join(self.columns)}")
        k = self.columns.index(name)
        values = [row[k] for row in self.rows]
        if all(isinstance(v, float) for v in values):
            return np.array(values, dtype=float)
        return np.array(values, dtype=object)

    def meta_float(self, key: str) -> float:
        try:
            return float(self.metadata[key])
        except KeyError:
            raise TableFormatError(f"metadata key {key!r} missing") from None
        except ValueError:
            raise TableFormatError(
                f"metadata key {key!r} is not numeric: "
                f"{self.metadata[key]!r}") from None


def read_table(path: str) -> Table:
    meta, columns, rows = {}, None, []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, sep, val = line[1:].partition("=")
                if not sep:
                    raise TableFormatError(
                        f"{path}:{lineno}: metadata line without '='")
                meta[key.strip()] = val.strip()
            elif columns is None:
                columns = tuple(line.split(","))
            else:
                cells = []
                for c in line.split(","):
                    try:
                        cells.append(float(c))
                    except ValueError:
                        cells.append(c)
                if len(cells) != len(columns):
                    raise TableFormatError(
                        f"{path}:{lineno}: {len(cells)} cells for "
                        f"{len(columns)} columns")
                rows.append(cells)
    if columns is None:
        raise TableFormatError(f"{path}: no header row found")
    return Table(metadata=meta, columns=columns, rows=rows)


def read_keyvalue(path: str) -> dict:
    """Flat name,value file; numeric values are converted to float."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            key, sep, val = line.partition(",")
            if not sep:
                raise TableFormatError(
                    f"{path}:{lineno}: expected 'name,value'")
            try:
                out[key] = float(val)
            except ValueError:
                out[key] = val
    return out


def pivot(table: Table, x: str, y: str, value: str):
    """Long-format rows -> (x_values, y_values, grid[y, x]).

    Requires the rows to cover a complete rectangular grid; missing cells
    are an error (the sweep CLI always emits full grids, with failed rows
    carrying placeholder values and an error status).
    """
    xs = np.unique(table.column(x))
    ys = np.unique(table.column(y))
    grid = np.full((len(ys), len(xs)), np.nan)
    xi = {v: i for i, v in enumerate(xs)}
    yi = {v: i for i, v in enumerate(ys)}
    for xv, yv, vv in zip(table.column(x), table.column(y),
                          table.column(value)):
        grid[yi[yv], xi[xv]] = vv
    if np.any(np.isnan(grid)):
        raise TableFormatError(
            f"rows do not cover a full ({x}, {y}) grid")
    return xs, ys, grid
