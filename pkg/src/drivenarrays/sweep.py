"""Deterministic parameter sweeps and delimited-table serialization.

A SweepSpec is a validated, fully deterministic execution plan; run_sweep
evaluates its grid row by row (errors are captured per row, never abort
the sweep) and write_table serializes the result as CSV with '#'-prefixed
metadata lines or as JSON with the same schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from . import __version__ as TOOL_VERSION
from .hilbert import build_fock_space, build_momentum_basis, site_operator
from .liouville import liouvillian, steady_state
from .models import (BHParams, JCHParams, bh_hamiltonian, jch_hamiltonian,
                     resonance_detuning_bh, resonance_detuning_jch)
from .observables import expectation, g2_local
from .weakdrive import weakdrive_g2, weakdrive_g2_momentum


class SweepSpecError(ValueError):
    """Invalid sweep configuration; the message names the offending field."""


def parse_grid(text: str) -> np.ndarray:
    """Parse 'a:b:N' (linear) or 'a:b:Nlog' (logarithmic) grid syntax."""
    parts = text.split(":")
    if len(parts) != 3:
        raise SweepSpecError(f"grid {text!r} is not of the form a:b:N[log]")
    try:
        a, b = float(parts[0]), float(parts[1])
        log = parts[2].endswith("log")
        n = int(parts[2][:-3] if log else parts[2])
    except ValueError as e:
        raise SweepSpecError(f"grid {text!r}: {e}") from None
    if n < 1:
        raise SweepSpecError(f"grid {text!r}: need at least one point")
    if n == 1:
        return np.array([a])
    if a >= b:
        raise SweepSpecError(f"grid {text!r}: start must be below stop")
    if log:
        if a <= 0:
            raise SweepSpecError(f"grid {text!r}: log grid needs positive start")
        return np.logspace(np.log10(a), np.log10(b), n)
    return np.linspace(a, b, n)


@dataclass(frozen=True)
class SweepSpec:
    """Deterministic grid sweep over model parameters."""

    model: str                       # "bh" or "jch"
    M: int
    n_max: int
    axes: tuple                      # ((name, grid array), ...) outermost first
    fixed: dict
    weakdrive: bool
    Omega: float | None
    observables: tuple = ("g2_site0", "n_site0")
    output: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.model not in ("bh", "jch"):
            raise SweepSpecError(f"unknown model {self.model!r}")
        if self.weakdrive and self.Omega is not None:
            raise SweepSpecError(
                "weakdrive and a finite drive amplitude are mutually exclusive")
        if not self.weakdrive and self.Omega is None:
            raise SweepSpecError("need either weakdrive or a drive amplitude")
        if not self.axes:
            raise SweepSpecError("no sweep axes given")
        for name, grid in self.axes:
            g = np.asarray(grid)
            if g.size == 0 or (g.size > 1 and np.any(np.diff(g) <= 0)):
                raise SweepSpecError(f"axis {name!r} grid must be strictly "
                                     "increasing and non-empty")
        known = {"j", "u", "delta", "g", "delta_c"}
        for name, _ in self.axes:
            if name not in known:
                raise SweepSpecError(f"unknown axis {name!r}")
        for key in self.fixed:
            if key not in known:
                raise SweepSpecError(f"unknown parameter {key!r}")


@dataclass
class SweepTable:
    """Header metadata plus result rows in grid order."""

    metadata: dict
    columns: tuple
    rows: list = field(default_factory=list)


def _row_params(spec: SweepSpec, coords: dict):
    vals = dict(spec.fixed)
    vals.update(coords)
    omega = 0.0 if spec.weakdrive else spec.Omega
    if spec.model == "bh":
        return BHParams(M=spec.M, J=vals.get("j", 0.0), U=vals.get("u", 0.0),
                        Omega=omega, Delta_c=vals.get("delta_c"))
    return JCHParams(M=spec.M, J=vals.get("j", 0.0), g=vals.get("g", 0.0),
                     Delta=vals.get("delta", 0.0), Omega=omega,
                     Delta_c=vals.get("delta_c"))


def evaluate_point(spec: SweepSpec, coords: dict) -> dict:
    """Observables at a single grid point; also used by single-point CLI calls."""
    params = _row_params(spec, coords)
    space = build_fock_space(spec.M, spec.n_max,
                             has_tls=(spec.model == "jch"))
    out = {}
    if spec.weakdrive:
        if spec.M > 3:
            basis = build_momentum_basis(space)
            res = weakdrive_g2_momentum(params, basis)
        else:
            res = weakdrive_g2(params, space)
        out["g2_site0"] = res.converged_g2
        out["n_site0"] = res.population
        out["status"] = "ok" if res.converged else "not-converged"
    else:
        if spec.model == "bh":
            H = bh_hamiltonian(params, space)
        else:
            H = jch_hamiltonian(params, space)
        ops = [site_operator(space, j, "annihilate") for j in range(spec.M)]
        L = liouvillian(H, ops, [params.gamma_p] * spec.M)
        rho = steady_state(L)
        n_op = site_operator(space, 0, "number")
        out["n_site0"] = expectation(rho, n_op).real
        try:
            out["g2_site0"] = g2_local(rho, space, 0)
        except ValueError:
            out["g2_site0"] = 0.0
        out["status"] = "ok"
    if spec.model == "bh":
        out["delta_c"] = params.resolved_detuning()
    else:
        out["delta_c"] = params.resolved_detuning(space)
    return out


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Evaluate the grid in deterministic row order with per-row status."""
    axis_names = [name for name, _ in spec.axes]
    grids = [np.asarray(g, dtype=float) for _, g in spec.axes]
    meta = {
        "tool": "drivenarrays",
        "version": TOOL_VERSION,
        "model": spec.model,
        "M": spec.M,
        "n_max": spec.n_max,
        "drive": "weakdrive-limit" if spec.weakdrive else f"omega={spec.Omega!r}",
        "gamma_p": 1.0,
        "dissipation": "photon loss only",
    }
    for k, v in sorted(spec.fixed.items()):
        meta[f"fixed_{k}"] = v
    columns = tuple(axis_names) + tuple(spec.observables) + ("status",)
    table = SweepTable(metadata=meta, columns=columns)
    shape = [len(g) for g in grids]
    for flat in range(int(np.prod(shape))):
        idx = np.unravel_index(flat, shape)
        coords = {name: float(grids[k][idx[k]])
                  for k, name in enumerate(axis_names)}
        try:
            res = evaluate_point(spec, coords)
            row = [coords[n] for n in axis_names]
            row += [res.get(obs, 0.0) for obs in spec.observables]
            row.append(res["status"])
        except Exception as e:  # noqa: BLE001 - per-row capture is the contract
            row = [coords[n] for n in axis_names]
            row += [0.0] * len(spec.observables)
            row.append(f"error:{type(e).__name__}")
        table.rows.append(row)
    return table


def format_float(x: float) -> str:
    """17 significant digits: round-trip exact for IEEE doubles."""
    return format(float(x), ".17g")


def write_table(table: SweepTable, path: str, fmt: str = "csv") -> None:
    if fmt == "csv":
        lines = [f"# {k} = {v}" for k, v in table.metadata.items()]
        lines.append(",".join(table.columns))
        for row in table.rows:
            cells = [c if isinstance(c, str) else format_float(c) for c in row]
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        doc = {"metadata": table.metadata, "columns": list(table.columns),
               "rows": [[c if isinstance(c, str) else float(c) for c in row]
                        for row in table.rows]}
        text = json.dumps(doc, indent=1, sort_keys=False) + "\n"
    else:
        raise SweepSpecError(f"unknown output format {fmt!r}")
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as e:
        raise OSError(f"cannot write table to {path}: {e}") from e


def read_table(path: str) -> SweepTable:
    """Read back a CSV written by write_table (round-trip exact)."""
    meta, columns, rows = {}, None, []
    with open(path) as fh:
        for line in fh:
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
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
                rows.append(cells)
    return SweepTable(metadata=meta, columns=columns or (), rows=rows)
