"""Command-line interface: steady-state solves, parameter sweeps, spectra,
weak-drive limits, analytic values and bunching regions.

All rates are dimensionless multiples of the photon loss rate (gamma_p = 1
by convention; there is deliberately no flag to change it).  Exit codes:
0 ok, 1 usage error, 2 numerical failure, 3 partial (some rows errored).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .analytics import (critical_point, g2_closed_form, g2_large_u_asymptote,
                        g2_unity_boundary, hardcore_population,
                        line_crossing_ratio)
from .hilbert import build_fock_space, site_operator
from .liouville import liouvillian, steady_state
from .models import (BHParams, JCHParams, bh_hamiltonian, jch_hamiltonian,
                     resonance_detuning_bh)
from .observables import autocorrelation, emission_spectrum
from .sweep import (SweepSpec, SweepSpecError, SweepTable, format_float,
                    parse_grid, run_sweep, write_table)
from .weakdrive import bunching_region

# Parameter choices behind the published figures.  Grid extents that are
# not stated in the text are documented choices.
PRESETS = {
    "fig2a": dict(cmd="sweep", model="bh", M=2, nmax=4, weakdrive=True,
                  j_grid="0.0316:31.6:40log", u_grid="0.0316:31.6:40log"),
    "fig2b": dict(cmd="weakdrive", model="bh", M=2, nmax=4, weakdrive=True,
                  u_grid="0.1:1000:60log", j="10"),
    "fig3": dict(cmd="spectrum", model="bh", M=2, nmax=4, omega=0.3,
                 j="10", u_grid="5:20:20", t_max=20.0, samples=4096),
    "fig4": dict(cmd="region", model="bh", nmax=3, weakdrive=True,
                 j="10", u_grid="0.1:1000:40log", sizes="3,4,5"),
    "fig5a": dict(cmd="sweep", model="jch", M=2, nmax=3, weakdrive=True,
                  g="10", j_grid="0.1:100:30log", delta_grid="-20:5:30"),
    "fig5b": dict(cmd="spectrum", model="jch", M=2, nmax=3, omega=0.3,
                  g="10", delta="0", j_grid="0.5:30:20log",
                  t_max=20.0, samples=4096),
}


def _read_config(path: str) -> dict:
    """Flat key = value file mirroring the CLI flags."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SweepSpecError(f"{path}:{lineno}: expected key = value")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivenarrays",
        description="Driven-dissipative resonator array simulator "
                    "(rates in units of gamma_p)")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, model=True):
        if model:
            p.add_argument("--model", choices=["bh", "jch"], default="bh")
            p.add_argument("--M", type=int, default=2, help="number of sites")
            p.add_argument("--nmax", type=int, default=4,
                           help="photon cutoff per site")
            p.add_argument("--j", type=float, help="hopping J")
            p.add_argument("--u", type=float, help="Kerr nonlinearity U (bh)")
            p.add_argument("--g", type=float, help="TLS coupling g (jch)")
            p.add_argument("--delta", type=float,
                           help="atom-resonator detuning Delta (jch)")
            p.add_argument("--delta-c", type=float, dest="delta_c",
                           help="laser detuning; omitted = two-photon resonance")
            p.add_argument("--omega", type=float, help="drive amplitude Omega")
        p.add_argument("--config", help="flat key=value config file")
        p.add_argument("-o", "--output", help="output file path")
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--preset", choices=sorted(PRESETS),
                       help="parameter shortcut for a published figure")

    p = sub.add_parser("ness", help="single steady-state solve")
    add_common(p)

    p = sub.add_parser("sweep", help="grid sweep of steady-state observables")
    add_common(p)
    p.add_argument("--j-grid", dest="j_grid", help="a:b:N[log]")
    p.add_argument("--u-grid", dest="u_grid", help="a:b:N[log]")
    p.add_argument("--delta-grid", dest="delta_grid", help="a:b:N[log]")
    p.add_argument("--weakdrive", action="store_true",
                   help="infinitesimal-drive limit instead of a finite Omega")

    p = sub.add_parser("spectrum", help="emission-spectrum scan")
    add_common(p)
    p.add_argument("--u-grid", dest="u_grid", help="scan axis for bh")
    p.add_argument("--j-grid", dest="j_grid", help="scan axis for jch")
    p.add_argument("--t-max", dest="t_max", type=float, default=20.0)
    p.add_argument("--samples", type=int, default=4096)
    p.add_argument("--raw", action="store_true",
                   help="also keep the unsubtracted power column")

    p = sub.add_parser("weakdrive", help="weak-drive limit of g2")
    add_common(p)
    p.add_argument("--u-grid", dest="u_grid")
    p.add_argument("--j-grid", dest="j_grid")
    p.add_argument("--weakdrive", action="store_true", help=argparse.SUPPRESS)

    p = sub.add_parser("analytic", help="closed-form dimer values")
    add_common(p)
    p.add_argument("--locate-critical", action="store_true",
                   help="numerically locate the bunching onset")

    p = sub.add_parser("region", help="bunched-region extent over a J grid")
    add_common(p)
    p.add_argument("--u-grid", dest="u_grid", default="0.1:1000:40log")
    p.add_argument("--j-grid", dest="j_grid")
    p.add_argument("--sizes", default="2", help="comma-separated site counts")
    p.add_argument("--weakdrive", action="store_true", help=argparse.SUPPRESS)
    return parser


def _apply_preset_and_config(args):
    if getattr(args, "preset", None):
        preset = dict(PRESETS[args.preset])
        want = preset.pop("cmd")
        if args.command != want:
            raise SweepSpecError(
                f"preset {args.preset!r} belongs to subcommand {want!r}")
        for key, val in preset.items():
            if key == "weakdrive":
                if not getattr(args, "weakdrive", False):
                    args.weakdrive = True
                continue
            if getattr(args, key, None) in (None, False):
                setattr(args, key, type_cast(key, val))
    if getattr(args, "config", None):
        known = vars(args)
        for key, val in _read_config(args.config).items():
            if key not in known:
                raise SweepSpecError(f"unknown config key {key!r}")
            if known[key] in (None, False):
                setattr(args, key, type_cast(key, val))
    return args


def type_cast(key: str, val):
    if isinstance(val, (int, float, bool)):
        return val
    if key in ("M", "nmax", "samples"):
        return int(val)
    if key in ("j", "u", "g", "delta", "delta_c", "omega", "t_max"):
        return float(val)
    if key == "weakdrive":
        return val.lower() in ("1", "true", "yes", "on")
    return val


def _axes_from_args(args, names):
    axes = []
    for name in names:
        grid = getattr(args, f"{name}_grid".replace("delta_c", "deltac"), None)
        if grid:
            axes.append((name if name != "delta" else "delta",
                         parse_grid(grid)))
    return axes


def _fixed_from_args(args):
    fixed = {}
    for key in ("j", "u", "g", "delta", "delta_c"):
        val = getattr(args, key, None)
        if val is not None:
            fixed[key] = val
    return fixed


def _spec_from_args(args, weakdrive: bool) -> SweepSpec:
    axes = _axes_from_args(args, ["j", "u", "delta"])
    fixed = _fixed_from_args(args)
    for name, _ in axes:
        fixed.pop(name, None)
    return SweepSpec(model=args.model, M=args.M, n_max=args.nmax,
                     axes=tuple(axes), fixed=fixed, weakdrive=weakdrive,
                     Omega=None if weakdrive else args.omega,
                     output=args.output, fmt=args.format)


def _emit(table: SweepTable, args) -> int:
    if args.output:
        write_table(table, args.output, args.format)
        print(f"wrote {len(table.rows)} rows to {args.output}")
    else:
        print(",".join(table.columns))
        for row in table.rows:
            print(",".join(c if isinstance(c, str) else format_float(c)
                           for c in row))
    bad = [r for r in table.rows if str(r[-1]).startswith("error")]
    return 3 if bad else 0


def _cmd_ness(args) -> int:
    if args.omega is None:
        raise SweepSpecError("ness needs a finite --omega")
    spec = SweepSpec(model=args.model, M=args.M, n_max=args.nmax,
                     axes=(("j", np.array([args.j if args.j is not None else 0.0])),),
                     fixed={k: v for k, v in _fixed_from_args(args).items()
                            if k != "j"},
                     weakdrive=False, Omega=args.omega)
    table = run_sweep(spec)
    return _emit(table, args)


def _cmd_sweep(args) -> int:
    if args.weakdrive and args.omega is not None:
        raise SweepSpecError("--weakdrive and --omega are mutually exclusive")
    spec = _spec_from_args(args, args.weakdrive)
    return _emit(run_sweep(spec), args)


_cmd_weakdrive = _cmd_sweep  # same machinery, weak-drive limit forced


def _spectrum_rows(args):
    is_jch = args.model == "jch"
    scan_name = "j" if is_jch else "u"
    grid_text = args.j_grid if is_jch else args.u_grid
    if not grid_text:
        raise SweepSpecError(f"spectrum scan needs --{scan_name}-grid")
    grid = parse_grid(grid_text)
    space = build_fock_space(args.M, args.nmax, has_tls=is_jch)
    rows = []
    for val in grid:
        if is_jch:
            params = JCHParams(M=args.M, J=val, g=args.g, Delta=args.delta,
                               Omega=args.omega, Delta_c=args.delta_c)
            H = jch_hamiltonian(params, space)
        else:
            params = BHParams(M=args.M, J=args.j, U=val, Omega=args.omega,
                              Delta_c=args.delta_c)
            H = bh_hamiltonian(params, space)
        ops = [site_operator(space, j, "annihilate") for j in range(args.M)]
        L = liouvillian(H, ops, [1.0] * args.M)
        rho = steady_state(L)
        series = autocorrelation(rho, L, space, 0, args.t_max, args.samples)
        sub = emission_spectrum(series, subtract_coherent=True)
        raw = emission_spectrum(series, subtract_coherent=False)
        for k in range(len(sub.omega_grid)):
            rows.append([float(val), float(sub.omega_grid[k]),
                         float(sub.power[k]), float(raw.power[k]), "ok"])
    return scan_name, rows


def _cmd_spectrum(args) -> int:
    if args.omega is None:
        raise SweepSpecError("spectrum needs a finite --omega")
    scan_name, rows = _spectrum_rows(args)
    meta = {"tool": "drivenarrays", "version": __version__,
            "model": args.model, "M": args.M, "n_max": args.nmax,
            "drive": f"omega={args.omega!r}", "gamma_p": 1.0,
            "t_max": args.t_max, "samples": args.samples,
            "scan_axis": scan_name,
            "dissipation": "photon loss only"}
    for key in ("j", "u", "g", "delta"):
        val = getattr(args, key, None)
        if val is not None:
            meta[f"fixed_{key}"] = val
    table = SweepTable(metadata=meta,
                       columns=(scan_name, "omega", "power", "power_raw",
                                "status"),
                       rows=rows)
    return _emit(table, args)


def _cmd_analytic(args) -> int:
    cp = critical_point(locate=args.locate_critical)
    lines = [
        ("critical_J", cp.J_c),
        ("critical_U", cp.U_c),
        ("critical_source", cp.source),
        ("line_crossing_ratio", line_crossing_ratio()),
    ]
    if cp.matches_candidate:
        lines.append(("critical_matches", cp.matches_candidate))
    if args.j is not None and args.u is not None:
        lines += [
            ("delta_c", resonance_detuning_bh(args.j, args.u)),
            ("g2_closed_form", g2_closed_form(args.j, args.u)),
            ("g2_large_u_asymptote", g2_large_u_asymptote(args.j, args.u)),
        ]
    if args.u is not None:
        lines.append(("g2_unity_boundary_J", g2_unity_boundary(args.u)))
    if args.omega is not None and args.j is not None:
        lines.append(("hardcore_population",
                      hardcore_population(args.omega, args.j)))
    text = "\n".join(f"{k},{v if isinstance(v, str) else format_float(v)}"
                     for k, v in lines) + "\n"
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_region(args) -> int:
    sizes = [int(s) for s in str(args.sizes).split(",")]
    u_grid = parse_grid(args.u_grid)
    j_values = parse_grid(args.j_grid) if args.j_grid else [args.j]
    from .hilbert import build_momentum_basis
    rows = []
    for M in sizes:
        nmax = args.nmax if M <= 3 else min(args.nmax, 3)
        space = build_fock_space(M, nmax)
        basis = build_momentum_basis(space) if M > 3 else None
        for J in j_values:
            params = BHParams(M=M, J=float(J), U=0.0, Omega=0.0)
            reg = bunching_region(params, u_grid, space=space, basis=basis)
            rows.append([float(M), float(J),
                         0.0 if reg.empty else reg.U_LHS or 0.0,
                         0.0 if reg.empty else (reg.U_RHS or 0.0),
                         reg.peak_g2 or 0.0,
                         "empty" if reg.empty else (reg.note or "ok")])
    meta = {"tool": "drivenarrays", "version": __version__, "model": "bh",
            "n_max": args.nmax, "drive": "weakdrive-limit", "gamma_p": 1.0,
            "dissipation": "photon loss only"}
    table = SweepTable(metadata=meta,
                       columns=("M", "j", "u_lhs", "u_rhs", "peak_g2",
                                "status"),
                       rows=rows)
    return _emit(table, args)


COMMANDS = {
    "ness": _cmd_ness,
    "sweep": _cmd_sweep,
    "spectrum": _cmd_spectrum,
    "weakdrive": _cmd_weakdrive,
    "analytic": _cmd_analytic,
    "region": _cmd_region,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args = _apply_preset_and_config(args)
        if getattr(args, "command", None) == "weakdrive":
            args.weakdrive = True
        code = COMMANDS[args.command](args)
    except (SweepSpecError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (RuntimeError, ArithmeticError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2
    return code


if __name__ == "__main__":
    sys.exit(main())
