"""Infinitesimal-drive limit of steady-state photon statistics.

The weak-drive steady state is the eigenvector of the non-Hermitian
effective Hamiltonian with eigenvalue closest to zero, evaluated along a
decreasing sequence of drive amplitudes until g2 converges.  A
zero-momentum sector solver gives access to chains of up to M = 7 sites.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .hilbert import (FockSpace, MomentumBasis, build_fock_space,
                      build_momentum_basis, fix_phase, site_operator)
from .models import (BHParams, JCHParams, bh_hamiltonian, effective_hamiltonian,
                     jch_hamiltonian)
from .observables import g2_pure

DEFAULT_OMEGA_SEQUENCE = (1e-2, 1e-3, 1e-4)
DEFAULT_TOL = 1e-3
DEGENERACY_TOL = 1e-12


class DegenerateStationaryStateError(RuntimeError):
    """Two eigenvalues of H_eff share the minimal modulus."""


def stationary_state(H_eff, dense: np.ndarray | None = None):
    """Eigenvector of H_eff with minimum-modulus eigenvalue.

    Accepts an OperatorMatrix or a dense array (e.g. a momentum-sector
    block).  Returns (state, eigenvalue); the state is normalized with the
    first-nonzero-component-real-positive phase convention.
    """
    A = dense if dense is not None else H_eff.dense()
    w, V = scipy.linalg.eig(A)
    order = np.argsort(np.abs(w))
    if len(w) > 1 and abs(abs(w[order[0]]) - abs(w[order[1]])) < DEGENERACY_TOL:
        raise DegenerateStationaryStateError(
            f"two eigenvalues with modulus {abs(w[order[0]]):.3e}")
    k = order[0]
    v = V[:, k]
    v = fix_phase(v / np.linalg.norm(v))
    return v, complex(w[k])


@dataclass(frozen=True)
class WeakDriveResult:
    """g2 along a decreasing drive sequence and its converged limit."""

    omega_sequence: tuple
    g2_sequence: tuple
    converged: bool
    converged_g2: float
    population: float      # per-site <a^dag a> at the smallest drive


def _heff_with_drive(params, space: FockSpace, omega: float):
    if isinstance(params, BHParams):
        p = BHParams(M=params.M, J=params.J, U=params.U, Omega=omega,
                     Delta_c=params.resolved_detuning(), gamma_p=params.gamma_p)
        H = bh_hamiltonian(p, space)
    elif isinstance(params, JCHParams):
        p = JCHParams(M=params.M, J=params.J, g=params.g, Delta=params.Delta,
                      Omega=omega, Delta_c=params.resolved_detuning(space),
                      gamma_p=params.gamma_p)
        H = jch_hamiltonian(p, space)
    else:
        raise TypeError(f"unsupported parameter type {type(params).__name__}")
    return effective_hamiltonian(H, space, params.gamma_p)


def _run_sequence(solve_g2, omega_sequence, tol):
    omegas = tuple(omega_sequence)
    if len(omegas) < 2 or any(b >= a for a, b in zip(omegas, omegas[1:])) \
            or omegas[-1] <= 0:
        raise ValueError("omega_sequence must be strictly decreasing and positive")
    g2s, pop = [], 0.0
    converged = False
    for k, om in enumerate(omegas):
        g2, pop = solve_g2(om)
        g2s.append(g2)
        if k > 0 and abs(g2s[-1] - g2s[-2]) < tol * abs(g2s[-1]):
            converged = True
            omegas = omegas[:k + 1]
            break
    return WeakDriveResult(omega_sequence=tuple(omegas), g2_sequence=tuple(g2s),
                           converged=converged, converged_g2=g2s[-1],
                           population=pop)


def weakdrive_g2(params, space: FockSpace,
                 omega_sequence=DEFAULT_OMEGA_SEQUENCE,
                 tol: float = DEFAULT_TOL) -> WeakDriveResult:
    """Weak-drive limit of g2 from the full-space effective Hamiltonian."""
    n_site = site_operator(space, 0, "number").matrix

    def solve(om):
        H_eff = _heff_with_drive(params, space, om)
        v, _ = stationary_state(H_eff)
        pop = np.vdot(v, n_site @ v).real
        return g2_pure(v, space, 0), pop

    return _run_sequence(solve, omega_sequence, tol)


def weakdrive_g2_momentum(params, basis: MomentumBasis,
                          omega_sequence=DEFAULT_OMEGA_SEQUENCE,
                          tol: float = DEFAULT_TOL) -> WeakDriveResult:
    """Same contract as weakdrive_g2, computed in the zero-momentum sector.

    Valid because the uniform in-phase drive leaves the symmetric sector
    invariant.
    """
    space = basis.space
    n_site = site_operator(space, 0, "number").matrix

    def solve(om):
        H_eff = _heff_with_drive(params, space, om)
        block = basis.reduce_operator(H_eff)
        v_sec, _ = stationary_state(None, dense=block)
        v = basis.to_full(v_sec)
        v = fix_phase(v / np.linalg.norm(v))
        pop = np.vdot(v, n_site @ v).real
        return g2_pure(v, space, 0), pop

    return _run_sequence(solve, omega_sequence, tol)


@dataclass(frozen=True)
class BunchingRegion:
    """Extent of the bunched (g2 > 1) interval in U at fixed hopping."""

    J: float
    empty: bool
    U_LHS: float | None = None   # argmax of g2 over the U grid
    U_RHS: float | None = None   # g2 = 1 crossing beyond the peak
    peak_g2: float | None = None
    note: str = ""


def _g2_of_u(params, u, solver):
    if isinstance(params, BHParams):
        p = BHParams(M=params.M, J=params.J, U=u, Omega=0.0,
                     Delta_c=None, gamma_p=params.gamma_p)
    else:
        raise TypeError("bunching_region supports the Kerr model")
    return solver(p).converged_g2


def bunching_region(params: BHParams, u_grid,
                    omega_sequence=DEFAULT_OMEGA_SEQUENCE,
                    tol: float = DEFAULT_TOL,
                    space: FockSpace | None = None,
                    basis: MomentumBasis | None = None,
                    root_rtol: float = 1e-3) -> BunchingRegion:
    """Scan g2(U) at fixed J: peak location and the bunched-to-antibunched root."""
    u_grid = np.asarray(u_grid, dtype=float)
    if u_grid.size < 3 or np.any(np.diff(u_grid) <= 0):
        raise ValueError("u_grid must be strictly increasing with >= 3 points")
    if basis is not None:
        solver = lambda p: weakdrive_g2_momentum(p, basis, omega_sequence, tol)
    else:
        sp_ = space if space is not None else build_fock_space(params.M, 4)
        solver = lambda p: weakdrive_g2(p, sp_, omega_sequence, tol)

    g2s = np.array([_g2_of_u(params, u, solver) for u in u_grid])
    k_peak = int(np.argmax(g2s))
    peak = g2s[k_peak]
    if peak <= 1.0:
        return BunchingRegion(J=params.J, empty=True, peak_g2=float(peak),
                              note="max g2 over the grid does not exceed 1")
    above = np.flatnonzero(g2s[k_peak:] > 1.0) + k_peak
    k_last = above[-1]
    if k_last == len(u_grid) - 1:
        return BunchingRegion(J=params.J, empty=False, U_LHS=float(u_grid[k_peak]),
                              peak_g2=float(peak),
                              note=f"g2 > 1 up to the grid edge U={u_grid[-1]:g}; "
                                   "no bracket for the right-hand root")
    lo, hi = u_grid[k_last], u_grid[k_last + 1]
    f_lo = g2s[k_last] - 1.0
    while (hi - lo) > root_rtol * hi:
        mid = np.sqrt(lo * hi)
        f_mid = _g2_of_u(params, mid, solver) - 1.0
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return BunchingRegion(J=params.J, empty=False, U_LHS=float(u_grid[k_peak]),
                          U_RHS=float(np.sqrt(lo * hi)), peak_g2=float(peak))
