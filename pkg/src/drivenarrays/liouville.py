"""Lindblad superoperator, steady-state solver and time propagation.

Density matrices are vectorized by column stacking: vec(A rho B) =
(B^T kron A) vec(rho).  The trace functional is then the row picking out
the diagonal entries vec index i*dim + i.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .hilbert import OperatorMatrix

# Above this vectorized dimension the solver switches to sparse LU.
DENSE_SOLVE_LIMIT = 3000

STEADY_STATE_RTOL = 1e-10
DEGENERACY_RTOL = 1e-12


class SteadyStateError(RuntimeError):
    """Steady-state solve failed (degenerate null space or no convergence)."""


@dataclass(frozen=True)
class Superoperator:
    """dim^2 x dim^2 sparse matrix acting on column-vectorized density matrices."""

    matrix: sp.csr_matrix
    dim: int

    def apply(self, rho: np.ndarray) -> np.ndarray:
        """Apply to a dim x dim density matrix, returning a dim x dim matrix."""
        v = self.matrix @ rho.reshape(-1, order="F")
        return v.reshape(self.dim, self.dim, order="F")


def _mat(op) -> sp.csr_matrix:
    if isinstance(op, OperatorMatrix):
        return op.matrix
    return sp.csr_matrix(op, dtype=complex)


def liouvillian(H, collapse_ops, rates) -> Superoperator:
    """Lindblad generator L[rho] = -i[H, rho] + sum_k gamma_k D_{O_k}[rho]."""
    Hm = _mat(H)
    dim = Hm.shape[0]
    ident = sp.identity(dim, format="csr", dtype=complex)
    L = -1j * (sp.kron(ident, Hm) - sp.kron(Hm.T, ident))
    if len(collapse_ops) != len(rates):
        raise ValueError("collapse_ops and rates must have equal length")
    for op, gamma in zip(collapse_ops, rates):
        if gamma < 0:
            raise ValueError(f"negative rate {gamma}")
        O = _mat(op)
        if O.shape[0] != dim:
            raise ValueError("collapse operator dimension mismatch")
        OdO = (O.conj().T @ O).tocsr()
        L = L + gamma * (sp.kron(O.conj(), O)
                         - 0.5 * sp.kron(ident, OdO)
                         - 0.5 * sp.kron(OdO.T, ident))
    return Superoperator(L.tocsr(), dim)


def _trace_row(dim: int) -> np.ndarray:
    row = np.zeros(dim * dim, dtype=complex)
    row[np.arange(dim) * dim + np.arange(dim)] = 1.0
    return row


def steady_state(L: Superoperator, check_unique: bool = False) -> np.ndarray:
    """Unique rho_ss with L[rho_ss] = 0 and unit trace.

    Solves the linear system with the last row replaced by the trace
    constraint.  With check_unique=True (small systems only) the null-space
    dimension is verified by SVD before solving.
    """
    n = L.dim * L.dim
    if check_unique:
        sv = scipy.linalg.svdvals(np.asarray(L.matrix.todense()))
        null_dim = n if sv[0] == 0.0 else \
            int(np.sum(sv < DEGENERACY_RTOL * sv[0]))
        if null_dim > 1:
            raise SteadyStateError(
                f"steady state is degenerate: null-space dimension {null_dim}")
    A = L.matrix.tolil(copy=True)
    A[n - 1, :] = _trace_row(L.dim)
    b = np.zeros(n, dtype=complex)
    b[n - 1] = 1.0
    try:
        if n <= DENSE_SOLVE_LIMIT:
            x = scipy.linalg.solve(np.asarray(A.todense()), b)
        else:
            x = spla.splu(A.tocsc()).solve(b)
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, RuntimeError) as e:
        raise SteadyStateError(f"steady-state solve failed: {e}") from e
    residual = np.linalg.norm(L.matrix @ x)
    scale = spla.norm(L.matrix)
    if not residual <= STEADY_STATE_RTOL * max(scale, 1.0):
        raise SteadyStateError(
            f"steady-state residual {residual:.3e} exceeds tolerance "
            f"{STEADY_STATE_RTOL * max(scale, 1.0):.3e}")
    rho = x.reshape(L.dim, L.dim, order="F")
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


def evolve(rho0: np.ndarray, L: Superoperator, t: float) -> np.ndarray:
    """rho(t) = exp(L t)[rho0] via Krylov matrix-exponential action."""
    if t < 0:
        raise ValueError("t must be non-negative")
    if t == 0:
        return rho0.copy()
    v = np.asarray(rho0, dtype=complex).reshape(-1, order="F")
    out = spla.expm_multiply(L.matrix * t, v)
    return out.reshape(L.dim, L.dim, order="F")


def evolve_series(v0: np.ndarray, L: Superoperator, t_max: float,
                  num: int) -> np.ndarray:
    """exp(L t_k) v0 on t_k = k * t_max / num, k = 0..num-1 (endpoint excluded).

    Works on arbitrary vectorized operators, not just density matrices;
    used by the quantum-regression correlation functions.
    """
    if num < 2:
        raise ValueError("need at least two samples")
    dt = t_max / num
    return spla.expm_multiply(L.matrix, v0, start=0.0,
                              stop=t_max - dt, num=num, endpoint=True)


def check_density_matrix(rho: np.ndarray, herm_tol: float = 1e-10,
                         trace_tol: float = 1e-10, psd_tol: float = 1e-8):
    """Raise if rho is not Hermitian, unit-trace and PSD within tolerance."""
    if np.abs(rho - rho.conj().T).max() > herm_tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > trace_tol:
        raise ValueError("density matrix trace differs from 1")
    w = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))
    if w.min() < -psd_tol:
        raise ValueError(f"density matrix has negative eigenvalue {w.min():.3e}")
