"""Rotating-frame Hamiltonians for driven resonator chains.

Two model families: resonators with a Kerr nonlinearity (Bose-Hubbard type)
and resonators coupled to embedded two-level systems (Jaynes-Cummings-Hubbard
type).  All rates are dimensionless multiples of the photon loss rate
gamma_p; the laser frequency enters only through the detuning Delta_c.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .hilbert import FockSpace, OperatorMatrix, site_operator


@dataclass(frozen=True)
class BHParams:
    """Kerr-nonlinear chain: hopping J, nonlinearity U, drive Omega."""

    M: int
    J: float
    U: float
    Omega: float
    Delta_c: float | None = None  # None: set to the two-photon resonance value
    gamma_p: float = 1.0

    def __post_init__(self):
        if self.J < 0 or self.U < 0 or self.Omega < 0:
            raise ValueError("J, U and Omega must be non-negative")
        if self.gamma_p <= 0:
            raise ValueError("gamma_p must be positive")

    def resolved_detuning(self) -> float:
        if self.Delta_c is not None:
            return self.Delta_c
        return resonance_detuning_bh(self.J, self.U)


@dataclass(frozen=True)
class JCHParams:
    """Chain of resonators each coupled to a TLS with strength g."""

    M: int
    J: float
    g: float
    Delta: float        # omega_c - omega_a
    Omega: float
    Delta_c: float | None = None
    gamma_p: float = 1.0

    def __post_init__(self):
        if self.J < 0 or self.g < 0 or self.Omega < 0:
            raise ValueError("J, g and Omega must be non-negative")
        if self.gamma_p <= 0:
            raise ValueError("gamma_p must be positive")

    def resolved_detuning(self, space: FockSpace) -> float:
        if self.Delta_c is not None:
            return self.Delta_c
        return resonance_detuning_jch(self.J, self.g, self.Delta, space)


def resonance_detuning_bh(J: float, U: float) -> float:
    """Laser detuning putting two laser photons on the lowest two-photon level."""
    if J < 0 or U < 0:
        raise ValueError("J and U must be non-negative")
    return 0.5 * (np.sqrt(U * U + 4.0 * J * J) - U)


def _hopping(space: FockSpace) -> sp.csr_matrix:
    hop = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for (j, jp) in space.bonds:
        aj_dag = site_operator(space, j, "create").matrix
        ajp = site_operator(space, jp, "annihilate").matrix
        term = aj_dag @ ajp
        hop = hop + term + term.conj().T
    return hop.tocsr()


def bh_hamiltonian(params: BHParams, space: FockSpace) -> OperatorMatrix:
    """Rotating-frame Kerr-chain Hamiltonian (Hermitian)."""
    if space.has_tls:
        raise ValueError("Kerr model needs a photon-only space")
    if space.M != params.M:
        raise ValueError(f"space has M={space.M}, params have M={params.M}")
    delta_c = params.resolved_detuning()
    H = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for j in range(space.M):
        a = site_operator(space, j, "annihilate").matrix
        n = site_operator(space, j, "number").matrix
        H = H + delta_c * n + params.U * (n @ n - n) \
            + params.Omega * (a + a.conj().T)
    H = H - params.J * _hopping(space)
    return OperatorMatrix(H.tocsr(), hermitian=True)


def jch_hamiltonian(params: JCHParams, space: FockSpace) -> OperatorMatrix:
    """Rotating-frame Jaynes-Cummings-Hubbard Hamiltonian (Hermitian)."""
    if not space.has_tls:
        raise ValueError("JCH model needs a space with a TLS per site")
    if space.M != params.M:
        raise ValueError(f"space has M={space.M}, params have M={params.M}")
    delta_c = params.resolved_detuning(space)
    H = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for j in range(space.M):
        a = site_operator(space, j, "annihilate").matrix
        n = site_operator(space, j, "number").matrix
        sm = site_operator(space, j, "sigma_minus").matrix
        ntls = site_operator(space, j, "tls_number").matrix
        jc = a.conj().T @ sm
        H = H + delta_c * n + (delta_c - params.Delta) * ntls \
            + params.g * (jc + jc.conj().T) \
            + params.Omega * (a + a.conj().T)
    H = H - params.J * _hopping(space)
    return OperatorMatrix(H.tocsr(), hermitian=True)


def total_photon_number(space: FockSpace) -> OperatorMatrix:
    N = sp.csr_matrix((space.dim, space.dim), dtype=complex)
    for j in range(space.M):
        N = N + site_operator(space, j, "number").matrix
    return OperatorMatrix(N.tocsr(), hermitian=True)


def total_excitation_number(space: FockSpace) -> OperatorMatrix:
    N = total_photon_number(space).matrix
    if space.has_tls:
        for j in range(space.M):
            N = N + site_operator(space, j, "tls_number").matrix
    return OperatorMatrix(N.tocsr(), hermitian=True)


def resonance_detuning_jch(J: float, g: float, Delta: float,
                           space: FockSpace) -> float:
    """Detuning putting two laser photons on the lowest two-excitation level.

    The detuning-independent part of the undriven rotating-frame Hamiltonian
    (H with Delta_c = 0, Omega = 0) is restricted to the two-excitation block;
    its lowest eigenvalue eps2 fixes Delta_c = -eps2 / 2.
    """
    if g <= 0:
        raise ValueError("resonance is ill-defined for g = 0 "
                         "(photon and TLS sectors decouple)")
    base = JCHParams(M=space.M, J=J, g=g, Delta=Delta, Omega=0.0, Delta_c=0.0)
    H0 = jch_hamiltonian(base, space)
    block, _ = excitation_block(H0, space, 2)
    eps2 = np.linalg.eigvalsh(block.dense()).min()
    return -0.5 * eps2


def effective_hamiltonian(H: OperatorMatrix, space: FockSpace,
                          gamma_p: float = 1.0) -> OperatorMatrix:
    """Non-Hermitian no-jump Hamiltonian: H - i (gamma_p/2) sum_j n_j."""
    shift = total_photon_number(space).matrix
    return OperatorMatrix((H.matrix - 0.5j * gamma_p * shift).tocsr(), False)


def excitation_block(H: OperatorMatrix, space: FockSpace, N: int,
                     tol: float = 1e-9):
    """Restrict an excitation-conserving H to the N-excitation subspace.

    Returns (block, basis_indices).  Raises if H does not commute with the
    total excitation number (i.e. a drive is present).
    """
    Nop = total_excitation_number(space).matrix
    comm = H.matrix @ Nop - Nop @ H.matrix
    if comm.nnz and abs(comm).max() > tol:
        raise ValueError("H does not conserve excitation number (drive present)")
    idx = np.array([i for i in range(space.dim)
                    if space.total_excitations(i) == N], dtype=np.int64)
    block = H.matrix[np.ix_(idx, idx)]
    return OperatorMatrix(sp.csr_matrix(block), H.hermitian), idx
