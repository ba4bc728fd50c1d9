"""Truncated Fock spaces for periodic resonator chains.

Each of the M sites carries a photon mode truncated at n_max photons and,
optionally, a two-level system (TLS).  Basis ordering is site-major
(site 0 most significant) with the photon index varying fastest within a
site and the TLS bit above it, so flat index = sum_j l_j * local_dim^(M-1-j)
with local index l = s * (n_max + 1) + n.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

DEFAULT_DIM_LIMIT = 10**6

HERMITIAN_TOL = 1e-12


class SizeLimitError(ValueError):
    """Requested Hilbert space exceeds the configured dimension bound."""


@dataclass(frozen=True)
class OperatorMatrix:
    """A dim x dim complex matrix (sparse CSR) with a hermiticity flag."""

    matrix: sp.csr_matrix
    hermitian: bool = False

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def dense(self) -> np.ndarray:
        return np.asarray(self.matrix.todense())

    def dagger(self) -> "OperatorMatrix":
        return OperatorMatrix(self.matrix.conj().T.tocsr(), self.hermitian)

    def __add__(self, other):
        m = other.matrix if isinstance(other, OperatorMatrix) else other
        herm = self.hermitian and getattr(other, "hermitian", False)
        return OperatorMatrix((self.matrix + m).tocsr(), herm)

    def __sub__(self, other):
        m = other.matrix if isinstance(other, OperatorMatrix) else other
        herm = self.hermitian and getattr(other, "hermitian", False)
        return OperatorMatrix((self.matrix - m).tocsr(), herm)

    def __mul__(self, scalar):
        herm = self.hermitian and complex(scalar).imag == 0.0
        return OperatorMatrix((self.matrix * scalar).tocsr(), herm)

    __rmul__ = __mul__

    def __matmul__(self, other):
        m = other.matrix if isinstance(other, OperatorMatrix) else other
        return OperatorMatrix((self.matrix @ m).tocsr(), False)


def is_hermitian(A, tol: float = HERMITIAN_TOL) -> bool:
    m = A.matrix if isinstance(A, OperatorMatrix) else sp.csr_matrix(A)
    d = m - m.conj().T
    if d.nnz == 0:
        return True
    return abs(d).max() < tol


@dataclass(frozen=True)
class FockSpace:
    """Truncated multi-site Hilbert space on a periodic chain."""

    M: int
    n_max: int
    has_tls: bool
    local_dim: int
    dim: int
    bonds: tuple = field(default_factory=tuple)

    def index(self, labels) -> int:
        """Flat index of a basis state given per-site local indices."""
        idx = 0
        for l in labels:
            if not 0 <= l < self.local_dim:
                raise ValueError(f"local index {l} out of range")
            idx = idx * self.local_dim + l
        return idx

    def labels(self, index: int) -> tuple:
        """Per-site local indices of the basis state with the given flat index."""
        if not 0 <= index < self.dim:
            raise ValueError(f"index {index} out of range")
        out = []
        for _ in range(self.M):
            out.append(index % self.local_dim)
            index //= self.local_dim
        return tuple(reversed(out))

    def photon_numbers(self, index: int) -> tuple:
        return tuple(l % (self.n_max + 1) for l in self.labels(index))

    def tls_bits(self, index: int) -> tuple:
        return tuple(l // (self.n_max + 1) for l in self.labels(index))

    def total_excitations(self, index: int) -> int:
        """Photons plus TLS excitations of a basis state."""
        return sum(self.photon_numbers(index)) + sum(self.tls_bits(index))

    def translate_permutation(self) -> np.ndarray:
        """perm[i] = flat index of the one-site cyclic shift of basis state i."""
        perm = np.empty(self.dim, dtype=np.int64)
        for i in range(self.dim):
            lab = self.labels(i)
            perm[i] = self.index((lab[-1],) + lab[:-1])
        return perm


def build_fock_space(M: int, n_max: int, has_tls: bool = False,
                     dim_limit: int = DEFAULT_DIM_LIMIT) -> FockSpace:
    """Construct the truncated Fock space of an M-site periodic chain."""
    if M < 1:
        raise ValueError(f"need M >= 1, got {M}")
    if n_max < 1:
        raise ValueError(f"need n_max >= 1, got {n_max}")
    local_dim = (n_max + 1) * (2 if has_tls else 1)
    dim = local_dim**M
    if dim > dim_limit:
        raise SizeLimitError(
            f"dimension {dim} exceeds the safety bound {dim_limit}")
    if M >= 3:
        bonds = tuple((j, (j + 1) % M) for j in range(M))
    elif M == 2:
        bonds = ((0, 1),)
    else:
        bonds = ()
    return FockSpace(M=M, n_max=n_max, has_tls=has_tls,
                     local_dim=local_dim, dim=dim, bonds=bonds)


def _local_photon_op(n_max: int, kind: str) -> sp.csr_matrix:
    d = n_max + 1
    if kind == "annihilate":
        return sp.diags(np.sqrt(np.arange(1, d)), 1, format="csr", dtype=complex)
    if kind == "create":
        return sp.diags(np.sqrt(np.arange(1, d)), -1, format="csr", dtype=complex)
    if kind == "number":
        return sp.diags(np.arange(d, dtype=float), 0, format="csr", dtype=complex)
    raise ValueError(f"unknown operator kind {kind!r}")


def _local_tls_op(kind: str) -> sp.csr_matrix:
    if kind == "sigma_minus":
        m = np.array([[0, 1], [0, 0]], dtype=complex)
    elif kind == "sigma_plus":
        m = np.array([[0, 0], [1, 0]], dtype=complex)
    elif kind == "tls_number":
        m = np.array([[0, 0], [0, 1]], dtype=complex)
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    return sp.csr_matrix(m)


PHOTON_KINDS = ("annihilate", "create", "number")
TLS_KINDS = ("sigma_minus", "sigma_plus", "tls_number")


def site_operator(space: FockSpace, site: int, kind: str) -> OperatorMatrix:
    """Single-site operator embedded in the full space (identity elsewhere)."""
    if not 0 <= site < space.M:
        raise ValueError(f"site {site} out of range for M={space.M}")
    if kind in PHOTON_KINDS:
        local = _local_photon_op(space.n_max, kind)
        if space.has_tls:
            local = sp.kron(sp.identity(2, format="csr"), local, format="csr")
    elif kind in TLS_KINDS:
        if not space.has_tls:
            raise ValueError(f"operator {kind!r} requires a TLS per site")
        local = sp.kron(_local_tls_op(kind),
                        sp.identity(space.n_max + 1, format="csr"), format="csr")
    else:
        raise ValueError(f"unknown operator kind {kind!r}")

    op = sp.identity(1, format="csr", dtype=complex)
    for j in range(space.M):
        factor = local if j == site else sp.identity(space.local_dim, format="csr")
        op = sp.kron(op, factor, format="csr")
    hermitian = kind in ("number", "tls_number")
    return OperatorMatrix(op.tocsr(), hermitian)


def translation_operator(space: FockSpace) -> OperatorMatrix:
    """Permutation matrix of the one-site cyclic shift."""
    perm = space.translate_permutation()
    T = sp.csr_matrix(
        (np.ones(space.dim), (perm, np.arange(space.dim))),
        shape=(space.dim, space.dim), dtype=complex)
    return OperatorMatrix(T, False)


@dataclass(frozen=True)
class MomentumBasis:
    """Zero-momentum (translation-symmetric) sector of a periodic chain."""

    space: FockSpace
    representatives: np.ndarray   # flat indices, one per translation orbit
    orbit_sizes: np.ndarray
    projector: sp.csr_matrix      # dim x n_orbits, orthonormal columns

    @property
    def sector_dim(self) -> int:
        return len(self.representatives)

    def to_full(self, v: np.ndarray) -> np.ndarray:
        """Lift a sector vector to the full space."""
        return self.projector @ v

    def to_sector(self, v: np.ndarray) -> np.ndarray:
        """Project a full-space vector onto the symmetric sector."""
        return self.projector.conj().T @ v

    def reduce_operator(self, A) -> np.ndarray:
        """Dense sector block V^dag A V of a translation-invariant operator."""
        m = A.matrix if isinstance(A, OperatorMatrix) else A
        return np.asarray((self.projector.conj().T @ (m @ self.projector)).todense())


def build_momentum_basis(space: FockSpace) -> MomentumBasis:
    """Enumerate translation orbits and build the zero-momentum basis."""
    perm = space.translate_permutation()
    seen = np.zeros(space.dim, dtype=bool)
    reps, sizes = [], []
    rows, cols, vals = [], [], []
    for i in range(space.dim):
        if seen[i]:
            continue
        orbit = [i]
        seen[i] = True
        j = perm[i]
        while j != i:
            orbit.append(j)
            seen[j] = True
            j = perm[j]
        reps.append(i)
        sizes.append(len(orbit))
        w = 1.0 / np.sqrt(len(orbit))
        col = len(reps) - 1
        for s in orbit:
            rows.append(s)
            cols.append(col)
            vals.append(w)
    projector = sp.csr_matrix(
        (np.array(vals), (np.array(rows), np.array(cols))),
        shape=(space.dim, len(reps)), dtype=complex)
    return MomentumBasis(space=space,
                         representatives=np.array(reps, dtype=np.int64),
                         orbit_sizes=np.array(sizes, dtype=np.int64),
                         projector=projector)


def fix_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate a vector's global phase so its first nonzero component is real positive."""
    idx = np.flatnonzero(np.abs(v) > tol)
    if len(idx) == 0:
        return v
    return v * (np.abs(v[idx[0]]) / v[idx[0]])
