"""Finite fermionic Fock space over M modes with the exterior/interior
multiplication operators, Clifford combinations, grading, and the
multiplicative antilinear conjugation.

Basis states are occupation bitmasks ordered by integer value, slot i on bit
i; the state for mask S is the ascending wedge monomial of the occupied
slots.  Exterior multiplication by slot i carries the sign
(-1)^(number of occupied slots below i).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, DomainMismatchError
from .numerics import prune

_SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class FockBasis:
    """All 2^M occupation bitmasks of M fermionic modes."""

    nmodes: int

    def __post_init__(self):
        if not 0 <= self.nmodes <= 20:
            raise ConfigurationError(f"fermionic mode count must be in 0..20, got {self.nmodes}")

    @property
    def dim(self) -> int:
        return 1 << self.nmodes

    @cached_property
    def popcounts(self) -> np.ndarray:
        return np.array([bin(s).count("1") for s in range(self.dim)], dtype=np.int64)

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    def basis_state(self, mask: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[mask] = 1.0
        return v


def ext_slot(basis: FockBasis, i: int) -> sp.csr_matrix:
    """Exterior multiplication by basis mode i (creation with Jordan-Wigner sign)."""
    if not 0 <= i < basis.nmodes:
        raise DomainMismatchError(f"slot {i} out of range [0, {basis.nmodes})")
    dim = basis.dim
    bit = 1 << i
    rows, cols, vals = [], [], []
    below = bit - 1
    for s in range(dim):
        if s & bit:
            continue
        sign = 1.0 if bin(s & below).count("1") % 2 == 0 else -1.0
        rows.append(s | bit)
        cols.append(s)
        vals.append(sign)
    return prune(sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim), dtype=complex))


def int_slot(basis: FockBasis, i: int) -> sp.csr_matrix:
    return prune(ext_slot(basis, i).conj().T)


def _check_vector(basis: FockBasis, psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (basis.nmodes,):
        raise DomainMismatchError(
            f"coefficient vector length {psi.shape} does not match {basis.nmodes} modes"
        )
    return psi


def ext(basis: FockBasis, psi) -> sp.csr_matrix:
    """Exterior multiplication by sum_i psi_i psi_i-th mode; linear in psi."""
    psi = _check_vector(basis, psi)
    out = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for i, c in enumerate(psi):
        if c != 0:
            out = out + c * ext_slot(basis, i)
    return prune(out)


def interior(basis: FockBasis, psi) -> sp.csr_matrix:
    """Adjoint of ext(psi); antilinear in psi."""
    return prune(ext(basis, psi).conj().T)


def clifford_c(basis: FockBasis, psi) -> sp.csr_matrix:
    """Self-adjoint Clifford multiplication (ext + int) / sqrt(2).

    The normalization makes {c(e_i), c(e_j)} = delta_ij exactly while keeping
    {ext(e_i), int(e_j)} = delta_ij.
    """
    return prune((ext(basis, psi) + interior(basis, psi)) / _SQRT2)


def clifford_cbar(basis: FockBasis, psi) -> sp.csr_matrix:
    """Anti-self-adjoint Clifford multiplication (ext - int) / sqrt(2); squares
    to -1/2 on basis modes."""
    return prune((ext(basis, psi) - interior(basis, psi)) / _SQRT2)


def grading(basis: FockBasis) -> sp.csr_matrix:
    """(-1)^(particle number), diagonal."""
    return prune(sp.diags(((-1.0) ** basis.popcounts).astype(complex), format="csr"))


def number_operator(basis: FockBasis) -> sp.csr_matrix:
    return prune(sp.diags(basis.popcounts.astype(complex), format="csr"))


def particle_shift_signature(basis: FockBasis, op: sp.spmatrix) -> str:
    """'-1', '0', '+1' or 'mixed' according to the population changes present."""
    coo = sp.coo_matrix(op)
    if coo.nnz == 0:
        return "0"
    shifts = set(int(basis.popcounts[r] - basis.popcounts[c]) for r, c in zip(coo.row, coo.col))
    if len(shifts) == 1:
        s = shifts.pop()
        return {-1: "-1", 0: "0", 1: "+1"}.get(s, str(s))
    return "mixed"


def anticommutator(a: sp.spmatrix, b: sp.spmatrix) -> sp.csr_matrix:
    return prune(a @ b + b @ a)


def commutator(a: sp.spmatrix, b: sp.spmatrix) -> sp.csr_matrix:
    return prune(a @ b - b @ a)


# ---------------------------------------------------------------------------
# Antilinear operators
# ---------------------------------------------------------------------------

@dataclass
class AntilinearOperator:
    """Operator acting as v -> linear @ conj(v) in the fixed basis.

    The linear part is kept sparse; at Fock-space dimensions the conjugation
    of a sign-paired mode conjugation is permutation-like.
    """

    linear: sp.csr_matrix

    def __post_init__(self):
        self.linear = prune(sp.csr_matrix(self.linear, dtype=complex))
        if self.linear.shape[0] != self.linear.shape[1]:
            raise DomainMismatchError("antilinear operator needs a square linear part")

    @property
    def dim(self) -> int:
        return self.linear.shape[0]

    def column(self, i: int) -> np.ndarray:
        return np.asarray(self.linear[:, i].todense()).ravel()

    def apply(self, v: np.ndarray) -> np.ndarray:
        return self.linear @ np.conj(v)

    def compose(self, other: "AntilinearOperator") -> sp.csr_matrix:
        """Composition of two antilinear maps is plain linear: conjugations cancel."""
        return prune(self.linear @ other.linear.conj())

    def square(self) -> sp.csr_matrix:
        return self.compose(self)

    def isometry_defect(self) -> float:
        g = self.linear.conj().T @ self.linear - sp.identity(self.dim, dtype=complex)
        return float(np.max(np.abs(g.data))) if g.nnz else 0.0


def standard_mode_conjugation(nmodes: int) -> AntilinearOperator:
    """Block quaternionic conjugation on C^M (M even): pairs (2j, 2j+1) with
    eps . conj per pair; squares to -1."""
    if nmodes % 2 != 0:
        raise ConfigurationError(
            f"the paired conjugation needs an even mode count, got {nmodes}"
        )
    g = np.zeros((nmodes, nmodes), dtype=complex)
    for j in range(nmodes // 2):
        g[2 * j + 1, 2 * j] = 1.0
        g[2 * j, 2 * j + 1] = -1.0
    return AntilinearOperator(g)


def fock_charge_conjugation(basis: FockBasis, c1: AntilinearOperator,
                            tol: float = 1e-10) -> AntilinearOperator:
    """Multiplicative extension of a single-mode conjugation to the Fock space.

    Requires c1^2 = -1; the extension fixes the vacuum, maps the monomial of a
    mask to the wedge of the conjugated modes, and squares to (-1)^(particle
    number) sector by sector.
    """
    if c1.dim != basis.nmodes:
        raise DomainMismatchError("mode-space conjugation dimension mismatch")
    sq = c1.square() + sp.identity(basis.nmodes, dtype=complex)
    if (np.max(np.abs(sq.data)) if sq.nnz else 0.0) > tol:
        raise ConfigurationError("mode conjugation must square to -1")
    exts = [ext(basis, c1.column(i)) for i in range(basis.nmodes)]
    rows, cols, vals = [], [], []
    for mask in range(basis.dim):
        v = basis.vacuum()
        for i in reversed([i for i in range(basis.nmodes) if mask & (1 << i)]):
            v = exts[i] @ v
        nz = np.nonzero(np.abs(v) > 1e-15)[0]
        rows.extend(nz.tolist())
        cols.extend([mask] * len(nz))
        vals.extend(v[nz].tolist())
    mat = sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=complex)
    return AntilinearOperator(mat)
