"""Truncated bosonic Hilbert space over the mode coordinates.

Each mode carries a harmonic-oscillator basis cut at a maximum occupation;
the full space is the tensor product in mode-major index order.  Position and
derivative operators come from the ladder matrices

    x_hat = (a + a*) / sqrt(2),   d_hat = (a - a*) / sqrt(2),

so [d_hat_i, x_hat_j] = delta_ij away from the truncation boundary, and the
oscillator vacuum is the first basis vector.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

from .errors import ConfigurationError, DomainMismatchError, ResourceLimitError
from .numerics import DENSE_LIMIT, assert_hermitian, dense_eigh, identity, kron, prune
from .poly import CSPolynomial, Polynomial


def ladder(dim: int) -> sp.csr_matrix:
    """Annihilation matrix a with a|n> = sqrt(n)|n-1>."""
    return prune(sp.diags(np.sqrt(np.arange(1, dim)), offsets=1, format="csr").astype(complex))


def position_matrix(dim: int) -> sp.csr_matrix:
    a = ladder(dim)
    return prune((a + a.conj().T) / np.sqrt(2.0))


def derivative_matrix(dim: int) -> sp.csr_matrix:
    a = ladder(dim)
    return prune((a - a.conj().T) / np.sqrt(2.0))


@dataclass(frozen=True)
class BosonBasis:
    """Tensor product of per-mode truncated oscillators.

    Basis ordering is mixed radix with the occupation of mode 0 most
    significant: state index = sum_i occ_i * (cutoff+1)^(N-1-i).
    """

    nmodes: int
    cutoff: int

    def __post_init__(self):
        if self.nmodes < 0:
            raise ConfigurationError(f"mode count must be >= 0, got {self.nmodes}")
        if self.cutoff < 1:
            raise ConfigurationError(f"occupation cutoff must be >= 1, got {self.cutoff}")

    @property
    def per_mode_dim(self) -> int:
        return self.cutoff + 1

    @property
    def dim(self) -> int:
        return self.per_mode_dim**self.nmodes

    @cached_property
    def occupations(self) -> np.ndarray:
        """(dim, nmodes) occupation numbers per basis state."""
        d = self.per_mode_dim
        idx = np.arange(self.dim)
        occ = np.zeros((self.dim, self.nmodes), dtype=np.int64)
        for i in range(self.nmodes - 1, -1, -1):
            occ[:, i] = idx % d
            idx = idx // d
        return occ

    def vacuum(self) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v

    def _single(self, i: int, mat: sp.spmatrix) -> sp.csr_matrix:
        if not 0 <= i < self.nmodes:
            raise DomainMismatchError(f"mode index {i} out of range [0, {self.nmodes})")
        d = self.per_mode_dim
        out = identity(1)
        for j in range(self.nmodes):
            out = kron(out, mat if j == i else identity(d))
        return out

    def position_op(self, i: int) -> sp.csr_matrix:
        return self._single(i, position_matrix(self.per_mode_dim))

    def derivative_op(self, i: int) -> sp.csr_matrix:
        return self._single(i, derivative_matrix(self.per_mode_dim))

    def number_op(self, i: int) -> sp.csr_matrix:
        d = self.per_mode_dim
        return self._single(i, prune(sp.diags(np.arange(d, dtype=float), format="csr").astype(complex)))

    def low_occupation_mask(self, margin: int) -> np.ndarray:
        """Boolean mask of states with every occupation <= cutoff - margin."""
        if self.nmodes == 0:
            return np.ones(1, dtype=bool)
        return np.all(self.occupations <= self.cutoff - margin, axis=1)

    def low_occupation_projector(self, margin: int) -> sp.csr_matrix:
        mask = self.low_occupation_mask(margin).astype(complex)
        return prune(sp.diags(mask, format="csr"))


def polynomial_multiplication_op(basis: BosonBasis, poly: CSPolynomial | Polynomial) -> sp.csr_matrix:
    """Substitute the commuting position operators into a degree <= 3 polynomial.

    Operator ordering is immaterial because all x_hat_i commute exactly, the
    same-mode powers included; the result is Hermitian.
    """
    if isinstance(poly, CSPolynomial):
        poly = poly.as_polynomial()
    if poly.nmodes != basis.nmodes:
        raise DomainMismatchError(
            f"polynomial in {poly.nmodes} modes on a {basis.nmodes}-mode space"
        )
    if poly.degree > 3:
        raise DomainMismatchError(f"polynomial degree {poly.degree} > 3 unsupported")
    n = basis.nmodes
    xs = [basis.position_op(i) for i in range(n)]
    out = poly.c0 * identity(basis.dim)
    for i in range(n):
        if poly.c1[i] != 0.0:
            out = out + poly.c1[i] * xs[i]
    pairs: dict[tuple[int, int], sp.csr_matrix] = {}
    for i in range(n):
        for j in range(i, n):
            coef = poly.c2[i, j] * (1.0 if i == j else 2.0)
            if coef != 0.0:
                pairs[(i, j)] = xs[i] @ xs[j]
                out = out + coef * pairs[(i, j)]
    for i in range(n):
        for j in range(i, n):
            xij = pairs.get((i, j))
            for k in range(j, n):
                coef = poly.c3[i, j, k] * _multiplicity(i, j, k)
                if coef != 0.0:
                    if xij is None:
                        xij = xs[i] @ xs[j]
                        pairs[(i, j)] = xij
                    out = out + coef * (xij @ xs[k])
    out = prune(out)
    assert_hermitian(out, 1e-10, "polynomial multiplication operator")
    return out


def _multiplicity(i: int, j: int, k: int) -> float:
    if i == j == k:
        return 1.0
    if i == j or j == k or i == k:
        return 3.0
    return 6.0


def integer_over_4pi(m: int) -> float:
    """Coupling values of the form m / (4 pi)."""
    return m / (4.0 * np.pi)


def cs_unitary(basis: BosonBasis, k: float, poly: CSPolynomial | Polynomial,
               dense_limit: int = DENSE_LIMIT) -> sp.csr_matrix:
    """U = exp(i k P(x_hat)) by Hermitian eigendecomposition (dense path).

    Unitary to 1e-10; above the dense limit the Krylov action in
    numerics.expm_action must be used instead of forming the matrix.
    """
    if k == 0.0:
        raise ConfigurationError("rotation coupling k must be nonzero")
    if basis.dim > dense_limit:
        raise ResourceLimitError(
            f"dimension {basis.dim} above the dense limit {dense_limit}; "
            "use the Krylov action for matrix-free application"
        )
    mat = polynomial_multiplication_op(basis, poly)
    w, u = dense_eigh(mat)
    dense = (u * np.exp(1j * k * w)) @ u.conj().T
    return prune(sp.csr_matrix(dense), tol=1e-16)
