"""Sparse numerical substrate: Kronecker assembly, a Hermitian Lanczos
eigensolver with full reorthogonalization, Krylov action of matrix
exponentials, and finite-difference checkers.

Matrices are scipy CSR throughout; helpers keep the invariants the rest of
the package assumes (sorted unique column indices, no stored zeros below the
pruning threshold, verified Hermiticity flags).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import ConvergenceError, DomainMismatchError, ResourceLimitError

DEFAULT_SEED = 0xC0FFEE
DENSE_LIMIT = 2000
KRON_DIM_CAP = 2**24
PRUNE_TOL = 1e-15


def prune(mat: sp.spmatrix, tol: float = PRUNE_TOL) -> sp.csr_matrix:
    """CSR with sorted unique columns and entries below tol dropped."""
    m = sp.csr_matrix(mat)
    m.sum_duplicates()
    m.data[np.abs(m.data) < tol] = 0.0
    m.eliminate_zeros()
    m.sort_indices()
    return m


def hermiticity_defect(mat: sp.spmatrix) -> float:
    d = mat - mat.conj().T
    return float(np.max(np.abs(d.data))) if d.nnz else 0.0


def assert_hermitian(mat: sp.spmatrix, tol: float = 1e-12, what: str = "operator") -> sp.spmatrix:
    defect = hermiticity_defect(mat)
    if defect > tol:
        raise DomainMismatchError(f"{what} fails the Hermiticity check: defect {defect:g}")
    return mat


def kron(a: sp.spmatrix, b: sp.spmatrix, dim_cap: int = KRON_DIM_CAP) -> sp.csr_matrix:
    """Tensor product with fused index i_a * dim(b) + i_b (first factor major)."""
    dim = a.shape[0] * b.shape[0]
    if dim > dim_cap:
        raise ResourceLimitError(
            f"kron dimension {dim} exceeds the cap {dim_cap}"
        )
    return prune(sp.kron(sp.csr_matrix(a), sp.csr_matrix(b), format="csr"))


def identity(dim: int) -> sp.csr_matrix:
    return sp.identity(dim, dtype=complex, format="csr")


@dataclass
class EigenResult:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray          # columns
    residual_norms: np.ndarray
    iterations: int
    converged: bool = True
    message: str = ""


def dense_eigh(mat: sp.spmatrix) -> tuple[np.ndarray, np.ndarray]:
    w, v = np.linalg.eigh(np.asarray(mat.todense()))
    return w, v


def lanczos_hermitian(op: sp.spmatrix, count: int, tol: float = 1e-10,
                      max_iter: int | None = None,
                      seed: int = DEFAULT_SEED) -> EigenResult:
    """Lowest eigenpairs of a Hermitian operator by Lanczos iteration.

    Full reorthogonalization against every stored basis vector each step;
    deterministic start vector from the fixed seed.  Residuals ||A v - w v||
    are measured explicitly on the Ritz vectors.
    """
    assert_hermitian(op, 1e-10, "Lanczos input")
    dim = op.shape[0]
    if count >= dim:
        raise DomainMismatchError(f"requested {count} pairs from dimension {dim}")
    max_iter = max_iter if max_iter is not None else min(dim, max(4 * count + 40, 80))

    rng = np.random.default_rng(seed)
    q = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    q /= np.linalg.norm(q)

    basis = [q]
    alphas: list[float] = []
    betas: list[float] = []
    iterations = 0
    for it in range(max_iter):
        iterations = it + 1
        w = op @ basis[-1]
        alpha = float(np.vdot(basis[-1], w).real)
        alphas.append(alpha)
        w = w - alpha * basis[-1]
        if len(basis) > 1:
            w = w - betas[-1] * basis[-2]
        # full reorthogonalization, twice for machine-precision orthogonality
        for _ in range(2):
            for b in basis:
                w = w - np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))
        if len(basis) >= count:
            vals, vecs, res = _ritz(op, basis, alphas, betas, count)
            if np.all(res < tol):
                return EigenResult(vals, vecs, res, iterations)
        if beta < 1e-14:
            # Krylov space exhausted; accept whatever converged
            break
        betas.append(beta)
        basis.append(w / beta)

    vals, vecs, res = _ritz(op, basis, alphas, betas, count)
    ok = bool(np.all(res < tol))
    if not ok:
        return EigenResult(vals, vecs, res, iterations, converged=False,
                           message=f"residuals above {tol:g} after {iterations} iterations")
    return EigenResult(vals, vecs, res, iterations)


def _tridiag(alphas, betas) -> np.ndarray:
    t = np.diag(np.asarray(alphas, dtype=float))
    if betas:
        b = np.asarray(betas, dtype=float)
        t += np.diag(b, 1) + np.diag(b, -1)
    return t


def _ritz(op, basis, alphas, betas, count) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = len(alphas)
    t = _tridiag(alphas, betas[: m - 1])
    w, u = np.linalg.eigh(t)
    q = np.stack(basis[:m], axis=1)
    k = min(count, len(w))
    vecs = q @ u[:, :k]
    res = np.array([np.linalg.norm(op @ vecs[:, i] - w[i] * vecs[:, i]) for i in range(k)])
    if k < count:
        res = np.concatenate([res, np.full(count - k, np.inf)])
        w = np.concatenate([w, np.full(count - k, np.nan)])
    return w[:count], vecs, res[:count]


def expm_action(op: sp.spmatrix, scale: float, v: np.ndarray,
                krylov_dim: int = 40) -> np.ndarray:
    """exp(i * scale * op) @ v for Hermitian op, via Lanczos projection.

    Norm is preserved to 1e-10; small operators fall back to the dense route.
    """
    assert_hermitian(op, 1e-10, "exponential argument")
    dim = op.shape[0]
    if scale == 0.0:
        return v.astype(complex).copy()
    if dim <= krylov_dim:
        w, u = dense_eigh(sp.csr_matrix(op))
        return u @ (np.exp(1j * scale * w) * (u.conj().T @ v))

    nv = np.linalg.norm(v)
    if nv == 0:
        return v.astype(complex).copy()
    basis = [np.asarray(v, dtype=complex) / nv]
    alphas: list[float] = []
    betas: list[float] = []
    for _ in range(krylov_dim):
        w = op @ basis[-1]
        alpha = float(np.vdot(basis[-1], w).real)
        alphas.append(alpha)
        w = w - alpha * basis[-1]
        if len(basis) > 1:
            w = w - betas[-1] * basis[-2]
        for b in basis:
            w = w - np.vdot(b, w) * b
        beta = float(np.linalg.norm(w))
        if beta < 1e-14:
            break
        betas.append(beta)
        basis.append(w / beta)
    t = _tridiag(alphas, betas)
    tw, tu = np.linalg.eigh(t)
    e0 = np.zeros(len(alphas)); e0[0] = 1.0
    coef = tu @ (np.exp(1j * scale * tw) * (tu.T @ e0))
    q = np.stack(basis, axis=1)
    return nv * (q @ coef)


def finite_difference_gradient(f, x: np.ndarray, step: float) -> np.ndarray:
    """Central differences; exact through quadratic terms, O(step^2) for cubics."""
    if step <= 0:
        raise DomainMismatchError(f"step must be positive, got {step}")
    x = np.asarray(x, dtype=float)
    grad = np.empty_like(x)
    for i in range(x.size):
        xp = x.copy(); xp[i] += step
        xm = x.copy(); xm[i] -= step
        grad[i] = (f(xp) - f(xm)) / (2.0 * step)
    return grad
