"""Real polynomials of degree <= 3 in the mode coordinates.

The cubic Chern-Simons-type functional is kept as a (Q, C) coefficient pair;
generic polynomials carry a full (constant, linear, quadratic, cubic) set.
Quadratic and cubic tensors are stored fully symmetrized, so evaluation and
differentiation never need to re-symmetrize.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainMismatchError


def symmetrize_quadratic(q: np.ndarray) -> np.ndarray:
    return 0.5 * (q + q.T)


def symmetrize_cubic(c: np.ndarray) -> np.ndarray:
    out = np.zeros_like(c)
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        out += np.transpose(c, perm)
    return out / 6.0


@dataclass
class Polynomial:
    """Degree <= 3 polynomial with symmetric coefficient tensors."""

    nmodes: int
    c0: float = 0.0
    c1: np.ndarray | None = None
    c2: np.ndarray | None = None
    c3: np.ndarray | None = None

    def __post_init__(self):
        n = self.nmodes
        if self.c1 is None:
            self.c1 = np.zeros(n)
        if self.c2 is None:
            self.c2 = np.zeros((n, n))
        if self.c3 is None:
            self.c3 = np.zeros((n, n, n))
        self.c1 = np.asarray(self.c1, dtype=float)
        self.c2 = symmetrize_quadratic(np.asarray(self.c2, dtype=float))
        self.c3 = symmetrize_cubic(np.asarray(self.c3, dtype=float))

    @property
    def degree(self) -> int:
        if np.any(self.c3):
            return 3
        if np.any(self.c2):
            return 2
        if np.any(self.c1):
            return 1
        return 0

    def value(self, x: np.ndarray) -> float:
        x = self._check(x)
        return (
            self.c0
            + float(self.c1 @ x)
            + float(x @ self.c2 @ x)
            + float(np.einsum("ijk,i,j,k->", self.c3, x, x, x))
        )

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = self._check(x)
        return self.c1 + 2.0 * (self.c2 @ x) + 3.0 * np.einsum("ijk,j,k->i", self.c3, x, x)

    def partial(self, i: int) -> "Polynomial":
        """The polynomial d/dx_i of self (degree drops by one)."""
        return Polynomial(
            self.nmodes,
            c0=float(self.c1[i]),
            c1=2.0 * self.c2[i],
            c2=3.0 * self.c3[i],
        )

    def is_zero(self, tol: float = 0.0) -> bool:
        return (
            abs(self.c0) <= tol
            and np.all(np.abs(self.c1) <= tol)
            and np.all(np.abs(self.c2) <= tol)
            and np.all(np.abs(self.c3) <= tol)
        )

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.nmodes,):
            raise DomainMismatchError(
                f"coordinate length {x.shape} does not match {self.nmodes} modes"
            )
        return x


@dataclass
class CSPolynomial:
    """Cubic action functional: value(x) = x.Q.x + C:(x,x,x) + offset.

    Q is symmetric, C is invariant under all six index permutations, and the
    value at x = 0 equals the offset (zero by default).
    """

    Q: np.ndarray
    C: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        self.Q = symmetrize_quadratic(np.asarray(self.Q, dtype=float))
        self.C = symmetrize_cubic(np.asarray(self.C, dtype=float))
        n = self.Q.shape[0]
        if self.Q.shape != (n, n) or self.C.shape != (n, n, n):
            raise DomainMismatchError("Q must be (N,N) and C must be (N,N,N)")

    @property
    def nmodes(self) -> int:
        return self.Q.shape[0]

    def value(self, x: np.ndarray) -> float:
        return self.as_polynomial().value(x)

    def gradient(self, x: np.ndarray) -> np.ndarray:
        return self.as_polynomial().gradient(x)

    def as_polynomial(self) -> Polynomial:
        return Polynomial(self.nmodes, c0=self.offset, c2=self.Q, c3=self.C)

    def partial(self, i: int) -> Polynomial:
        return self.as_polynomial().partial(i)

    def second_derivative_trace(self) -> Polynomial:
        """Sum_i d^2/dx_i^2 of the functional, itself an affine polynomial."""
        return Polynomial(
            self.nmodes,
            c0=2.0 * float(np.trace(self.Q)),
            c1=6.0 * np.einsum("iij->j", self.C),
        )


def random_cubic(rng: np.random.Generator, nmodes: int, scale: float = 0.5) -> CSPolynomial:
    """Deterministic random cubic functional for rotation experiments."""
    q = scale * rng.standard_normal((nmodes, nmodes))
    c = scale * rng.standard_normal((nmodes, nmodes, nmodes))
    return CSPolynomial(Q=q, C=c)
