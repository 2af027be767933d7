"""Orthonormal mode bases of the truncated gauge tangent space and the
functionals built from them: the cubic action coefficients, field strength
pairings, and the covariant-derivative pairing matrix whose trace is the
spectral asymmetry surrogate.

A mode is a one-form with real coefficients over (vertex, direction, Lie
index); the carrier arrays have shape (nvertices, 3, 3).  The real span of
the 9 n^3 coefficient fields is the whole truncated tangent space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .errors import ConfigurationError, DomainMismatchError
from .lattice import (
    TAU,
    InnerProduct,
    Lattice,
    LieCochain,
    coboundary,
    inner_product,
    sobolev_transform,
    trace_integrate,
    wedge,
    wedge_pairing,
)
from .poly import CSPolynomial

_GS_SKIP = 1e-8  # residual norm below which a seed counts as dependent


def coeffs_to_cochain(lat: Lattice, coeffs: np.ndarray) -> LieCochain:
    """Real coefficient field (nv, 3, 3) -> su(2)-valued one-form."""
    values = np.einsum("vma,aij->vmij", coeffs, TAU)
    return LieCochain(lat, 1, values)


def coeff_inner(lat: Lattice, descriptor: InnerProduct, c1: np.ndarray, c2: np.ndarray) -> float:
    """Coefficient-space inner product; equals the cochain pairing exactly
    because the Lie basis is trace-orthonormal."""
    if descriptor.kind == "sobolev":
        c1 = sobolev_transform(lat, c1, descriptor.p)
        c2 = sobolev_transform(lat, c2, descriptor.p)
    return float(np.sum(c1 * c2) * lat.spacing**3)


def _wavevectors(limit_sq: int) -> Iterator[tuple[int, int, int]]:
    """Canonical wavevectors sorted by (|k|^2, lexicographic order).

    Canonical means k = 0 or the first nonzero component is positive, so each
    cosine/sine pair appears once.
    """
    bound = int(np.sqrt(limit_sq)) + 1
    ks = []
    for kx in range(-bound, bound + 1):
        for ky in range(-bound, bound + 1):
            for kz in range(-bound, bound + 1):
                k = (kx, ky, kz)
                r2 = kx * kx + ky * ky + kz * kz
                if r2 > limit_sq:
                    continue
                nz = next((c for c in k if c != 0), 0)
                if k != (0, 0, 0) and nz <= 0:
                    continue
                ks.append((r2, k))
    ks.sort()
    for _, k in ks:
        yield k


def _wave_field(lat: Lattice, k: tuple[int, int, int], trig: str) -> np.ndarray:
    phase = 2.0 * np.pi * (lat.vertex_integer_coords @ np.asarray(k)) / lat.n
    return np.cos(phase) if trig == "cos" else np.sin(phase)


def default_seed_iter(lat: Lattice) -> Iterator[np.ndarray]:
    """Plane-wave one-form seeds tau_a * trig(2 pi k.x / L) dx^mu, ordered by
    (|k|^2, k lexicographic, Lie index, direction, cos before sin)."""
    for k in _wavevectors(3 * lat.n**2 + 1):
        trigs = ("cos",) if k == (0, 0, 0) else ("cos", "sin")
        for a in range(3):
            for mu in range(3):
                for trig in trigs:
                    c = np.zeros((lat.nvertices, 3, 3))
                    c[:, mu, a] = _wave_field(lat, k, trig)
                    yield c


def axis_wave_seeds(lat: Lattice, count: int, lie: int = 0, direction: int = 0,
                    axis: int = 1) -> list[np.ndarray]:
    """Single-component waves varying along one axis: the family used for the
    reproducing-kernel concentration checks."""
    seeds = []
    k = 0
    while len(seeds) < count:
        kvec = tuple(k if ax == axis else 0 for ax in range(3))
        for trig in ("cos",) if k == 0 else ("cos", "sin"):
            c = np.zeros((lat.nvertices, 3, 3))
            c[:, direction, lie] = _wave_field(lat, kvec, trig)
            seeds.append(c)
            if len(seeds) == count:
                break
        k += 1
    return seeds


def helical_seeds(lat: Lattice, count: int) -> list[np.ndarray]:
    """Circularly polarized waves along z; their self-linking makes the
    covariant pairing matrix carry a nonzero trace at x = 0."""
    seeds = []
    # same chirality first so partial families keep a nonzero asymmetry
    specs = [(1, +1, 0), (1, +1, 1), (1, +1, 2), (1, -1, 0), (1, -1, 1), (1, -1, 2)]
    for k, chi, a in specs:
        if len(seeds) == count:
            break
        c = np.zeros((lat.nvertices, 3, 3))
        c[:, 0, a] = _wave_field(lat, (0, 0, k), "cos")
        c[:, 1, a] = chi * _wave_field(lat, (0, 0, k), "sin")
        seeds.append(c)
    if len(seeds) < count:
        raise ConfigurationError(f"helical family provides at most {len(specs)} seeds")
    return seeds


def mixed_direction_seeds(lat: Lattice, count: int) -> list[np.ndarray]:
    """Modes mixing noncommuting Lie components across directions, giving the
    spectral term a nonzero slope in the coordinates."""
    specs = [
        ((0, 1), (0, 0, 1), "cos"),
        (None, None, None),          # constant tau_3 dz
        ((1, 2), (0, 0, 1), "sin"),
        (None, None, None),          # constant tau_1 dz
        ((2, 0), (0, 0, 2), "cos"),
        (None, None, None),          # constant tau_2 dz
    ]
    const_lie = [2, 0, 1]
    seeds = []
    n_const = 0
    for spec in specs:
        if len(seeds) == count:
            break
        c = np.zeros((lat.nvertices, 3, 3))
        if spec[0] is None:
            c[:, 2, const_lie[n_const]] = 1.0
            n_const += 1
        else:
            (a, b), kvec, trig = spec
            c[:, 0, a] = _wave_field(lat, kvec, trig)
            c[:, 1, b] = _wave_field(lat, kvec, trig)
        seeds.append(c)
    if len(seeds) < count:
        raise ConfigurationError(f"mixed-direction family provides at most {len(specs)} seeds")
    return seeds


@dataclass
class ModeBasis:
    """Orthonormal truncated basis of the gauge tangent space.

    coeffs has shape (N, nvertices, 3, 3); the Gram matrix under the declared
    inner product is the identity to 1e-12.
    """

    lattice: Lattice
    descriptor: InnerProduct
    coeffs: np.ndarray
    gram: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.gram is None:
            self.gram = self.compute_gram()

    @property
    def count(self) -> int:
        return self.coeffs.shape[0]

    def compute_gram(self) -> np.ndarray:
        n = self.count
        g = np.zeros((n, n))
        for i in range(n):
            for j in range(i, n):
                g[i, j] = coeff_inner(self.lattice, self.descriptor, self.coeffs[i], self.coeffs[j])
                g[j, i] = g[i, j]
        return g

    def mode_cochain(self, i: int) -> LieCochain:
        return coeffs_to_cochain(self.lattice, self.coeffs[i])

    def mode_value(self, i: int, point: tuple[int, int, int]) -> float:
        """Coefficient of the mode at (vertex, direction, Lie index)."""
        v, mu, a = point
        return float(self.coeffs[i, v, mu, a])

    def connection(self, x: np.ndarray) -> LieCochain:
        x = self._check_coords(x)
        return coeffs_to_cochain(self.lattice, np.einsum("i,ivma->vma", x, self.coeffs))

    def _check_coords(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.count,):
            raise DomainMismatchError(
                f"coordinate length {x.shape} does not match mode count {self.count}"
            )
        return x


def _gram_schmidt(lat: Lattice, descriptor: InnerProduct, seeds: Iterator[np.ndarray],
                  count: int) -> np.ndarray:
    kept: list[np.ndarray] = []
    for seed in seeds:
        if len(kept) == count:
            break
        w = seed.astype(float).copy()
        norm0 = np.sqrt(coeff_inner(lat, descriptor, w, w))
        if norm0 < _GS_SKIP:
            continue
        for _ in range(2):  # second pass restores orthogonality to machine precision
            for u in kept:
                w = w - coeff_inner(lat, descriptor, u, w) * u
        rnorm = np.sqrt(coeff_inner(lat, descriptor, w, w))
        if rnorm < _GS_SKIP * max(1.0, norm0):
            continue
        kept.append(w / rnorm)
    if len(kept) < count:
        raise ConfigurationError(
            f"seed family exhausted after {len(kept)} independent modes, wanted {count}"
        )
    return np.stack(kept)


def build_mode_basis(lat: Lattice, count: int, descriptor: InnerProduct) -> ModeBasis:
    """Orthonormalize the documented plane-wave seed family."""
    if count < 1:
        raise ConfigurationError(f"mode count must be >= 1, got {count}")
    if count > 9 * lat.nvertices:
        raise ConfigurationError(
            f"mode count {count} exceeds the tangent-space dimension {9 * lat.nvertices}"
        )
    coeffs = _gram_schmidt(lat, descriptor, default_seed_iter(lat), count)
    return ModeBasis(lattice=lat, descriptor=descriptor, coeffs=coeffs)


def basis_from_seeds(lat: Lattice, seeds: list[np.ndarray], descriptor: InnerProduct,
                     count: int | None = None) -> ModeBasis:
    """Orthonormalize an explicit seed family (diagnostic mode sets)."""
    count = len(seeds) if count is None else count
    coeffs = _gram_schmidt(lat, descriptor, iter(seeds), count)
    return ModeBasis(lattice=lat, descriptor=descriptor, coeffs=coeffs)


# ---------------------------------------------------------------------------
# Functionals of the connection
# ---------------------------------------------------------------------------

def _pairing_weights() -> tuple[np.ndarray, list[int]]:
    # trace pairing of a 1-form with a 2-form: a0 g12 - a1 g02 + a2 g01
    return np.array([1.0, -1.0, 1.0]), [2, 1, 0]


def curl_pairing_matrix(basis: ModeBasis) -> np.ndarray:
    """B[i, j] = Re trace_integrate(xi_i wedge d xi_j); symmetric exactly."""
    n = basis.count
    b = np.zeros((n, n))
    modes = [basis.mode_cochain(i) for i in range(n)]
    curls = [coboundary(m) for m in modes]
    for i in range(n):
        for j in range(n):
            b[i, j] = wedge_pairing(modes[i], curls[j]).real
    return b


def triple_wedge_tensor(basis: ModeBasis) -> np.ndarray:
    """T[i, j, k] = Re trace_integrate(xi_i wedge xi_j wedge xi_k)."""
    n = basis.count
    modes = [basis.mode_cochain(i) for i in range(n)]
    t = np.zeros((n, n, n))
    for j in range(n):
        for k in range(n):
            w = wedge(modes[j], modes[k])
            for i in range(n):
                t[i, j, k] = wedge_pairing(modes[i], w).real
    return t


def chern_simons_coefficients(basis: ModeBasis) -> CSPolynomial:
    """Quadratic and cubic coefficients of the action on the mode span."""
    b = curl_pairing_matrix(basis)
    t = triple_wedge_tensor(basis)
    return CSPolynomial(Q=0.5 * (b + b.T), C=(2.0 / 3.0) * t)


def chern_simons_direct(basis: ModeBasis, x: np.ndarray) -> float:
    """Independent evaluation by cochain arithmetic (no coefficient tensors)."""
    a = basis.connection(x)
    quad = wedge_pairing(a, coboundary(a))
    cub = trace_integrate(wedge(a, wedge(a, a)))
    return float((quad + (2.0 / 3.0) * cub).real)


def field_strength(basis: ModeBasis, x: np.ndarray) -> LieCochain:
    """F(A) = dA + A wedge A at A = sum_i x_i xi_i."""
    a = basis.connection(x)
    return coboundary(a) + wedge(a, a)


def pair_modes_with_F(basis: ModeBasis, x: np.ndarray) -> np.ndarray:
    """v_i = trace_integrate(xi_i wedge F(A)); twice this is the action gradient."""
    f = field_strength(basis, x)
    out = np.empty(basis.count)
    for i in range(basis.count):
        out[i] = wedge_pairing(basis.mode_cochain(i), f).real
    return out


def covariant_derivative_matrix(basis: ModeBasis, x: np.ndarray) -> np.ndarray:
    """Pairing matrix of the covariant exterior derivative on the mode span.

    M[i, j] = -Re trace_integrate(xi_i wedge (d xi_j + A wedge xi_j + xi_j wedge A)).
    Real symmetric: the anti-Hermitian Lie convention makes the traced pairing
    real, and integration by parts plus trace cyclicity are exact here.
    """
    n = basis.count
    a = basis.connection(basis._check_coords(x))
    m = np.zeros((n, n))
    modes = [basis.mode_cochain(i) for i in range(n)]
    for j in range(n):
        cov = coboundary(modes[j]) + wedge(a, modes[j]) + wedge(modes[j], a)
        for i in range(n):
            m[i, j] = -wedge_pairing(modes[i], cov).real
    return m


def spectral_invariant(basis: ModeBasis, x: np.ndarray) -> float:
    """Signed eigenvalue sum (= trace) of the covariant pairing matrix."""
    return float(np.trace(covariant_derivative_matrix(basis, x)))


def covariant_gradient_0form(basis: ModeBasis, x: np.ndarray, lam: LieCochain) -> LieCochain:
    """Covariant derivative d lam + [A, lam] of a Lie-valued 0-cochain."""
    if lam.degree != 0:
        raise DomainMismatchError("gauge generator must be a 0-cochain")
    a = basis.connection(x)
    return coboundary(lam) + wedge(a, lam) - wedge(lam, a)


def gauge_direction_coefficients(basis: ModeBasis, x: np.ndarray, lam: LieCochain) -> np.ndarray:
    """g_i = <xi_i, d lam + [A, lam]> under the basis descriptor."""
    cov = covariant_gradient_0form(basis, x, lam)
    out = np.empty(basis.count)
    for i in range(basis.count):
        out[i] = inner_product(basis.mode_cochain(i), cov, basis.descriptor).real
    return out


def random_lie_cochain(lat: Lattice, degree: int, rng: np.random.Generator,
                       scale: float = 1.0) -> LieCochain:
    """Random cochain with real Lie coefficients (stays su(2)-valued)."""
    from .lattice import COMPONENTS

    coeffs = scale * rng.standard_normal((lat.nvertices, COMPONENTS[degree], 3))
    values = np.einsum("vca,aij->vcij", coeffs, TAU)
    return LieCochain(lat, degree, values)
