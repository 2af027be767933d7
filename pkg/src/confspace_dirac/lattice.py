"""Discrete exterior calculus on a periodic cubic 3-lattice with su(2)-valued cochains.

The torus is sampled at n^3 vertices with spacing a.  A degree-k cochain
stores the k-form components at every vertex (1 component for degrees 0 and
3, the pairs (01, 02, 12) for degree 2, the directions (0, 1, 2) for degree
1), each component a 2x2 complex matrix.

The coboundary uses centered differences and the wedge multiplies components
vertex-locally with the continuum antisymmetrization.  This combination keeps
the identities the rest of the package relies on exact on the lattice:
d.d = 0, integration by parts, and cyclicity of the traced wedge pairing.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, DomainMismatchError

# Pauli matrices and the trace-orthonormal anti-Hermitian su(2) basis
# tau_a = -i sigma_a / sqrt(2), so Tr(tau_b^* tau_a) = delta_ab.
SIGMA = np.array(
    [
        [[0.0, 1.0], [1.0, 0.0]],
        [[0.0, -1.0j], [1.0j, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ],
    dtype=complex,
)
TAU = -1.0j * SIGMA / np.sqrt(2.0)

# Component order of degree-2 cochains: the direction pairs of the faces.
FACE_PAIRS = ((0, 1), (0, 2), (1, 2))
COMPONENTS = {0: 1, 1: 3, 2: 3, 3: 1}


@dataclass(frozen=True)
class LieBasis:
    """Trace-orthonormal anti-Hermitian basis of su(2)."""

    tau: np.ndarray

    @classmethod
    def standard(cls) -> "LieBasis":
        return cls(tau=TAU.copy())

    def structure_constants(self) -> np.ndarray:
        """f[a,b,c] with [tau_a, tau_b] = sum_c f[a,b,c] tau_c (real)."""
        f = np.zeros((3, 3, 3))
        for a in range(3):
            for b in range(3):
                comm = self.tau[a] @ self.tau[b] - self.tau[b] @ self.tau[a]
                for c in range(3):
                    coef = np.trace(self.tau[c].conj().T @ comm)
                    f[a, b, c] = coef.real
        return f

    def gram(self) -> np.ndarray:
        g = np.einsum("aji,bjk->ab", self.tau.conj(), self.tau)
        return g


@dataclass(frozen=True)
class Lattice:
    """Periodic cubic lattice with oriented cell tables.

    Vertex index: v = (i*n + j)*n + k for integer coordinates (i, j, k) along
    the axes (x, y, z).  Edge e = dir*n^3 + v, face f = pair*n^3 + v (pair
    indexes FACE_PAIRS), cell c = v.
    """

    n: int
    spacing: float

    @property
    def nvertices(self) -> int:
        return self.n**3

    @property
    def nedges(self) -> int:
        return 3 * self.n**3

    @property
    def nfaces(self) -> int:
        return 3 * self.n**3

    @property
    def ncells(self) -> int:
        return self.n**3

    @property
    def volume(self) -> float:
        return (self.n * self.spacing) ** 3

    @property
    def extent(self) -> float:
        return self.n * self.spacing

    def cell_count(self, degree: int) -> int:
        return (self.nvertices, self.nedges, self.nfaces, self.ncells)[degree]

    def vertex_grid_shape(self) -> tuple[int, int, int]:
        return (self.n, self.n, self.n)

    @cached_property
    def vertex_integer_coords(self) -> np.ndarray:
        """(nv, 3) integer coordinates (i, j, k) per vertex index."""
        n = self.n
        idx = np.arange(n**3)
        i = idx // (n * n)
        j = (idx // n) % n
        k = idx % n
        return np.stack([i, j, k], axis=1)

    @cached_property
    def vertex_coords(self) -> np.ndarray:
        return self.vertex_integer_coords * self.spacing

    def shifted_vertices(self, axis: int, step: int) -> np.ndarray:
        """Vertex index of v + step*e_axis (periodic)."""
        coords = self.vertex_integer_coords.copy()
        coords[:, axis] = (coords[:, axis] + step) % self.n
        return (coords[:, 0] * self.n + coords[:, 1]) * self.n + coords[:, 2]

    @cached_property
    def face_edge_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(nfaces, 4) edge indices and signs bounding each face."""
        nv = self.nvertices
        v = np.arange(nv)
        edges = np.zeros((self.nfaces, 4), dtype=np.int64)
        signs = np.zeros((self.nfaces, 4), dtype=np.int8)
        for p, (mu, nu) in enumerate(FACE_PAIRS):
            rows = p * nv + v
            edges[rows, 0] = mu * nv + v
            edges[rows, 1] = nu * nv + self.shifted_vertices(mu, +1)
            edges[rows, 2] = mu * nv + self.shifted_vertices(nu, +1)
            edges[rows, 3] = nu * nv + v
            signs[rows] = np.array([1, 1, -1, -1], dtype=np.int8)
        return edges, signs

    @cached_property
    def cell_face_table(self) -> tuple[np.ndarray, np.ndarray]:
        """(ncells, 6) face indices and signs bounding each cell."""
        nv = self.nvertices
        v = np.arange(nv)
        faces = np.zeros((self.ncells, 6), dtype=np.int64)
        signs = np.zeros((self.ncells, 6), dtype=np.int8)
        # pair 0 = (0,1) varies along axis 2, pair 1 = (0,2) along 1, pair 2 = (1,2) along 0
        faces[v, 0] = 0 * nv + self.shifted_vertices(2, +1)
        faces[v, 1] = 0 * nv + v
        faces[v, 2] = 1 * nv + self.shifted_vertices(1, +1)
        faces[v, 3] = 1 * nv + v
        faces[v, 4] = 2 * nv + self.shifted_vertices(0, +1)
        faces[v, 5] = 2 * nv + v
        signs[v] = np.array([1, -1, -1, 1, 1, -1], dtype=np.int8)
        return faces, signs

    def boundary_of_boundary_defect(self) -> int:
        """Max |total signed edge incidence| over cells; 0 when tables are consistent."""
        face_edges, face_signs = self.face_edge_table
        cell_faces, cell_signs = self.cell_face_table
        worst = 0
        for c in range(self.ncells):
            acc: dict[int, int] = {}
            for f, sf in zip(cell_faces[c], cell_signs[c]):
                for e, se in zip(face_edges[f], face_signs[f]):
                    acc[e] = acc.get(e, 0) + int(sf) * int(se)
            worst = max(worst, max(abs(t) for t in acc.values()))
        return worst


def build_lattice(n: int, spacing: float) -> Lattice:
    if n < 2:
        raise ConfigurationError(f"edge count per axis must be >= 2, got {n}")
    if spacing <= 0:
        raise ConfigurationError(f"spacing must be positive, got {spacing}")
    return Lattice(n=int(n), spacing=float(spacing))


@dataclass
class LieCochain:
    """Degree-k form with 2x2 complex matrix components sampled at vertices.

    values has shape (nvertices, COMPONENTS[degree], 2, 2).
    """

    lattice: Lattice
    degree: int
    values: np.ndarray

    def __post_init__(self):
        if self.degree not in (0, 1, 2, 3):
            raise DomainMismatchError(f"cochain degree must be 0..3, got {self.degree}")
        want = (self.lattice.nvertices, COMPONENTS[self.degree], 2, 2)
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != want:
            raise DomainMismatchError(
                f"cochain storage {self.values.shape} does not match {want}"
            )

    @classmethod
    def zero(cls, lattice: Lattice, degree: int) -> "LieCochain":
        return cls(lattice, degree, np.zeros((lattice.nvertices, COMPONENTS[degree], 2, 2), dtype=complex))

    def copy(self) -> "LieCochain":
        return LieCochain(self.lattice, self.degree, self.values.copy())

    def __add__(self, other: "LieCochain") -> "LieCochain":
        self._compatible(other)
        return LieCochain(self.lattice, self.degree, self.values + other.values)

    def __sub__(self, other: "LieCochain") -> "LieCochain":
        self._compatible(other)
        return LieCochain(self.lattice, self.degree, self.values - other.values)

    def __rmul__(self, scalar) -> "LieCochain":
        return LieCochain(self.lattice, self.degree, scalar * self.values)

    def __neg__(self) -> "LieCochain":
        return LieCochain(self.lattice, self.degree, -self.values)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    def _compatible(self, other: "LieCochain"):
        if self.degree != other.degree or self.lattice != other.lattice:
            raise DomainMismatchError("cochains live on different complexes or degrees")


def _grid(lat: Lattice, comp: np.ndarray) -> np.ndarray:
    """View a per-vertex field (nv, ...) as (n, n, n, ...)."""
    return comp.reshape(lat.vertex_grid_shape() + comp.shape[1:])


def _flat(lat: Lattice, grid: np.ndarray) -> np.ndarray:
    return grid.reshape((lat.nvertices,) + grid.shape[3:])


def central_difference(lat: Lattice, comp: np.ndarray, axis: int) -> np.ndarray:
    """Centered difference of a per-vertex field along a lattice axis."""
    g = _grid(lat, comp)
    out = (np.roll(g, -1, axis=axis) - np.roll(g, 1, axis=axis)) / (2.0 * lat.spacing)
    return _flat(lat, out)


def stencil_laplacian(lat: Lattice, comp: np.ndarray) -> np.ndarray:
    """Combinatorial (nearest-neighbour) Laplacian, positive semi-definite.

    Plane waves are eigenfields with eigenvalue sum_mu 4 sin^2(pi k_mu / n) / a^2.
    """
    g = _grid(lat, comp)
    out = np.zeros_like(g)
    for axis in range(3):
        out += 2.0 * g - np.roll(g, -1, axis=axis) - np.roll(g, 1, axis=axis)
    return _flat(lat, out) / lat.spacing**2


def coboundary(x: LieCochain) -> LieCochain:
    """Discrete exterior derivative; raises the degree by one, d.d = 0 exactly."""
    if x.degree > 2:
        raise DomainMismatchError("coboundary is undefined on degree-3 cochains")
    lat = x.lattice
    d = lambda comp, axis: central_difference(lat, comp, axis)
    v = x.values
    if x.degree == 0:
        f = v[:, 0]
        out = np.stack([d(f, 0), d(f, 1), d(f, 2)], axis=1)
        return LieCochain(lat, 1, out)
    if x.degree == 1:
        w0, w1, w2 = v[:, 0], v[:, 1], v[:, 2]
        out = np.stack(
            [
                d(w1, 0) - d(w0, 1),
                d(w2, 0) - d(w0, 2),
                d(w2, 1) - d(w1, 2),
            ],
            axis=1,
        )
        return LieCochain(lat, 2, out)
    b01, b02, b12 = v[:, 0], v[:, 1], v[:, 2]
    out = (d(b12, 0) - d(b02, 1) + d(b01, 2))[:, None]
    return LieCochain(lat, 3, out)


def _mat(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.einsum("vab,vbc->vac", x, y)


def wedge(x: LieCochain, y: LieCochain) -> LieCochain:
    """Vertex-local wedge with matrix-product coefficients.

    Bilinear, associative, and degree-additive; the traced pairing
    trace_integrate(wedge(., .)) is graded symmetric exactly because the
    factors are evaluated at a common vertex.
    """
    if x.lattice != y.lattice:
        raise DomainMismatchError("wedge operands live on different lattices")
    p, q = x.degree, y.degree
    if p + q > 3:
        raise DomainMismatchError(f"wedge degree {p}+{q} exceeds 3")
    lat = x.lattice
    xv, yv = x.values, y.values
    if p == 0:
        out = np.einsum("vab,vcbd->vcad", xv[:, 0], yv)
        return LieCochain(lat, q, out)
    if q == 0:
        out = np.einsum("vcab,vbd->vcad", xv, yv[:, 0])
        return LieCochain(lat, p, out)
    if p == 1 and q == 1:
        out = np.stack(
            [
                _mat(xv[:, 0], yv[:, 1]) - _mat(xv[:, 1], yv[:, 0]),
                _mat(xv[:, 0], yv[:, 2]) - _mat(xv[:, 2], yv[:, 0]),
                _mat(xv[:, 1], yv[:, 2]) - _mat(xv[:, 2], yv[:, 1]),
            ],
            axis=1,
        )
        return LieCochain(lat, 2, out)
    if p == 1 and q == 2:
        out = _mat(xv[:, 0], yv[:, 2]) - _mat(xv[:, 1], yv[:, 1]) + _mat(xv[:, 2], yv[:, 0])
        return LieCochain(lat, 3, out[:, None])
    # p == 2, q == 1
    out = _mat(xv[:, 0], yv[:, 2]) - _mat(xv[:, 1], yv[:, 1]) + _mat(xv[:, 2], yv[:, 0])
    return LieCochain(lat, 3, out[:, None])


def trace_integrate(x: LieCochain) -> complex:
    """Integral over the torus of the traced top form."""
    if x.degree != 3:
        raise DomainMismatchError("trace integration needs a degree-3 cochain")
    tr = np.einsum("vcaa->", x.values)
    return complex(tr * x.lattice.spacing**3)


def wedge_pairing(x: LieCochain, y: LieCochain) -> complex:
    """trace_integrate(wedge(x, y)) for complementary degrees."""
    return trace_integrate(wedge(x, y))


@dataclass(frozen=True)
class InnerProduct:
    """Descriptor of the metric on cochains: plain L2 or Sobolev with (1 + Lap^p)."""

    kind: str
    p: int = 0

    @classmethod
    def l2(cls) -> "InnerProduct":
        return cls(kind="l2")

    @classmethod
    def sobolev(cls, p: int) -> "InnerProduct":
        if p < 0 or int(p) != p:
            raise ConfigurationError(f"Sobolev exponent must be a nonnegative integer, got {p}")
        return cls(kind="sobolev", p=int(p))

    def label(self) -> str:
        return "l2" if self.kind == "l2" else f"sobolev{self.p}"


def sobolev_transform(lat: Lattice, comp: np.ndarray, p: int) -> np.ndarray:
    """(1 + Lap^p) applied componentwise; p = 0 gives the scale factor 2."""
    acc = comp
    for _ in range(p):
        acc = stencil_laplacian(lat, acc)
    return comp + acc


def inner_product(x: LieCochain, y: LieCochain, descriptor: InnerProduct) -> complex:
    """Sesquilinear, Hermitian, positive definite pairing of equal-degree cochains."""
    if x.degree != y.degree:
        raise DomainMismatchError(
            f"inner product needs equal degrees, got {x.degree} and {y.degree}"
        )
    if x.lattice != y.lattice:
        raise DomainMismatchError("inner product operands live on different lattices")
    lat = x.lattice
    xv, yv = x.values, y.values
    if descriptor.kind == "sobolev":
        xv = sobolev_transform(lat, xv, descriptor.p)
        yv = sobolev_transform(lat, yv, descriptor.p)
    val = np.einsum("vcab,vcab->", xv.conj(), yv)
    return complex(val * lat.spacing**3)
