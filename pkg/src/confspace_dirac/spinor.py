"""Spin-bundle pair in a fixed trivialization: embedding of gauge-tangent
modes into spinor-valued one-forms, the single-particle charge conjugation,
and the frame-dependence diagnostics of the Sobolev metric.

A spinor field stores a C^2 + C^2 value per vertex; a spinor one-form stores
one such value per (vertex, direction).  A reference frame is a pair of
C^2-valued vertex functions, pointwise orthonormal; the embedded one-form
applies the su(2) matrix of the gauge mode to the two frame legs and places
the results in the two bundle slots.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import ConfigurationError, DomainMismatchError
from .lattice import InnerProduct, Lattice, LieCochain, sobolev_transform
from .modes import ModeBasis, _wave_field, _wavevectors

# epsilon = i sigma_2; the quaternionic structure of C^2
EPS = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)

FRAME_TOL = 1e-10


@dataclass
class SpinorField:
    """C^2 + C^2 valued vertex function; values shape (nvertices, 4)."""

    lattice: Lattice
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.lattice.nvertices, 4):
            raise DomainMismatchError("spinor field storage must be (nvertices, 4)")


@dataclass
class SpinorOneForm:
    """Spinor-valued one-form; values shape (nvertices, 3, 4)."""

    lattice: Lattice
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        if self.values.shape != (self.lattice.nvertices, 3, 4):
            raise DomainMismatchError("spinor one-form storage must be (nvertices, 3, 4)")

    def __add__(self, other):
        return SpinorOneForm(self.lattice, self.values + other.values)

    def __sub__(self, other):
        return SpinorOneForm(self.lattice, self.values - other.values)

    def __rmul__(self, scalar):
        return SpinorOneForm(self.lattice, scalar * self.values)


@dataclass
class ReferenceFrame:
    """Two C^2-valued vertex functions forming an orthonormal basis pointwise."""

    lattice: Lattice
    psi1: np.ndarray
    psi2: np.ndarray

    def __post_init__(self):
        nv = self.lattice.nvertices
        self.psi1 = np.asarray(self.psi1, dtype=complex)
        self.psi2 = np.asarray(self.psi2, dtype=complex)
        if self.psi1.shape != (nv, 2) or self.psi2.shape != (nv, 2):
            raise DomainMismatchError("frame legs must have shape (nvertices, 2)")

    def orthonormality_defect(self) -> float:
        g11 = np.einsum("vi,vi->v", self.psi1.conj(), self.psi1)
        g22 = np.einsum("vi,vi->v", self.psi2.conj(), self.psi2)
        g12 = np.einsum("vi,vi->v", self.psi1.conj(), self.psi2)
        return float(max(np.max(np.abs(g11 - 1)), np.max(np.abs(g22 - 1)), np.max(np.abs(g12))))

    def require_orthonormal(self):
        defect = self.orthonormality_defect()
        if defect > FRAME_TOL:
            raise ConfigurationError(f"frame is not pointwise orthonormal: defect {defect:g}")

    def transformed(self, unitary: np.ndarray) -> "ReferenceFrame":
        """Apply a pointwise 2x2 matrix field (nv, 2, 2) or a constant matrix."""
        u = np.asarray(unitary, dtype=complex)
        if u.shape == (2, 2):
            u = np.broadcast_to(u, (self.lattice.nvertices, 2, 2))
        return ReferenceFrame(
            self.lattice,
            np.einsum("vij,vj->vi", u, self.psi1),
            np.einsum("vij,vj->vi", u, self.psi2),
        )


def standard_frame(lat: Lattice) -> ReferenceFrame:
    psi1 = np.zeros((lat.nvertices, 2), dtype=complex)
    psi2 = np.zeros((lat.nvertices, 2), dtype=complex)
    psi1[:, 0] = 1.0
    psi2[:, 1] = 1.0
    return ReferenceFrame(lat, psi1, psi2)


def embed_mode(omega: LieCochain, frame: ReferenceFrame) -> SpinorOneForm:
    """Apply the su(2) matrix of the mode to both frame legs, slot by slot.

    Linear in the mode; with the plain metric the embedding preserves the
    traced gauge pairing for every orthonormal frame.
    """
    if omega.degree != 1:
        raise DomainMismatchError("only one-forms embed into spinor one-forms")
    frame.require_orthonormal()
    s1 = np.einsum("vmij,vj->vmi", omega.values, frame.psi1)
    s2 = np.einsum("vmij,vj->vmi", omega.values, frame.psi2)
    return SpinorOneForm(omega.lattice, np.concatenate([s1, s2], axis=2))


def spinor_inner(x: SpinorOneForm | SpinorField, y: SpinorOneForm | SpinorField,
                 descriptor: InnerProduct = InnerProduct.l2()) -> complex:
    if type(x) is not type(y) or x.lattice != y.lattice:
        raise DomainMismatchError("spinor inner product needs matching operands")
    xv, yv = x.values, y.values
    if descriptor.kind == "sobolev":
        xv = sobolev_transform(x.lattice, xv, descriptor.p)
        yv = sobolev_transform(y.lattice, yv, descriptor.p)
    return complex(np.sum(xv.conj() * yv) * x.lattice.spacing**3)


def charge_conjugation(x: SpinorOneForm | SpinorField):
    """Antilinear isometry acting as eps . conj on each C^2 slot; squares to -1
    and commutes with the diagonal su(2) action."""
    v = x.values.conj()
    out = np.empty_like(v)
    out[..., 0:2] = np.einsum("ij,...j->...i", EPS, v[..., 0:2])
    out[..., 2:4] = np.einsum("ij,...j->...i", EPS, v[..., 2:4])
    return type(x)(x.lattice, out)


# ---------------------------------------------------------------------------
# Basis extension
# ---------------------------------------------------------------------------

def _completion_seed_iter(lat: Lattice) -> Iterator[SpinorOneForm]:
    """Deterministic spinor plane-wave seeds: trig(2 pi k.x / L) on a single
    (slot, direction) component, ordered by (|k|^2, k lex, slot, direction,
    cos before sin)."""
    for k in _wavevectors(3 * lat.n**2 + 1):
        trigs = ("cos",) if k == (0, 0, 0) else ("cos", "sin")
        for slot in range(4):
            for mu in range(3):
                for trig in trigs:
                    vals = np.zeros((lat.nvertices, 3, 4), dtype=complex)
                    vals[:, mu, slot] = _wave_field(lat, k, trig)
                    yield SpinorOneForm(lat, vals)


def _project_out(vec: SpinorOneForm, basis: list[SpinorOneForm],
                 descriptor: InnerProduct) -> SpinorOneForm:
    w = SpinorOneForm(vec.lattice, vec.values.copy())
    for _ in range(2):
        for u in basis:
            w = w - spinor_inner(u, w, descriptor) * u
    return w


def extend_basis(embedded: list[SpinorOneForm], target: int,
                 descriptor: InnerProduct = InnerProduct.l2(),
                 conjugation_closed: bool = True) -> list[SpinorOneForm]:
    """Extend orthonormal embedded modes to an orthonormal family of size target.

    The first len(embedded) members are the inputs themselves.  The completion
    first adjoins the charge-conjugate images of the embedded block, then the
    documented spinor plane-wave family; with conjugation_closed each accepted
    seed is followed by its conjugate image, keeping the span stable under the
    antilinear conjugation whenever target allows it.
    """
    if not embedded:
        raise ConfigurationError("need at least one embedded mode to extend")
    lat = embedded[0].lattice
    n = len(embedded)
    if target < n:
        raise DomainMismatchError(f"target {target} below embedded count {n}")
    if target > 12 * lat.nvertices:
        raise DomainMismatchError(
            f"target {target} exceeds the spinor one-form dimension {12 * lat.nvertices}"
        )
    basis = list(embedded)

    def try_append(candidate: SpinorOneForm) -> bool:
        if len(basis) >= target:
            return False
        w = _project_out(candidate, basis, descriptor)
        nrm = np.sqrt(abs(spinor_inner(w, w, descriptor)))
        if nrm < 1e-8:
            return False
        basis.append((1.0 / nrm) * w)
        return True

    if conjugation_closed:
        for v in embedded:
            try_append(charge_conjugation(v))
    for seed in _completion_seed_iter(lat):
        if len(basis) >= target:
            break
        if try_append(seed) and conjugation_closed:
            try_append(charge_conjugation(basis[-1]))
    if len(basis) < target:
        raise ConfigurationError("completion seed family exhausted before target")
    return basis[:target]


def embedded_gauge_modes(basis: ModeBasis, frame: ReferenceFrame) -> list[SpinorOneForm]:
    return [embed_mode(basis.mode_cochain(i), frame) for i in range(basis.count)]


def gram_matrix(family: list[SpinorOneForm], descriptor: InnerProduct) -> np.ndarray:
    m = len(family)
    g = np.zeros((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            g[i, j] = spinor_inner(family[i], family[j], descriptor)
    return g


def mode_conjugation_matrix(family: list[SpinorOneForm],
                            descriptor: InnerProduct = InnerProduct.l2(),
                            span_tol: float = 1e-8) -> np.ndarray:
    """Matrix G of the conjugation in the orthonormal family: C psi_j = sum_i G[i,j] psi_i.

    Requires the span to be conjugation-closed; the defect of each image
    against the span is checked to span_tol.
    """
    m = len(family)
    g = np.zeros((m, m), dtype=complex)
    for j in range(m):
        img = charge_conjugation(family[j])
        norm2 = abs(spinor_inner(img, img, descriptor))
        rem = img
        for i in range(m):
            g[i, j] = spinor_inner(family[i], img, descriptor)
            rem = rem - g[i, j] * family[i]
        defect = np.sqrt(abs(spinor_inner(rem, rem, descriptor)) / max(norm2, 1e-30))
        if defect > span_tol:
            raise ConfigurationError(
                f"conjugate of member {j} leaves the span (defect {defect:g}); "
                "extend the basis with conjugation closure"
            )
    return g


def sobolev_frame_dependence(basis: ModeBasis, frame1: ReferenceFrame,
                             frame2: ReferenceFrame, p: int) -> dict:
    """Compare the Sobolev Gram matrices of the embedded modes in two frames.

    Constant frame changes leave the flat-metric Gram unchanged; pointwise
    ones generically do not.  Returns the measured difference, not a verdict.
    """
    frame1.require_orthonormal()
    frame2.require_orthonormal()
    descriptor = InnerProduct.sobolev(p)
    fam1 = embedded_gauge_modes(basis, frame1)
    fam2 = embedded_gauge_modes(basis, frame2)
    g1 = gram_matrix(fam1, descriptor)
    g2 = gram_matrix(fam2, descriptor)
    return {
        "max_abs_difference": float(np.max(np.abs(g1 - g2))),
        "gram_frame1": g1,
        "gram_frame2": g2,
    }
