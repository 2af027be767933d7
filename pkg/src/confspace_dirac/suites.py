"""The verification suites: each one exercises a family of operator
identities at desk scale and returns a record of measured residuals against
pinned tolerances, plus table- and figure-ready artifacts.

Scales that a criterion pins (an odd per-mode dimension for the kernel
count, the two-mode rotation space, the single-axis kernel family) are fixed
inside the suite and echoed in its notes; everything else follows the
experiment config.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import boson as bos
from . import dirac as dc
from . import fock as fk
from . import lattice as lt
from . import modes as md
from . import numerics as nm
from . import spinor as spn
from .config import SUITE_NAMES, ExperimentConfig
from .poly import CSPolynomial, Polynomial, random_cubic

SUITE_INDEX = {name: i + 1 for i, name in enumerate(SUITE_NAMES)}


@dataclass
class CheckRow:
    suite: str
    name: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool
    note: str = ""


@dataclass
class SuiteResult:
    suite: str
    checks: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    spectra: list = field(default_factory=list)     # (label, index, eigenvalue, residual)
    kernels: list = field(default_factory=list)     # (m1, m2, component, value)
    curves: dict = field(default_factory=dict)      # label -> (x array, y array)
    elapsed: float = 0.0

    def check(self, name: str, residual: float, tolerance: float, note: str = ""):
        self.checks.append(CheckRow(
            suite=self.suite, name=name, anchor=f"{self.suite}.{name}",
            residual=float(residual), tolerance=float(tolerance),
            passed=bool(float(residual) < float(tolerance)), note=note,
        ))

    def flag(self, name: str, condition: bool, note: str = ""):
        """Yes/no outcome encoded as residual 0/1 against tolerance 1/2."""
        self.check(name, 0.0 if condition else 1.0, 0.5, note)

    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _rng(config: ExperimentConfig, suite: str) -> np.random.Generator:
    return np.random.default_rng([config.seed, SUITE_INDEX[suite]])


def _maxabs(mat: sp.spmatrix) -> float:
    m = sp.csr_matrix(mat)
    return float(np.max(np.abs(m.data))) if m.nnz else 0.0


# ---------------------------------------------------------------------------
# car-relations
# ---------------------------------------------------------------------------

def run_car_relations(config: ExperimentConfig) -> SuiteResult:
    res = SuiteResult("car-relations")
    rng = _rng(config, res.suite)
    m = config.fermion_count
    res.notes.append(f"fermionic modes M={m}, Fock dimension {2**m}")
    fb = fk.FockBasis(m)
    eye = nm.identity(fb.dim)
    exts = [fk.ext_slot(fb, i) for i in range(m)]
    ints = [fk.int_slot(fb, i) for i in range(m)]
    cs = [fk.clifford_c(fb, np.eye(m)[i]) for i in range(m)]
    cbars = [fk.clifford_cbar(fb, np.eye(m)[i]) for i in range(m)]

    fams = {name: 0.0 for name in (
        "ext-ext", "int-int", "ext-int-pairing", "ext-adjoint-is-int",
        "c-c", "cbar-cbar", "c-cbar", "c-self-adjoint", "cbar-anti-self-adjoint")}
    for i in range(m):
        fams["ext-adjoint-is-int"] = max(fams["ext-adjoint-is-int"],
                                         _maxabs(exts[i].conj().T - ints[i]))
        fams["c-self-adjoint"] = max(fams["c-self-adjoint"],
                                     _maxabs(cs[i].conj().T - cs[i]))
        fams["cbar-anti-self-adjoint"] = max(fams["cbar-anti-self-adjoint"],
                                             _maxabs(cbars[i].conj().T + cbars[i]))
        for j in range(m):
            delta = eye if i == j else None
            fams["ext-ext"] = max(fams["ext-ext"], _maxabs(fk.anticommutator(exts[i], exts[j])))
            fams["int-int"] = max(fams["int-int"], _maxabs(fk.anticommutator(ints[i], ints[j])))
            r = fk.anticommutator(exts[i], ints[j])
            fams["ext-int-pairing"] = max(fams["ext-int-pairing"],
                                          _maxabs(r - delta if delta is not None else r))
            r = fk.anticommutator(cs[i], cs[j])
            fams["c-c"] = max(fams["c-c"], _maxabs(r - delta if delta is not None else r))
            r = fk.anticommutator(cbars[i], cbars[j])
            fams["cbar-cbar"] = max(fams["cbar-cbar"],
                                    _maxabs(r + delta if delta is not None else r))
            fams["c-cbar"] = max(fams["c-cbar"], _maxabs(fk.anticommutator(cs[i], cbars[j])))
    for name, worst in fams.items():
        res.check(name, worst, 1e-12)

    vac = fb.vacuum()
    created = exts[0] @ vac
    res.check("vacuum-create", float(np.linalg.norm(created - fb.basis_state(1))), 1e-14)
    res.check("vacuum-annihilate", float(np.linalg.norm(ints[0] @ vac)), 1e-14)
    res.check("cbar-squared-is-minus-half",
              _maxabs(cbars[1] @ cbars[1] + 0.5 * eye), 1e-13)
    u = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    v = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    pair = fk.anticommutator(fk.ext(fb, u), fk.interior(fb, v)) - np.vdot(v, u) * eye
    res.check("vector-pairing", _maxabs(pair), 1e-12,
              note="anticommutator of ext(u) with int(v) equals <v,u> identity")
    g = fk.grading(fb)
    res.check("grading-anticommutes-c",
              _maxabs(fk.anticommutator(g, fk.clifford_c(fb, u))), 1e-12)
    res.check("grading-anticommutes-cbar",
              _maxabs(fk.anticommutator(g, fk.clifford_cbar(fb, v))), 1e-12)
    shift = fk.particle_shift_signature(fb, exts[0])
    res.flag("ext-shift-signature", shift == "+1", note=f"signature {shift}")
    return res


# ---------------------------------------------------------------------------
# real-structure
# ---------------------------------------------------------------------------

def _ordering_discovery(mm: int, rng: np.random.Generator) -> tuple[str, float, float]:
    """Exhaustively decide the placement of the particle-number sign in the
    conjugation relation on an mm-mode Fock space (matrix equality covers
    every basis state)."""
    fb = fk.FockBasis(mm)
    base = fk.standard_mode_conjugation(mm)
    q, _ = np.linalg.qr(rng.standard_normal((mm, mm)) + 1j * rng.standard_normal((mm, mm)))
    c1 = fk.AntilinearOperator(q @ base.linear.toarray() @ q.T)
    cf = fk.fock_charge_conjugation(fb, c1)
    psi = rng.standard_normal(mm) + 1j * rng.standard_normal(mm)
    cbar = fk.clifford_cbar(fb, psi)
    cbar_conj = fk.clifford_cbar(fb, c1.apply(psi))
    g = fk.grading(fb)
    lhs = cf.linear @ cbar.conj() @ cf.linear.conj()
    res_in = _maxabs(lhs - cbar_conj @ g)
    res_out = _maxabs(lhs - g @ cbar_conj)
    ordering = "sign-on-input" if res_in < res_out else "sign-on-output"
    return ordering, res_in, res_out


def run_real_structure(config: ExperimentConfig) -> SuiteResult:
    res = SuiteResult("real-structure")
    rng = _rng(config, res.suite)
    m = config.fermion_count - (config.fermion_count % 2)
    res.notes.append(
        f"multiplicative conjugation checked at M={m}; operator identity at "
        "N=M=2, occupation cutoff 3")

    fb = fk.FockBasis(m)
    c1 = fk.standard_mode_conjugation(m)
    cf = fk.fock_charge_conjugation(fb, c1)
    res.check("mode-conjugation-squares-to-minus-one",
              _maxabs(c1.square() + sp.identity(m, dtype=complex)), 1e-14)
    expect = sp.diags(((-1.0) ** fb.popcounts).astype(complex), format="csr")
    res.check("fock-conjugation-squared-is-sector-sign",
              _maxabs(cf.square() - expect), 1e-12)
    res.check("fock-conjugation-isometry", cf.isometry_defect(), 1e-12)
    res.check("fock-conjugation-fixes-vacuum",
              float(np.linalg.norm(cf.apply(fb.vacuum()) - fb.vacuum())), 1e-14)

    # pairing reality under the antiunitary conjugation
    worst = 0.0
    for _ in range(8):
        a = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        b = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        lhs = np.vdot(a, b)
        rhs = np.conj(np.vdot(c1.apply(a), c1.apply(b)))
        worst = max(worst, abs(lhs - rhs))
    res.check("pairing-reality", worst, 1e-12)

    # placement of the particle-number sign: smallest space carrying a
    # quaternionic conjugation is M=4 (odd dimensions admit none)
    ordering4, r_in4, r_out4 = _ordering_discovery(4, rng)
    res.flag("sign-placement-discovered",
             ordering4 == "sign-on-input" and r_in4 < 1e-12 and r_out4 > 0.1,
             note=f"M=4 exhaustive: input {r_in4:.2e}, output {r_out4:.2e}")
    ordering_m, r_in_m, r_out_m = _ordering_discovery(m, rng)
    res.check("sign-placement-asserted", r_in_m, 1e-12,
              note=f"M={m}: discovered placement '{ordering_m}' reproduced")

    # doubled operator identity at N=M=2, cutoff 3
    boson = bos.BosonBasis(2, 3)
    fock2 = fk.FockBasis(2)
    c12 = fk.standard_mode_conjugation(2)
    dirac = dc.big_d(boson, fock2, c12)
    cf2 = fk.fock_charge_conjugation(fock2, c12)
    jop = dc.big_j(cf2, boson.dim)
    gam = dc.DoubledOperator.gamma(dirac.dim)
    rep = dc.check_real_structure(dirac, jop, gam, fock2, boson, tol=1e-10)
    ordering = rep.constants.get("consistent_ordering")
    for c in rep.checks:
        res.check(c["name"].split(".", 1)[1], c["residual"], c["tolerance"], c["note"])
    res.constants["consistent_ordering"] = ordering
    res.constants["ordering_residuals"] = {
        k: float(v) for k, v in rep.data["ordering_residuals"].items()}

    ident = dc.DoubledOperator.diagonal(nm.identity(dirac.dim), nm.identity(dirac.dim))
    rep_neg = dc.check_real_structure(dirac, jop, ident, fock2, boson, tol=1e-10)
    neg_min = min(rep_neg.data["ordering_residuals"].values())
    res.flag("negative-control-without-gamma", neg_min > 0.1,
             note=f"identity replacing the sign block leaves residual {neg_min:.3f}")

    # doubled conjugation squares to the sector sign; gamma relations
    pop = np.kron(np.ones(boson.dim, dtype=np.int64), fock2.popcounts)
    worst = 0.0
    for idx in range(2 * dirac.dim):
        e = np.zeros(2 * dirac.dim, dtype=complex)
        e[idx] = 1.0
        out = jop.apply(jop.apply(e))
        sign = -1.0 if pop[idx % dirac.dim] % 2 else 1.0
        worst = max(worst, float(np.max(np.abs(out - sign * e))))
    res.check("doubled-conjugation-squared", worst, 1e-12)
    v = rng.standard_normal(2 * dirac.dim) + 1j * rng.standard_normal(2 * dirac.dim)
    res.check("gamma-squared",
              float(np.max(np.abs(gam.apply(gam.apply(v)) - v))), 1e-14)
    res.check("gamma-anticommutes-conjugation",
              float(np.max(np.abs(gam.apply(jop.apply(v)) + jop.apply(gam.apply(v))))), 1e-12)
    dminus, dplus = dirac.adjoint_defects()
    res.constants["adjoint_defect_minus"] = dminus
    res.constants["adjoint_defect_plus"] = dplus
    res.notes.append(
        f"adjoint defects reported, not asserted: |D - D*| = {dminus:.3e}, "
        f"|D + D*| = {dplus:.3e}")

    # geometric conjugation through the spinor chain at N=2, M=4
    lat = lt.build_lattice(2, 1.0)
    gauge = md.build_mode_basis(lat, 2, lt.InnerProduct.l2())
    frame = spn.standard_frame(lat)
    emb = spn.embedded_gauge_modes(gauge, frame)
    fam = spn.extend_basis(emb, 4)
    gmat = spn.mode_conjugation_matrix(fam)
    c1g = fk.AntilinearOperator(gmat)
    res.check("geometric-conjugation-squares-to-minus-one",
              float(np.max(np.abs(c1g.square() + np.eye(4)))), 1e-10)
    res.check("geometric-conjugation-isometry", c1g.isometry_defect(), 1e-10)
    boson_g = bos.BosonBasis(2, 3)
    fock_g = fk.FockBasis(4)
    dirac_g = dc.big_d(boson_g, fock_g, c1g)
    cf_g = fk.fock_charge_conjugation(fock_g, c1g)
    j_g = dc.big_j(cf_g, boson_g.dim)
    rep_g = dc.check_real_structure(dirac_g, j_g, dc.DoubledOperator.gamma(dirac_g.dim),
                                    fock_g, boson_g, tol=1e-10)
    res.check("operator-identity-geometric-conjugation",
              min(rep_g.data["ordering_residuals"].values()), 1e-10,
              note="doubled identity with the spinor-derived conjugation")
    return res


# ---------------------------------------------------------------------------
# cs-gradient
# ---------------------------------------------------------------------------

def run_cs_gradient(config: ExperimentConfig) -> SuiteResult:
    res = SuiteResult("cs-gradient")
    rng = _rng(config, res.suite)
    lat = lt.build_lattice(config.lattice_n, config.lattice_spacing)
    descriptor = (lt.InnerProduct.l2() if config.inner_product == "l2"
                  else lt.InnerProduct.sobolev(config.sobolev_p))
    n_wave = min(12, 9 * lat.nvertices)
    res.notes.append(
        f"lattice n={lat.n}; coefficient identity at N={n_wave}, "
        "gauge contraction at N=9 (connection-independent sector) and N=3")

    basis = md.build_mode_basis(lat, n_wave, descriptor)
    res.check("mode-orthonormality",
              float(np.max(np.abs(basis.gram - np.eye(n_wave)))), 1e-12)
    cs = md.chern_simons_coefficients(basis)
    res.check("zero-point", abs(cs.value(np.zeros(n_wave))), 1e-14)

    worst_pair = worst_direct = worst_fd = 0.0
    for _ in range(10):
        x = rng.standard_normal(n_wave)
        v = md.pair_modes_with_F(basis, x)
        grad = cs.gradient(x)
        scale = max(1.0, float(np.max(np.abs(grad))))
        worst_pair = max(worst_pair, float(np.max(np.abs(2.0 * v - grad))) / scale)
        direct = md.chern_simons_direct(basis, x)
        worst_direct = max(worst_direct,
                           abs(cs.value(x) - direct) / max(1.0, abs(direct)))
        fd = nm.finite_difference_gradient(cs.value, x, 1e-5)
        worst_fd = max(worst_fd, float(np.max(np.abs(fd - grad))) / scale)
    res.check("pairing-is-half-gradient", worst_pair, 1e-10)
    res.check("polynomial-matches-direct-evaluation", worst_direct, 1e-10)
    res.check("gradient-matches-finite-differences", worst_fd, 1e-6)

    # constant-mode sector: quadratic part vanishes, gauge contraction exact
    basis9 = md.build_mode_basis(lat, 9, descriptor)
    cs9 = md.chern_simons_coefficients(basis9)
    res.check("quadratic-term-vanishes-for-closed-modes",
              float(np.max(np.abs(cs9.Q))), 1e-12)
    worst9 = 0.0
    vmax = 0.0
    for _ in range(5):
        x = rng.standard_normal(9)
        v = md.pair_modes_with_F(basis9, x)
        vmax = max(vmax, float(np.max(np.abs(v))))
        lam = md.random_lie_cochain(lat, 0, rng)
        g = md.gauge_direction_coefficients(basis9, x, lam)
        worst9 = max(worst9, abs(float(np.dot(v, g))))
    res.check("gauge-contraction-exact-sector", worst9, 1e-9,
              note=f"largest pairing entry {vmax:.3f}, so the contraction is not vacuous")

    basis3 = md.build_mode_basis(lat, 3, descriptor)
    x3 = rng.standard_normal(3)
    v3 = md.pair_modes_with_F(basis3, x3)
    lam3 = md.random_lie_cochain(lat, 0, rng)
    g3 = md.gauge_direction_coefficients(basis3, x3, lam3)
    res.check("gauge-contraction-abelian-sector",
              max(float(np.max(np.abs(v3))), abs(float(np.dot(v3, g3)))), 1e-9,
              note="single-direction sector: the pairing itself vanishes")

    xw = rng.standard_normal(n_wave)
    vw = md.pair_modes_with_F(basis, xw)
    lamw = md.random_lie_cochain(lat, 0, rng)
    gw = md.gauge_direction_coefficients(basis, xw, lamw)
    res.constants["gauge_contraction_wave_sector"] = abs(float(np.dot(vw, gw)))
    res.notes.append(
        "wave-sector contraction is reported only; the centered product rule "
        f"defect makes it O(spacing^2): {res.constants['gauge_contraction_wave_sector']:.3e}")
    return res


# ---------------------------------------------------------------------------
# rotate-square
# ---------------------------------------------------------------------------

def run_rotate_square(config: ExperimentConfig) -> SuiteResult:
    res = SuiteResult("rotate-square")
    rng = _rng(config, res.suite)
    cutoff = config.boson_cutoff
    k = config.rotation_k
    boson = bos.BosonBasis(2, cutoff)
    fock = fk.FockBasis(2)
    c1 = fk.standard_mode_conjugation(2)
    dirac = dc.big_d(boson, fock, c1)
    res.notes.append(f"two modes, occupation cutoff {cutoff}, coupling k={k:g}")

    poly = random_cubic(rng, 2, scale=0.5)
    uplus = bos.cs_unitary(boson, k, poly)
    res.check("phase-unitarity",
              _maxabs(uplus @ uplus.conj().T - nm.identity(boson.dim)), 1e-10)
    res.check("phase-fixes-positions",
              max(_maxabs(uplus @ boson.position_op(i) @ uplus.conj().T
                          - boson.position_op(i)) for i in range(2)), 1e-10)

    # first-order conjugated-derivative identity on occupations <= cutoff - 3
    keep = np.where(boson.low_occupation_mask(3))[0]
    worst = 0.0
    grads = [poly.partial(i) for i in range(2)]
    for i in range(2):
        di = boson.derivative_op(i)
        vi = bos.polynomial_multiplication_op(boson, grads[i])
        defect = (uplus @ di @ uplus.conj().T - di + 1j * k * vi).todense()
        worst = max(worst, float(np.max(np.abs(defect[np.ix_(keep, keep)]))))
    res.check("conjugated-derivative-identity", worst, 1e-8,
              note="compressed to occupations at least the polynomial degree below the cutoff")

    agree = 0.0
    for _ in range(10):
        p = random_cubic(rng, 2, scale=0.5)
        _, a = dc.rotate(dirac, k, p, boson, fock.dim)
        agree = max(agree, a)
    res.check("two-construction-routes-agree", agree, 1e-10)

    rotated, _ = dc.rotate(dirac, k, poly, boson, fock.dim)
    rep = dc.square_and_decompose(rotated, k, poly, boson, fock)
    for c in rep.checks:
        res.check(c["name"].split(".", 1)[1], c["residual"], c["tolerance"], c["note"])
    coeffs = rep.constants["block_coefficients"]
    res.constants["block_coefficients"] = coeffs
    res.check("fermionic-normalization-is-half",
              abs(rep.constants["fermionic_normalization"] - 0.5), 1e-6)
    res.flag("cross-term-signs-opposite", bool(rep.data["cross_sign_flip"]))
    res.flag("spectral-term-signs-opposite", bool(rep.data["spectral_sign_flip"]))

    zero = Polynomial(2)
    rot0, _ = dc.rotate(dirac, k, zero, boson, fock.dim)
    sq0 = rot0.square_diagonal()
    sqd = dirac.square_diagonal()
    res.check("zero-polynomial-is-identity-rotation",
              max(_maxabs(sq0.plus - sqd.plus), _maxabs(sq0.minus - sqd.minus)), 1e-12)

    norms = []
    for kk in (1e-2, 1e-3):
        du, _ = dc.rotate(dirac, kk, poly, boson, fock.dim)
        d = du.square_diagonal().plus - sqd.plus
        norms.append(_maxabs(d))
    ratio = norms[0] / norms[1]
    res.check("small-coupling-linear-scaling", abs(ratio - 10.0), 1.0,
              note=f"deviation ratio {ratio:.3f} across one decade of k")

    # lattice-derived action: its coordinate Laplacian is -2 x the spectral term
    lat = lt.build_lattice(3, config.lattice_spacing)
    mixed = md.basis_from_seeds(lat, md.mixed_direction_seeds(lat, 3), lt.InnerProduct.l2())
    cs_lat = md.chern_simons_coefficients(mixed)
    boson3 = bos.BosonBasis(3, 4)
    lap_op = bos.polynomial_multiplication_op(boson3, cs_lat.second_derivative_trace())
    spec_op = dc.spectral_term_operator(boson3, mixed)
    res.check("action-laplacian-is-minus-twice-spectral-term",
              _maxabs(lap_op + 2.0 * spec_op), 1e-10,
              note="connects the discovered fourth dictionary term to the spectral invariant")

    # drifting frame: the same fit now measures the frame-correction term
    drift = dc.frame_drift_generators(2, 2, rng, scale=0.05)
    dirac_x = dc.big_d(bos.BosonBasis(2, min(cutoff, 6)), fock, c1, drift=drift)
    boson_x = bos.BosonBasis(2, min(cutoff, 6))
    rot_x, _ = dc.rotate(dirac_x, k, poly, boson_x, fock.dim)
    rep_x = dc.square_and_decompose(rot_x, k, poly, boson_x, fock,
                                    frame_independent=False)
    xi = max(rep_x.data.get("xi_residual_plus", 0.0), rep_x.data.get("xi_residual_minus", 0.0))
    res.constants["frame_correction_residual"] = xi
    flat_res = max(c["residual"] for c in rep.checks)
    res.flag("frame-correction-visible", xi > 100 * max(flat_res, 1e-14),
             note=f"drifting-frame residual {xi:.3e} vs flat-frame {flat_res:.3e}")
    return res


# ---------------------------------------------------------------------------
# ym-sectors
# ---------------------------------------------------------------------------

def run_ym_sectors(config: ExperimentConfig) -> SuiteResult:
    res = SuiteResult("ym-sectors")
    rng = _rng(config, res.suite)
    cutoff = config.boson_cutoff
    boson = bos.BosonBasis(2, cutoff)
    k = 0.5
    res.notes.append(f"two modes, cutoff {cutoff}, sector coupling k={k}")

    poly = random_cubic(rng, 2, scale=0.5)
    grads = dc.ym_gradient_polynomials(poly)
    hplus = dc.hamiltonian_ym(k, boson, grads, +1)
    hminus = dc.hamiltonian_ym(k, boson, grads, -1)
    res.check("sector-hermiticity",
              max(nm.hermiticity_defect(hplus), nm.hermiticity_defect(hminus)), 1e-12)

    quad = sp.csr_matrix((boson.dim, boson.dim), dtype=complex)
    pot = sp.csr_matrix((boson.dim, boson.dim), dtype=complex)
    for i in range(2):
        di = boson.derivative_op(i)
        vi = bos.polynomial_multiplication_op(boson, grads[i])
        quad = quad - di @ di
        pot = pot + vi @ vi
    common = 4.0 * k * k * (quad + pot)
    res.check("sector-sum-is-twice-common-part",
              _maxabs(hplus + hminus - 2.0 * common), 1e-12)

    free = dc.hamiltonian_ym(k, boson, [Polynomial(2) for _ in range(2)], +1)
    wfree = np.linalg.eigvalsh(np.asarray(free.todense()))
    dmat = np.asarray((1j * bos.derivative_matrix(boson.per_mode_dim)).todense())
    w1 = np.linalg.eigvalsh(dmat @ dmat)
    oracle = np.sort((4.0 * k * k * (w1[:, None] + w1[None, :])).ravel())
    res.check("free-spectrum-matches-oscillator-oracle",
              float(np.max(np.abs(np.sort(wfree) - oracle))), 1e-9,
              note="per-mode eigenvalues summed combinatorially, independent route")
    res.check("free-ground-state-nonnegative", max(0.0, -float(wfree[0])), 1e-10)
    for idx, val in enumerate(np.sort(wfree)[:16]):
        res.spectra.append(("ym-free", idx, float(val), 0.0))
    res.curves["ym-free-spectrum"] = (
        np.arange(min(32, wfree.size)), np.sort(wfree)[:32].astype(float))

    hfree_minus = dc.hamiltonian_ym(k, boson, [Polynomial(2) for _ in range(2)], -1)
    res.check("free-sectors-coincide", _maxabs(free - hfree_minus), 1e-14,
              note="cross terms vanish without field strength")
    return res


# ---------------------------------------------------------------------------
# field-commutators
# ---------------------------------------------------------------------------

def _axis_points(lat: lt.Lattice, axis: int, direction: int, lie: int):
    pts = []
    for step in range(lat.n):
        coords = [0, 0, 0]
        coords[axis] = step
        v = (coords[0] * lat.n + coords[1]) * lat.n + coords[2]
        pts.append((v, direction, lie))
    return pts


def run_field_commutators(config: ExperimentConfig) -> SuiteResult:
    res = SuiteResult("field-commutators")
    lat = lt.build_lattice(7, 1.0)
    res.notes.append(
        "single-axis wave family on a 7-lattice; commutator at N=3, "
        "concentration from N=3 to N=6")

    bases = {n: md.basis_from_seeds(lat, md.axis_wave_seeds(lat, n), lt.InnerProduct.l2())
             for n in (3, 4, 5, 6)}
    basis3 = bases[3]
    boson = bos.BosonBasis(3, 3)
    keep = np.where(boson.low_occupation_mask(1))[0]
    points = _axis_points(lat, axis=1, direction=0, lie=0)
    worst = 0.0
    for m1 in points[:3]:
        e_op = dc.field_operator_E(boson, basis3, m1)
        for m2 in points[:4]:
            a_op = dc.field_operator_A(boson, basis3, m2)
            kval = dc.reproducing_kernel(basis3, m1, m2)
            comm = (e_op @ a_op - a_op @ e_op - kval * nm.identity(boson.dim)).todense()
            worst = max(worst, float(np.max(np.abs(comm[np.ix_(keep, keep)]))))
    res.check("canonical-commutator-equals-kernel", worst, 1e-12)

    kdiag = min(dc.reproducing_kernel(bases[6], m, m) for m in points)
    res.check("kernel-diagonal-nonnegative", max(0.0, -kdiag), 1e-14)

    # off-point mass ratio decreases as the family grows
    m1 = points[1]
    a3 = lat.spacing**3
    ratios = {}
    for n, b in bases.items():
        diag = dc.reproducing_kernel(b, m1, m1)
        ratios[n] = 1.0 / (a3 * diag) - 1.0
    res.constants["concentration_ratios"] = {str(n): float(r) for n, r in ratios.items()}
    monotone = all(ratios[n + 1] < ratios[n] - 1e-12 for n in (3, 4, 5))
    res.flag("concentration-improves-with-mode-count", monotone,
             note=" > ".join(f"{ratios[n]:.4f}" for n in (3, 4, 5, 6)))

    for n, b in bases.items():
        ys = np.array([dc.reproducing_kernel(b, m1, m2) for m2 in points])
        res.curves[f"kernel-N{n}"] = (np.arange(lat.n), ys)
        for m2, val in zip(points, ys):
            res.kernels.append((f"v{m1[0]}d{m1[1]}a{m1[2]}",
                                f"v{m2[0]}d{m2[1]}a{m2[2]}", n, float(val)))

    # reproducing property: the kernel row has squared mass diag / a^3
    b6 = bases[6]
    all_points = [(v, mu, a) for v in range(lat.nvertices) for mu in range(3) for a in range(3)]
    row_mass = sum(dc.reproducing_kernel(b6, m1, m2) ** 2 for m2 in all_points)
    diag = dc.reproducing_kernel(b6, m1, m1)
    res.check("kernel-row-reproduces-diagonal",
              abs(row_mass - diag / a3) / max(1.0, abs(diag / a3)), 1e-10,
              note="squared row mass equals the diagonal over the cell volume")
    return res


# ---------------------------------------------------------------------------
# spectral-invariant
# ---------------------------------------------------------------------------

def run_spectral_invariant(config: ExperimentConfig) -> SuiteResult:
    res = SuiteResult("spectral-invariant")
    rng = _rng(config, res.suite)
    lat = lt.build_lattice(config.lattice_n, config.lattice_spacing)
    descriptor = lt.InnerProduct.l2()
    n_wave = min(12, 9 * lat.nvertices)
    res.notes.append(
        f"pairing matrix at N={n_wave}; helical family carries the nonzero "
        "asymmetry, the mixed family the nonzero slope")

    basis = md.build_mode_basis(lat, n_wave, descriptor)
    x = rng.standard_normal(n_wave)
    mat = md.covariant_derivative_matrix(basis, x)
    res.check("pairing-matrix-symmetric", float(np.max(np.abs(mat - mat.T))), 1e-10)
    x1, x2 = rng.standard_normal(n_wave), rng.standard_normal(n_wave)
    aff = (md.spectral_invariant(basis, x1 + x2) - md.spectral_invariant(basis, x1)
           - md.spectral_invariant(basis, x2) + md.spectral_invariant(basis, np.zeros(n_wave)))
    res.check("affine-in-coordinates", abs(aff), 1e-12)

    basis9 = md.build_mode_basis(lat, 9, descriptor)
    res.check("constant-basis-vanishes-at-zero",
              abs(md.spectral_invariant(basis9, np.zeros(9))), 1e-12)

    helical = md.basis_from_seeds(lat, md.helical_seeds(lat, 3), descriptor)
    xh = 0.3 * rng.standard_normal(3)
    math_ = md.covariant_derivative_matrix(helical, xh)
    eigs = np.linalg.eigvalsh(math_)
    trace = md.spectral_invariant(helical, xh)
    res.check("trace-matches-eigenvalue-sum-oracle",
              abs(trace - float(np.sum(eigs))), 1e-9)
    res.flag("helical-asymmetry-nonzero", abs(trace) > 0.1,
             note=f"signed eigenvalue sum {trace:.6f}")
    for idx, val in enumerate(eigs):
        res.spectra.append(("covariant-pairing-helical", idx, float(val), 0.0))

    mixed = md.basis_from_seeds(lat, md.mixed_direction_seeds(lat, 3), descriptor)
    s0 = md.spectral_invariant(mixed, np.zeros(3))
    slopes = np.array([md.spectral_invariant(mixed, np.eye(3)[i]) - s0 for i in range(3)])
    res.flag("mixed-family-slope-nonzero", bool(np.max(np.abs(slopes)) > 1e-3),
             note=f"slopes {np.array2string(slopes, precision=4)}")

    boson = bos.BosonBasis(3, 4)
    op = dc.spectral_term_operator(boson, mixed)
    res.check("operator-hermitian", nm.hermiticity_defect(op), 1e-12)
    doubled = bos.polynomial_multiplication_op(
        boson, Polynomial(3, c0=s0, c1=2.0 * slopes))
    direct = bos.polynomial_multiplication_op(
        boson, Polynomial(3, c0=s0, c1=slopes))
    res.check("operator-affine-structure",
              _maxabs(doubled + (-2.0) * direct - (s0 - 2.0 * s0) * nm.identity(boson.dim)),
              1e-12, note="doubling the slopes doubles the coordinate part exactly")
    return res


# ---------------------------------------------------------------------------
# kernel-degeneracy
# ---------------------------------------------------------------------------

def run_kernel_degeneracy(config: ExperimentConfig) -> SuiteResult:
    res = SuiteResult("kernel-degeneracy")
    res.notes.append(
        "N=M=2 with per-mode dimension 5 (odd) for the kernel count; "
        "per-mode dimension 4 is the even control")
    fock = fk.FockBasis(2)
    c1 = fk.standard_mode_conjugation(2)

    boson = bos.BosonBasis(2, 4)
    dirac = dc.big_d(boson, fock, c1)
    rep = dc.kernel_and_degeneracy(dirac, boson, fock, tol=1e-10)
    for c in rep.checks:
        res.check(c["name"].split(".", 1)[1], c["residual"], c["tolerance"], c["note"])
    res.constants["predicted_lower_bound"] = rep.data["predicted_kernel_lower_bound"]
    res.constants["numerical_kernel_dim"] = rep.data["numerical_kernel_dim"]
    eigs = rep.data["eigenvalues"]
    for idx, val in enumerate(eigs[:16]):
        res.spectra.append(("squared-dirac", idx, float(val), 0.0))
    res.curves["squared-dirac-lowest"] = (np.arange(len(eigs)), np.asarray(eigs, dtype=float))

    # iterative eigensolver on the positive block: one Krylov start resolves a
    # single copy of the degenerate kernel, so assert positivity and kernel
    # detection rather than multiplicities (the dense count above owns those)
    dd = (dirac.plus.conj().T @ dirac.plus).tocsr()
    lan = nm.lanczos_hermitian(dd, 5, tol=1e-9)
    res.check("iterative-eigensolver-nonnegative",
              max(0.0, -float(np.min(lan.eigenvalues))), 1e-10)
    res.check("iterative-eigensolver-finds-kernel",
              abs(float(lan.eigenvalues[0])), 1e-10,
              note="smallest Ritz value sits on the exact kernel")
    res.check("iterative-eigensolver-residuals",
              float(np.max(lan.residual_norms)), 1e-9)
    res.check("squared-operator-nonnegative",
              max(0.0, -float(np.min(eigs))), 1e-10)

    boson_even = bos.BosonBasis(2, 3)
    dirac_even = dc.big_d(boson_even, fock, c1)
    rep_even = dc.kernel_and_degeneracy(dirac_even, boson_even, fock, tol=1e-10)
    res.constants["even_control_kernel_dim"] = rep_even.data["numerical_kernel_dim"]
    res.constants["even_control_lowest_eigenvalue"] = float(rep_even.data["eigenvalues"][0])
    res.notes.append(
        "even per-mode dimension control: kernel dimension "
        f"{rep_even.data['numerical_kernel_dim']}, lowest eigenvalue "
        f"{rep_even.data['eigenvalues'][0]:.6f} (reported, not asserted)")
    return res


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_RUNNERS = {
    "car-relations": run_car_relations,
    "real-structure": run_real_structure,
    "cs-gradient": run_cs_gradient,
    "rotate-square": run_rotate_square,
    "ym-sectors": run_ym_sectors,
    "field-commutators": run_field_commutators,
    "spectral-invariant": run_spectral_invariant,
    "kernel-degeneracy": run_kernel_degeneracy,
}


def run_suite(config: ExperimentConfig, name: str) -> SuiteResult:
    if name not in _RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    t0 = time.perf_counter()
    result = _RUNNERS[name](config)
    result.elapsed = time.perf_counter() - t0
    return result


def run_selected(config: ExperimentConfig, selection: str) -> list[SuiteResult]:
    names = config.selected_suites() if selection == "all" else [selection]
    return [run_suite(config, name) for name in names]
