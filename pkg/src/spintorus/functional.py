"""The parametrized Seiberg-Witten functional, its differential in
connection, spinor and metric directions, the formal adjoint, and the
kernel (obstruction) equations.

All adjoint formulas are the exact transposes of the differential under
the frozen inner products: 1-forms with the metric pairing, spinors with
the real part of the hermitian product, symmetric endomorphisms with
(s, t) = 2 tr(st), and the traceless-hermitian block with 1/4 tr(A B*).
With those conventions the metric-direction adjoint reads

    - sym Re(nabla psi* (x) chi) + 1/4 L_v g + 1/2 (d* v) g
    - (kappa/2) (F+, theta) g - T*(theta),       v = Re(psi* (x) chi),

where kappa = 1/2 is the diagonal-block factor of the 2-form derivation
and T* is the pointwise transpose of s0 -> delta_-(s0) F^-.  The trace of
this expression combined with the spinor pairing of the second kernel
equation forces (F+, theta) = 0 and div(psi* (x) chi) = 0 on monopoles
(the two combinations carry coefficients 3/2 and 1, hence are
independent).
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .calculus import (
    codifferential_oneform,
    codifferential_twoform,
    d_oneform,
    l2_herm,
    l2_oneform,
    l2_spinor,
    l2_sym,
    lie_metric,
)
from .clifford import quadratic_map, spinor_pair_to_oneform
from .constants import GAMMA, KAPPA_TRACE, SYM0_BASIS
from .dirac import SpincFrame, dirac, dirac_variation, rho, spinor_cov_deriv
from .fields import Grid, integrate, partial_derivative
from .pointwise import hodge_star_flat, twoform_from_frame, twoform_to_frame

_GG = np.einsum("ipq,jqr->ijpr", GAMMA, GAMMA)


def _embed_plus(psi2):
    out = np.zeros(psi2.shape[:-1] + (4,), dtype=np.complex128)
    out[..., :2] = psi2
    return out


def _embed_minus(chi2):
    out = np.zeros(chi2.shape[:-1] + (4,), dtype=np.complex128)
    out[..., 2:] = chi2
    return out


def rho_twoform(frame: SpincFrame, w: np.ndarray) -> np.ndarray:
    """Clifford action of a 2-form (coordinate coefficients) on C^4."""
    wf = twoform_to_frame(frame.frames, w)
    return 0.5 * np.einsum("...ij,ijpq->...pq", wf, _GG)


def selfdual_part(frame: SpincFrame, w: np.ndarray) -> np.ndarray:
    wf = twoform_to_frame(frame.frames, w)
    return twoform_from_frame(frame.frames, 0.5 * (wf + hodge_star_flat(wf)))


def antiselfdual_part(frame: SpincFrame, w: np.ndarray) -> np.ndarray:
    wf = twoform_to_frame(frame.frames, w)
    return twoform_from_frame(frame.frames, 0.5 * (wf - hodge_star_flat(wf)))


def twoform_pointwise_inner(frame: SpincFrame, w, e):
    """<w, e> = 1/2 sum (frame components), pointwise."""
    wf = twoform_to_frame(frame.frames, w)
    ef = twoform_to_frame(frame.frames, e)
    return 0.5 * np.einsum("...ij,...ij->...", wf, np.conj(ef))


class Configuration:
    """A point (A, psi, xi) of the parametrized configuration space."""

    def __init__(self, frame: SpincFrame, a: np.ndarray, psi: np.ndarray):
        a = np.asarray(a, dtype=np.complex128)
        psi = np.asarray(psi, dtype=np.complex128)
        grid = frame.grid
        if a.shape != grid.shape + (4,):
            raise ValueError("connection form must be a 4-component field")
        if np.max(np.abs(a.real)) > 1e-12 * max(1.0, np.max(np.abs(a))):
            raise ValueError("connection form must be purely imaginary")
        if psi.shape != grid.shape + (2,):
            raise ValueError("positive spinor field must have 2 components")
        self.frame = frame
        self.a = a
        self.psi = psi

    @property
    def grid(self) -> Grid:
        return self.frame.grid

    @cached_property
    def curvature(self) -> np.ndarray:
        return d_oneform(self.grid, self.a)

    @cached_property
    def curvature_plus(self) -> np.ndarray:
        return selfdual_part(self.frame, self.curvature)

    @cached_property
    def curvature_minus(self) -> np.ndarray:
        return antiselfdual_part(self.frame, self.curvature)

    def is_irreducible(self) -> bool:
        return bool(np.max(np.abs(self.psi)) > 0)


@dataclass
class SWValue:
    """Value of the functional: negative spinor and traceless hermitian part."""

    neg_spinor: np.ndarray   # (..., 2) complex, W- components
    herm: np.ndarray         # (..., 2, 2) traceless hermitian on W+


@dataclass
class TangentVector:
    """Direction (tau, phi, s): imaginary 1-form, W+ spinor, symmetric endo."""

    tau: np.ndarray
    phi: np.ndarray
    s: np.ndarray


@dataclass
class ObstructionCovector:
    """Covector (chi, theta): W- spinor and imaginary self-dual 2-form."""

    chi: np.ndarray
    theta: np.ndarray


def sw_functional(c: Configuration) -> SWValue:
    """(D_A psi, rho(F_A^+) - [psi* (x) psi]_0); zero exactly at monopoles."""
    f1 = dirac(c.frame, c.a, _embed_plus(c.psi))[..., 2:]
    f2 = rho_twoform(c.frame, c.curvature_plus)[..., :2, :2] - quadratic_map(c.psi)
    return SWValue(f1, f2)


def monopole_defect(c: Configuration) -> float:
    """L2 size of the functional relative to the configuration size."""
    grid, g = c.grid, c.frame.metric
    val = sw_functional(c)
    num = np.sqrt(
        l2_spinor(grid, val.neg_spinor, val.neg_spinor, g).real
        + l2_herm(grid, val.herm, val.herm, g)
    )
    den = np.sqrt(
        l2_oneform(grid, c.a, c.a, g).real + l2_spinor(grid, c.psi, c.psi, g).real
    )
    return float(num / max(den, 1e-300))


def sw_differential(c: Configuration, v: TangentVector) -> SWValue:
    """Linearization at c in the direction (tau, phi, s)."""
    frame, grid = c.frame, c.grid
    psi4 = _embed_plus(c.psi)
    f1 = (
        0.5 * np.einsum("...pq,...q->...p", rho(frame, v.tau), psi4)
        + dirac(frame, c.a, _embed_plus(v.phi))
        + dirac_variation(frame, c.a, psi4, v.s)
    )[..., 2:]

    dtau_plus = selfdual_part(frame, d_oneform(grid, v.tau))
    bil = _polarized_quadratic(c.psi, v.phi)
    tr_s = np.einsum("...ii->...", v.s)
    s0 = v.s - (tr_s / 4.0)[..., None, None] * np.eye(4)
    metric_term = KAPPA_TRACE * tr_s[..., None, None] * c.curvature_plus \
        + _apply_delta_minus_frame(frame, s0, c.curvature_minus)
    f2 = (
        rho_twoform(frame, dtau_plus)[..., :2, :2]
        - bil
        - rho_twoform(frame, metric_term)[..., :2, :2]
    )
    return SWValue(f1, f2)


def _polarized_quadratic(psi, phi):
    """[phi* (x) psi + psi* (x) phi]_0 (polarization of quadratic_map)."""
    outer = np.einsum("...i,...j->...ij", psi, np.conj(phi)) + np.einsum(
        "...i,...j->...ij", phi, np.conj(psi)
    )
    tr = np.einsum("...ii->...", outer)
    return outer - 0.5 * tr[..., None, None] * np.eye(2)


def _apply_delta_minus_frame(frame: SpincFrame, s0, w):
    """delta_-(s0) w using the frame's own orthonormal conjugation."""
    e = frame.frames
    ei = np.linalg.inv(e)
    sh = np.einsum("...ab,...bc,...cd->...ad", ei, s0, e)
    wf = twoform_to_frame(e, w)
    out = np.einsum("...ki,...kj->...ij", sh, wf) + np.einsum("...ik,...kj->...ij", wf, sh)
    out = 0.5 * (out + hodge_star_flat(out))
    return twoform_from_frame(e, out)


def delta_minus_transpose(frame: SpincFrame, f_minus, theta):
    """Pointwise transpose of s0 -> delta_-(s0) F^- applied to theta.

    Satisfies (s0, out)_{2tr} = <delta_-(s0) F^-, theta> pointwise; lands
    in traceless g-symmetric endomorphisms.  Works in the frame picture,
    where the 2tr-orthonormal basis E sigma_m E^-1 of traceless
    g-symmetric endomorphisms has the constant components sigma_m.
    """
    e = frame.frames
    ei = np.linalg.inv(e)
    wf = twoform_to_frame(e, f_minus)
    act = np.einsum("mki,...kj->...mij", SYM0_BASIS, wf) + np.einsum(
        "...ik,mkj->...mij", wf, SYM0_BASIS
    )
    act = 0.5 * (act + hodge_star_flat(act))
    theta_f = twoform_to_frame(e, theta)
    coef = 0.5 * np.einsum("...mij,...ij->...m", act, np.conj(theta_f)).real
    b = np.einsum("...m,mjk->...jk", coef, SYM0_BASIS)
    return np.einsum("...ij,...jk,...kl->...il", e, b, ei)


def pair_oneform(c: Configuration, chi, psi=None):
    """psi* (x) chi as a coordinate 1-form (complex components)."""
    psi = c.psi if psi is None else psi
    v_frame = spinor_pair_to_oneform(psi, chi)
    ei = np.linalg.inv(c.frame.frames)
    return np.einsum("...a,...ai->...i", v_frame, ei)


def sw_adjoint(c: Configuration, w: ObstructionCovector) -> TangentVector:
    """Formal adjoint of the differential under the frozen inner products."""
    frame, grid = c.frame, c.grid
    g = frame.metric
    gam = frame.christoffels
    psi4 = _embed_plus(c.psi)

    pair = pair_oneform(c, w.chi)
    v = pair.real

    tau = codifferential_twoform(grid, g, w.theta, gam) + 1j * pair.imag

    phi = (
        dirac(frame, c.a, _embed_minus(w.chi))
        - 0.5 * np.einsum("...pq,...q->...p", rho_twoform(frame, w.theta), psi4)
    )[..., :2]

    # metric component: u_ab = ((nabla_a psi)* (x) chi)_b = <chi, gamma^b nabla_a psi>/2
    nab = spinor_cov_deriv(frame, c.a, psi4)              # (..., a, comp)
    gnab = np.einsum("bkp,...ap->...abk", GAMMA[:, 2:, :2], nab[..., :2])
    u = 0.5 * np.einsum("...k,...abk->...ab", w.chi, np.conj(gnab))
    sym_re = 0.5 * (u + np.swapaxes(u, -1, -2)).real
    e = frame.frames
    ei = np.linalg.inv(e)
    sym_re_endo = np.einsum("...ij,...jk,...kl->...il", e, sym_re, ei)

    v_sharp = np.einsum("...ij,...j->...i", frame.inv_metric, v)
    lie = lie_metric(grid, g, v_sharp, gam)
    lie_endo = np.einsum("...ij,...jk->...ik", frame.inv_metric, lie)
    dstar_v = codifferential_oneform(grid, g, v, gam)
    fp_theta = twoform_pointwise_inner(frame, c.curvature_plus, w.theta).real

    s = (
        -sym_re_endo
        + 0.25 * lie_endo
        + 0.5 * dstar_v[..., None, None] * np.eye(4)
        - 0.5 * KAPPA_TRACE * fp_theta[..., None, None] * np.eye(4)
        - delta_minus_transpose(frame, c.curvature_minus, w.theta)
    )
    return TangentVector(tau, phi, s)


def tangent_inner(grid: Grid, g, v1: TangentVector, v2: TangentVector) -> float:
    return float(
        l2_oneform(grid, v1.tau, v2.tau, g).real
        + l2_spinor(grid, v1.phi, v2.phi, g).real
        + l2_sym(grid, v1.s, v2.s, g)
    )


def value_inner(grid: Grid, g, w1: SWValue, w2: SWValue) -> float:
    return float(
        l2_spinor(grid, w1.neg_spinor, w2.neg_spinor, g).real
        + l2_herm(grid, w1.herm, w2.herm, g)
    )


def covector_inner(grid: Grid, g, frame: SpincFrame, w1: ObstructionCovector, w2: ObstructionCovector) -> float:
    dens = twoform_pointwise_inner(frame, w1.theta, w2.theta).real * np.sqrt(np.linalg.det(g))
    return float(l2_spinor(grid, w1.chi, w2.chi, g).real + integrate(grid, dens))


def obstruction_as_value(c: Configuration, w: ObstructionCovector) -> SWValue:
    """(chi, rho(theta)) with matching inner products, for adjointness tests."""
    return SWValue(w.chi, rho_twoform(c.frame, w.theta)[..., :2, :2])


# ---------------------------------------------------------------------------
# Kernel (obstruction) equations and the derived scalar identities.


def kernel_residual(c: Configuration, w: ObstructionCovector, enforce_monopole: bool = True, tol: float = 1e-8):
    """Residual fields of the five obstruction equations at a monopole."""
    if not c.is_irreducible():
        raise ValueError("kernel equations require an irreducible configuration")
    if enforce_monopole and monopole_defect(c) > tol:
        raise ValueError("configuration is not a monopole within tolerance")
    frame, grid = c.frame, c.grid
    g = frame.metric
    gam = frame.christoffels
    psi4 = _embed_plus(c.psi)

    pair = pair_oneform(c, w.chi)
    v = pair.real

    ke1 = codifferential_twoform(grid, g, w.theta, gam) + 1j * pair.imag
    ke2 = (
        dirac(frame, c.a, _embed_minus(w.chi))
        - 0.5 * np.einsum("...pq,...q->...p", rho_twoform(frame, w.theta), psi4)
    )[..., :2]

    nab = spinor_cov_deriv(frame, c.a, psi4)
    gnab = np.einsum("bkp,...ap->...abk", GAMMA[:, 2:, :2], nab[..., :2])
    u = 0.5 * np.einsum("...k,...abk->...ab", w.chi, np.conj(gnab))
    sym_re = 0.5 * (u + np.swapaxes(u, -1, -2)).real
    e = frame.frames
    ei = np.linalg.inv(e)
    sym_re_endo = np.einsum("...ij,...jk,...kl->...il", e, sym_re, ei)
    v_sharp = np.einsum("...ij,...j->...i", frame.inv_metric, v)
    lie_endo = np.einsum("...ij,...jk->...ik", frame.inv_metric, lie_metric(grid, g, v_sharp, gam))
    ke3 = -sym_re_endo + 0.25 * lie_endo - delta_minus_transpose(frame, c.curvature_minus, w.theta)

    ke4 = twoform_pointwise_inner(frame, w.theta, c.curvature_plus).real
    ke5 = -codifferential_oneform(grid, g, pair, gam)
    return {"ke1": ke1, "ke2": ke2, "ke3": ke3, "ke4": ke4, "ke5": ke5}


def diracdiv_defect(frame: SpincFrame, a, phi_plus, zeta_minus):
    """Defect of 2 div(phi* (x) chi) = <chi, D phi> - <D chi, phi>.

    Returns (integrated defect, L2 norm of the pointwise defect).  The
    integrated form vanishes to machine precision over flat frames
    (exact summation by parts); the pointwise form is O(h^2).
    """
    grid = frame.grid
    g = frame.metric
    gam = frame.christoffels
    c = Configuration(frame, a if a is not None else np.zeros(grid.shape + (4,), complex),
                      np.zeros(grid.shape + (2,), complex))
    pair = pair_oneform(c, zeta_minus, psi=phi_plus)
    div = -codifferential_oneform(grid, g, pair, gam)
    dphi = dirac(frame, a, _embed_plus(phi_plus))[..., 2:]
    dzeta = dirac(frame, a, _embed_minus(zeta_minus))[..., :2]
    # <chi, D phi> - <D chi, phi> in the convention <x, y> = sum x conj(y)
    rhs = np.einsum("...i,...i->...", zeta_minus, np.conj(dphi)) - np.einsum(
        "...i,...i->...", dzeta, np.conj(phi_plus)
    )
    defect = 2.0 * div - rhs
    vol = np.sqrt(np.linalg.det(g))
    integrated = abs(complex(integrate(grid, defect * vol)))
    pointwise = float(np.sqrt(integrate(grid, np.abs(defect) ** 2 * vol).real))
    return integrated, pointwise


def kernel_implied_scalars(c: Configuration, w: ObstructionCovector):
    """L2 norms of (F_A^+, theta) and div(psi* (x) chi).

    Both vanish (within a multiple of the kernel residual) when w solves
    the obstruction equations at an irreducible monopole: the trace of
    the metric equation and the psi-pairing of the spinor equation give
    (3/2) div Re(psi* (x) chi) + (F+, theta) = 0 and
    div(psi* (x) chi) + (F+, theta) = 0.
    """
    frame, grid = c.frame, c.grid
    g = frame.metric
    gam = frame.christoffels
    vol = np.sqrt(np.linalg.det(g))
    fp_theta = twoform_pointwise_inner(frame, c.curvature_plus, w.theta).real
    pair = pair_oneform(c, w.chi)
    div = -codifferential_oneform(grid, g, pair, gam)
    n1 = float(np.sqrt(integrate(grid, fp_theta ** 2 * vol).real))
    n2 = float(np.sqrt(integrate(grid, np.abs(div) ** 2 * vol).real))
    return n1, n2


def residual_norm(c: Configuration, res: dict) -> float:
    """L2 norm of the three kernel-equation residual fields."""
    grid, g = c.grid, c.frame.metric
    from .calculus import l2_oneform as _l1, l2_spinor as _ls, l2_sym as _lsym

    return float(
        np.sqrt(
            _l1(grid, res["ke1"], res["ke1"], g).real
            + _ls(grid, res["ke2"], res["ke2"], g).real
            + _lsym(grid, res["ke3"], res["ke3"], g)
        )
    )


# ---------------------------------------------------------------------------
# Gauge action.


def gauge_transform(c: Configuration, f: np.ndarray) -> Configuration:
    """Action of an S^1-valued field f: A -> A + 2i Im(f^{-1} df), psi -> f^{-1} psi.

    The discrete logarithmic derivative f^{-1} df is purely imaginary
    only for phases linear in the coordinates (winding transformations);
    its imaginary part is used so the result is always a valid
    connection, agreeing with 2i du at second order for smooth phases.
    """
    grid = c.grid
    f = np.asarray(f, dtype=np.complex128)
    logd = np.stack(
        [partial_derivative(grid, f, ax) for ax in (1, 2, 3, 4)], axis=-1
    ) / f[..., None]
    a_new = c.a + 2j * logd.imag
    return Configuration(c.frame, a_new, (1.0 / f)[..., None] * c.psi)
