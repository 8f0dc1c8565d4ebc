"""Spin^c structures as frame fields, the Dirac operator over arbitrary
metrics on the torus, its metric variation, and parallel transport of
frames over paths of metrics.

A Spin^c structure is stored as a field of GL+(4) matrices whose columns
are the frame vectors; the compatible metric is g = (E E^T)^{-1}.  Spinor
fields live in the fixed C^4 of :mod:`spintorus.constants` at every grid
point; all metric dependence enters through the frame contractions, the
spin coefficients and the U(1) term A/2.

Spin coefficients are computed from frame commutators,
2 w_abc = lam_abc - lam_bca + lam_cab with lam_abc = g([e_a, e_b], e_c),
which keeps w exactly antisymmetric in (b, c) at the discrete level.
"""

from functools import cached_property

import numpy as np

from .accel import transport_linear, transport_path, transport_straight
from .calculus import christoffel, d_oneform, d_trace, divergence_sym
from .constants import GAMMA
from .fields import Grid, partial_derivative
from .pointwise import spd_inv_sqrt


def frame_to_metric(frames: np.ndarray) -> np.ndarray:
    """Metric for which the frame columns are orthonormal: (E E^T)^{-1}."""
    return np.linalg.inv(np.einsum("...ik,...jk->...ij", frames, frames))


def metric_to_frame(g: np.ndarray) -> np.ndarray:
    """Canonical frame E = g^{-1/2} (any other differs by an SO(4) field)."""
    return spd_inv_sqrt(g)


class SpincFrame:
    """Frame field with cached metric data and spin coefficients."""

    def __init__(self, grid: Grid, frames: np.ndarray):
        frames = np.asarray(frames, dtype=float)
        if frames.shape != grid.shape + (4, 4):
            raise ValueError("frame field shape does not match grid")
        if np.any(np.linalg.det(frames) <= 0):
            raise ValueError("frames must have positive determinant")
        self.grid = grid
        self.frames = frames

    @classmethod
    def flat(cls, grid: Grid):
        return cls(grid, np.broadcast_to(np.eye(4), grid.shape + (4, 4)).copy())

    @classmethod
    def from_metric(cls, grid: Grid, g: np.ndarray):
        return cls(grid, metric_to_frame(g))

    @cached_property
    def metric(self) -> np.ndarray:
        return frame_to_metric(self.frames)

    @cached_property
    def inv_metric(self) -> np.ndarray:
        return np.einsum("...ik,...jk->...ij", self.frames, self.frames)

    @cached_property
    def volume_density(self) -> np.ndarray:
        return 1.0 / np.abs(np.linalg.det(self.frames))

    @cached_property
    def christoffels(self) -> np.ndarray:
        return christoffel(self.grid, self.metric)

    @cached_property
    def spin_coeffs(self) -> np.ndarray:
        """w[..., a, b, c] = g(nabla_{e_a} e_b, e_c), exactly skew in (b, c)."""
        e = self.frames
        de = np.stack([partial_derivative(self.grid, e, ax) for ax in (1, 2, 3, 4)], axis=-3)
        # [e_a, e_b]^k = e_a^i d_i e^k_b - e_b^i d_i e^k_a
        comm = np.einsum("...ia,...ikb->...kab", e, de)
        comm = comm - np.swapaxes(comm, -1, -2)
        lam = np.einsum("...kab,...kl,...lc->...abc", comm, self.metric, e)
        return 0.5 * (
            lam
            - np.moveaxis(lam, (-3, -2, -1), (-2, -1, -3))   # lam_bca as [a,b,c]
            + np.moveaxis(lam, (-3, -2, -1), (-1, -3, -2))   # lam_cab as [a,b,c]
        )

    @cached_property
    def gamma_contract(self) -> np.ndarray:
        """G[..., i, p, q] = sum_a E^i_a gamma^a, so rho(sigma) = sigma_i G^i."""
        return np.einsum("...ia,apq->...ipq", self.frames, GAMMA)

    @cached_property
    def geometric_dirac_term(self) -> np.ndarray:
        """K = 1/4 sum_abc w_abc gamma^a gamma^b gamma^c (zeroth-order part)."""
        ggg = np.einsum("apq,bqr,crs->abcps", GAMMA, GAMMA, GAMMA)
        return 0.25 * np.einsum("...abc,abcps->...ps", self.spin_coeffs, ggg)

    @cached_property
    def connection_blocks(self) -> np.ndarray:
        """C[..., a, p, q] = 1/4 sum_bc w_abc gamma^b gamma^c (per direction)."""
        gg = np.einsum("bpq,cqr->bcpr", GAMMA, GAMMA)
        return 0.25 * np.einsum("...abc,bcpr->...apr", self.spin_coeffs, gg)

    def frame_components_oneform(self, a: np.ndarray) -> np.ndarray:
        """sigma_a = sigma(e_a) for a coordinate 1-form."""
        return np.einsum("...i,...ia->...a", a, self.frames)

    def frame_components_sym(self, s: np.ndarray) -> np.ndarray:
        """S_ab = g(s e_a, e_b) for a g-symmetric endomorphism field."""
        return np.einsum("...ia,...ij,...jk,...kb->...ab", self.frames, self.metric, s, self.frames)


def rho(frame: SpincFrame, a: np.ndarray) -> np.ndarray:
    """Clifford action of a coordinate 1-form field, as endomorphisms of C^4."""
    return np.einsum("...i,...ipq->...pq", a, frame.gamma_contract)


def spinor_cov_deriv(frame: SpincFrame, a_conn, psi: np.ndarray) -> np.ndarray:
    """Covariant derivative along the frame: out[..., a, comp] = nabla_{e_a} psi.

    a_conn is the imaginary U(1) connection 1-form (coordinate components)
    entering with the factor 1/2, or None.
    """
    grid = frame.grid
    dpsi = np.stack([partial_derivative(grid, psi, ax) for ax in (1, 2, 3, 4)], axis=-2)
    out = np.einsum("...ia,...iq->...aq", frame.frames, dpsi)
    out = out + np.einsum("...apq,...q->...ap", frame.connection_blocks, psi)
    if a_conn is not None:
        a_frame = frame.frame_components_oneform(a_conn)
        out = out + 0.5 * np.einsum("...a,...q->...aq", a_frame, psi)
    return out


def dirac(frame: SpincFrame, a_conn, psi: np.ndarray) -> np.ndarray:
    """Dirac operator sum_a gamma^a nabla_{e_a} psi on full C^4 spinor fields."""
    grid = frame.grid
    dpsi = np.stack([partial_derivative(grid, psi, ax) for ax in (1, 2, 3, 4)], axis=-2)
    out = np.einsum("...ipq,...iq->...p", frame.gamma_contract, dpsi)
    out = out + np.einsum("...pq,...q->...p", frame.geometric_dirac_term, psi)
    if a_conn is not None:
        out = out + 0.5 * np.einsum("...pq,...q->...p", rho(frame, a_conn), psi)
    return out


def dirac_variation(frame: SpincFrame, a_conn, psi: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Derivative of the Dirac family along the metric direction s.

    Equals -rho o s* o nabla_A psi - 1/2 rho(div s - d tr s) psi for a
    g-symmetric endomorphism field s; linear in s and in psi.
    """
    grid = frame.grid
    nab = spinor_cov_deriv(frame, a_conn, psi)
    s_frame = frame.frame_components_sym(s)
    first = -np.einsum("...ac,cpq,...aq->...p", s_frame, GAMMA, nab)
    div_s = divergence_sym(grid, frame.metric, s, frame.christoffels)
    dtr = d_trace(grid, s)
    second = -0.5 * np.einsum("...pq,...q->...p", rho(frame, div_s - dtr), psi)
    return first + second


def connection_curvature(grid: Grid, a_conn: np.ndarray) -> np.ndarray:
    """Curvature F = dA of the U(1) connection (antisymmetric coefficients)."""
    return d_oneform(grid, a_conn)


# ---------------------------------------------------------------------------
# Parallel transport of Spin^c structures over paths of metrics.


def frame_transport_straight(frame: SpincFrame, s: np.ndarray, t_final: float, steps: int = 128) -> SpincFrame:
    """Transport along g_t = (Id + t s)* g for a g-symmetric direction s."""
    out = transport_straight(frame.frames, frame.metric, s, t_final, steps)
    return SpincFrame(frame.grid, out)


def frame_transport_linear(frame: SpincFrame, g_target: np.ndarray, steps: int = 128) -> SpincFrame:
    """Transport along the straight metric-space segment to g_target."""
    out = transport_linear(frame.frames, frame.metric, g_target, steps)
    return SpincFrame(frame.grid, out)


def frame_transport_callable(frame: SpincFrame, g_of_t, gdot_of_t, t0: float, t1: float, steps: int = 128) -> SpincFrame:
    """Transport along an arbitrary metric path given by callables."""
    out = transport_path(frame.frames, g_of_t, gdot_of_t, t0, t1, steps)
    return SpincFrame(frame.grid, out)


def frame_loop_holonomy(frame: SpincFrame, h: np.ndarray, k: np.ndarray, eps: float, steps: int = 64) -> np.ndarray:
    """Square-loop holonomy of the frame transport at field level.

    Loop g -> g+eps*k -> g+eps*(h+k) -> g+eps*h -> g; returns
    (E_loop E0^-1 - Id)/eps^2, converging to frame_bundle_curvature(g,h,k).
    """
    g = frame.metric
    corners = [g, g + eps * k, g + eps * (h + k), g + eps * h, g]
    e = frame.frames
    for a, b in zip(corners[:-1], corners[1:]):
        e = transport_linear(e, a, b, steps)
    hol = np.einsum("...ij,...jk->...ik", e, np.linalg.inv(frame.frames))
    return (hol - np.eye(4)) / eps ** 2
