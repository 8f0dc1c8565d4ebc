"""Exact pointwise tensor algebra on an oriented 4-dimensional inner-product space.

Every operation is batched over arbitrary leading axes, so the same code
serves single matrices and whole grid fields.  Two-forms are represented
by antisymmetric 4x4 coefficient matrices ``W`` with ``w = sum_{i<j} W_ij
e^i ^ e^j``; the inner product is ``<w, e> = 1/2 sum_ij W_ij conj(E_ij)``
(so ``||e^i ^ e^j|| = 1``).  Symmetric endomorphisms carry ``(s, t) =
2 tr(st)``.
"""

import numpy as np

from .constants import ASD_BASIS, EPS4, KAPPA_TRACE, SD_BASIS, TWOFORM_PAIRS


# ---------------------------------------------------------------------------
# Basic matrix helpers (batched).


def spd_sqrt(g: np.ndarray) -> np.ndarray:
    """Symmetric positive square root of an SPD matrix."""
    w, q = np.linalg.eigh(np.asarray(g))
    if np.any(w <= 0):
        raise ValueError("matrix is not positive definite")
    return np.einsum("...ik,...k,...jk->...ij", q, np.sqrt(w), q)


def spd_inv_sqrt(g: np.ndarray) -> np.ndarray:
    w, q = np.linalg.eigh(np.asarray(g))
    if np.any(w <= 0):
        raise ValueError("matrix is not positive definite")
    return np.einsum("...ik,...k,...jk->...ij", q, 1.0 / np.sqrt(w), q)


def polar_decompose(e: np.ndarray, g: np.ndarray):
    """E = R P with R g-orthogonal and P g-symmetric positive; unique."""
    e = np.asarray(e, dtype=float)
    if np.any(np.linalg.det(e) <= 0):
        raise ValueError("frame matrix must have positive determinant")
    gh = spd_sqrt(g)
    gih = spd_inv_sqrt(g)
    a = np.einsum("...ij,...jk,...kl,...lm,...mn->...in", gih, np.swapaxes(e, -1, -2), g, e, gih)
    p = np.einsum("...ij,...jk,...kl->...il", gih, spd_sqrt(a), gh)
    r = np.einsum("...ij,...jk->...ik", e, np.linalg.inv(p))
    return r, p


# ---------------------------------------------------------------------------
# Two-form packing and Hodge theory.


def pack_twoform(w: np.ndarray) -> np.ndarray:
    """Antisymmetric coefficient matrix -> 6-vector (e12,e13,e14,e23,e24,e34)."""
    return np.stack([w[..., i, j] for i, j in TWOFORM_PAIRS], axis=-1)


def unpack_twoform(v: np.ndarray) -> np.ndarray:
    w = np.zeros(v.shape[:-1] + (4, 4), dtype=v.dtype)
    for m, (i, j) in enumerate(TWOFORM_PAIRS):
        w[..., i, j] = v[..., m]
        w[..., j, i] = -v[..., m]
    return w


def hodge_star_flat(w: np.ndarray) -> np.ndarray:
    return 0.5 * np.einsum("ijkl,...kl->...ij", EPS4, np.asarray(w))


def twoform_to_frame(e: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Coordinate coefficients -> coefficients in the coframe dual to E's columns."""
    return np.einsum("...ia,...jb,...ij->...ab", e, e, w)


def twoform_from_frame(e: np.ndarray, w_frame: np.ndarray) -> np.ndarray:
    ei = np.linalg.inv(e)
    return np.einsum("...ai,...bj,...ab->...ij", ei, ei, w_frame)


def hodge_star(g: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Hodge star on 2-forms for the metric g (coordinate coefficients).

    Conjugation by an oriented orthonormal frame reduces to the flat
    star, so * o * = Id holds exactly.
    """
    e = spd_inv_sqrt(g)
    return twoform_from_frame(e, hodge_star_flat(twoform_to_frame(e, w)))


def selfdual_project(g: np.ndarray, w: np.ndarray) -> np.ndarray:
    return 0.5 * (w + hodge_star(g, w))


def antiselfdual_project(g: np.ndarray, w: np.ndarray) -> np.ndarray:
    return 0.5 * (w - hodge_star(g, w))


def i_derivation(s: np.ndarray, w: np.ndarray) -> np.ndarray:
    """Degree-0 derivation on 2-forms induced by the transpose of s.

    In coefficient matrices: W -> S^T W + W S, where S is the matrix of
    the endomorphism in the same basis the coefficients use.
    """
    s = np.asarray(s)
    return np.einsum("...ki,...kj->...ij", s, w) + np.einsum("...ik,...kj->...ij", w, s)


def scalar_block_factor(s: np.ndarray):
    """Scalar by which i(s*) acts on the diagonal Lambda^2_+/- blocks.

    Equals KAPPA_TRACE * tr(s); the traceless part contributes nothing
    to the diagonal blocks.
    """
    return KAPPA_TRACE * np.einsum("...ii->...", np.asarray(s))


def sym_to_frame(g: np.ndarray, s: np.ndarray) -> np.ndarray:
    """g-symmetric endomorphism -> symmetric matrix in the g^(-1/2) frame."""
    gh = spd_sqrt(g)
    gih = spd_inv_sqrt(g)
    return np.einsum("...ij,...jk,...kl->...il", gh, s, gih)


def delta_minus(g: np.ndarray, s0: np.ndarray) -> np.ndarray:
    """P+ o i(s0*) restricted to ASD forms, as a 3x3 matrix.

    Bases are the frame transports of the flat orthonormal SD/ASD bases.
    The input must be traceless and g-symmetric.  The map is a homothety
    onto Hom(ASD, SD): with (u, v) = 1/2 tr(u v*) its norm is half the
    2tr-norm of s0 (equivalently an isometry for (u, v) = 2 tr(u v*)).
    """
    tr = np.einsum("...ii->...", np.asarray(s0))
    if np.max(np.abs(tr)) > 1e-10 * max(1.0, float(np.max(np.abs(s0)))):
        raise ValueError("delta_minus requires a traceless input")
    sh = sym_to_frame(g, s0)
    asd = np.broadcast_to(ASD_BASIS, sh.shape[:-2] + (3, 4, 4))
    act = np.einsum("...ki,...mkj->...mij", sh, asd) + np.einsum("...mik,...kj->...mij", asd, sh)
    return 0.5 * np.einsum("kij,...mij->...km", SD_BASIS, act)


def apply_delta_minus(g: np.ndarray, s0: np.ndarray, w_minus: np.ndarray) -> np.ndarray:
    """delta_-(s0) applied to an ASD form (coordinate coefficients)."""
    e = spd_inv_sqrt(g)
    wf = twoform_to_frame(e, w_minus)
    out = i_derivation(sym_to_frame(g, s0), wf)
    out = 0.5 * (out + hodge_star_flat(out))
    return twoform_from_frame(e, out)


# ---------------------------------------------------------------------------
# Inner-product densities (the frozen conventions).


def oneform_inner(g: np.ndarray, a: np.ndarray, b: np.ndarray):
    gi = np.linalg.inv(g)
    return np.einsum("...ij,...i,...j->...", gi, a, np.conj(b))


def twoform_inner(g: np.ndarray, w: np.ndarray, e: np.ndarray):
    gi = np.linalg.inv(g)
    return 0.5 * np.einsum("...ik,...jl,...ij,...kl->...", gi, gi, w, np.conj(e))


def sym_inner(s: np.ndarray, t: np.ndarray):
    """(s, t) = 2 tr(st) on endomorphisms (basis independent)."""
    return 2.0 * np.einsum("...ij,...ji->...", s, t)


def herm_inner(h1: np.ndarray, h2: np.ndarray):
    """Real inner product 1/4 tr(A B*) on endomorphisms of W (2x2 W+ blocks)."""
    return 0.25 * np.einsum("...ij,...ij->...", h1, np.conj(h2)).real


def spinor_inner(u: np.ndarray, v: np.ndarray):
    """Hermitian <u, v> = sum_i u_i conj(v_i)."""
    return np.einsum("...i,...i->...", u, np.conj(v))


# ---------------------------------------------------------------------------
# Curvature of the metric-frame bundle and its holonomy oracle.


def frame_bundle_curvature(g: np.ndarray, h: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Curvature -1/4 [g^-1 h, g^-1 k]; g-antisymmetric for symmetric h, k."""
    gh = np.linalg.solve(g, h)
    gk = np.linalg.solve(g, k)
    return -0.25 * (np.einsum("...ij,...jk->...ik", gh, gk) - np.einsum("...ij,...jk->...ik", gk, gh))


def holonomy_oracle(g: np.ndarray, h: np.ndarray, k: np.ndarray, eps: float, steps: int = 64) -> np.ndarray:
    """Square-loop holonomy estimate of the frame-bundle curvature.

    Transports a frame around g -> g+eps*k -> g+eps*(h+k) -> g+eps*h -> g
    (that orientation makes the limit equal frame_bundle_curvature) and
    returns (E_loop E0^-1 - Id)/eps^2, which converges at rate O(eps).
    """
    from .accel import transport_linear

    g = np.asarray(g, dtype=float)
    corners = [g, g + eps * k, g + eps * (h + k), g + eps * h, g]
    for c in corners:
        if np.any(np.linalg.eigvalsh(c) <= 0):
            raise ValueError("holonomy loop leaves the SPD cone")
    e0 = spd_inv_sqrt(g)
    e = e0
    for a, b in zip(corners[:-1], corners[1:]):
        e = transport_linear(e, a, b, steps)
    hol = np.einsum("...ij,...jk->...ik", e, np.linalg.inv(e0))
    return (hol - np.eye(4)) / eps ** 2
