"""Metric field calculus: Christoffel symbols, Levi-Civita variation,
divergence and Lie derivatives, weighted L2 inner products.

Layout conventions used throughout:

* metric fields ``g``: shape (n,n,n,n,4,4), SPD at every point;
* endomorphism-valued 1-forms (e.g. the Levi-Civita variation): indices
  ``[..., i, k, j]`` = direction i, output k, input j;
* (0,2)/(0,3) covariant tensors keep their natural index order.

The Levi-Civita variation is computed through the metric-velocity tensor
``kdot = 2 g s`` so that it is the *exact* t-derivative of the discrete
Christoffel symbols along ``g_t = (Id + t s)* g`` (pointwise algebra plus
linearity of the central difference; no discrete Leibniz rule needed).
"""

import numpy as np

from .fields import Grid, integrate, partial_derivative
from .pointwise import (
    herm_inner,
    oneform_inner,
    spinor_inner,
    sym_inner,
    twoform_inner,
)


def metric_grad(grid: Grid, g: np.ndarray) -> np.ndarray:
    """dg[..., i, j, l] = partial_i g_jl."""
    return np.stack([partial_derivative(grid, g, a) for a in (1, 2, 3, 4)], axis=-3)


def christoffel(grid: Grid, g: np.ndarray) -> np.ndarray:
    """Levi-Civita coefficients Gamma[..., k, i, j] from discrete derivatives."""
    if np.any(np.linalg.eigvalsh(g) <= 0):
        raise ValueError("metric field must be SPD at every point")
    dg = metric_grad(grid, g)
    gi = np.linalg.inv(g)
    sym = (
        dg
        + np.swapaxes(dg, -3, -2)                     # partial_j g_il
        - np.moveaxis(dg, -3, -1)                     # partial_l g_ij
    )
    return 0.5 * np.einsum("...kl,...ijl->...kij", gi, sym)


def cov_deriv_oneform(grid: Grid, gamma: np.ndarray, a: np.ndarray) -> np.ndarray:
    """(nabla a)[..., i, j] = partial_i a_j - Gamma^k_ij a_k."""
    da = np.stack([partial_derivative(grid, a, ax) for ax in (1, 2, 3, 4)], axis=-2)
    return da - np.einsum("...kij,...k->...ij", gamma, a)


def cov_deriv_02(grid: Grid, gamma: np.ndarray, t: np.ndarray) -> np.ndarray:
    """(nabla T)[..., i, j, l] for a (0,2)-tensor T."""
    dt = np.stack([partial_derivative(grid, t, ax) for ax in (1, 2, 3, 4)], axis=-3)
    corr1 = np.einsum("...mij,...ml->...ijl", gamma, t)
    corr2 = np.einsum("...mil,...jm->...ijl", gamma, t)
    return dt - corr1 - corr2


def lc_variation(grid: Grid, g: np.ndarray, s: np.ndarray, gamma=None) -> np.ndarray:
    """Variation of the Levi-Civita connection along the g-symmetric direction s.

    Returns the endomorphism-valued 1-form D[..., i, k, j] with
    g(D_i e_j, e_l) = c_ijl - c_lji + c_jli where c_ijl is the covariant
    derivative of s paired with g.  Exactly reproduces the t-derivative
    of christoffel(g_t) for g_t = (Id + t s)* g.
    """
    if gamma is None:
        gamma = christoffel(grid, g)
    kdot = np.einsum("...ik,...kj->...ij", g, s)
    kdot = kdot + np.swapaxes(kdot, -1, -2)            # 2 g s for g-symmetric s
    ck = 0.5 * cov_deriv_02(grid, gamma, kdot)         # c[..., i, j, l]
    tau = ck - np.moveaxis(ck, (-3, -2, -1), (-1, -2, -3)) + np.moveaxis(ck, (-3, -2, -1), (-2, -1, -3))
    return np.einsum("...kl,...ijl->...ikj", np.linalg.inv(g), tau)


def lc_variation_tensor(grid: Grid, g: np.ndarray, s: np.ndarray, gamma=None) -> np.ndarray:
    """Same as lc_variation but as the (0,3)-tensor tau[..., i, j, l]."""
    if gamma is None:
        gamma = christoffel(grid, g)
    kdot = np.einsum("...ik,...kj->...ij", g, s)
    kdot = kdot + np.swapaxes(kdot, -1, -2)
    ck = 0.5 * cov_deriv_02(grid, gamma, kdot)
    return ck - np.moveaxis(ck, (-3, -2, -1), (-1, -2, -3)) + np.moveaxis(ck, (-3, -2, -1), (-2, -1, -3))


def omega_dot(grid: Grid, g: np.ndarray, s: np.ndarray, gamma=None) -> np.ndarray:
    """The so(TM,g)-valued 1-form (variation of LC) - (covariant derivative of s).

    Returned as W[..., i, k, j] (direction, output, input); the lowered
    form g(W_i ., .) is exactly antisymmetric.
    """
    if gamma is None:
        gamma = christoffel(grid, g)
    kdot = np.einsum("...ik,...kj->...ij", g, s)
    kdot = kdot + np.swapaxes(kdot, -1, -2)
    ck = 0.5 * cov_deriv_02(grid, gamma, kdot)
    low = np.moveaxis(ck, (-3, -2, -1), (-2, -1, -3)) - np.moveaxis(ck, (-3, -2, -1), (-1, -2, -3))
    return np.einsum("...kl,...ijl->...ikj", np.linalg.inv(g), low)


def divergence_sym(grid: Grid, g: np.ndarray, s: np.ndarray, gamma=None) -> np.ndarray:
    """1-form (div s)_j = g^{ik} (nabla_i (g s))_{kj} for g-symmetric s."""
    if gamma is None:
        gamma = christoffel(grid, g)
    sflat = np.einsum("...ik,...kj->...ij", g, s)
    ds = cov_deriv_02(grid, gamma, sflat)
    return np.einsum("...ik,...ikj->...j", np.linalg.inv(g), ds)


def d_trace(grid: Grid, s: np.ndarray) -> np.ndarray:
    """Differential of tr(s) (endomorphism trace), as a 1-form."""
    tr = np.einsum("...ii->...", s)
    return np.stack([partial_derivative(grid, tr, ax) for ax in (1, 2, 3, 4)], axis=-1)


def lie_metric(grid: Grid, g: np.ndarray, x: np.ndarray, gamma=None) -> np.ndarray:
    """Lie derivative L_X g = 2 sym nabla(X^flat) for a vector field X."""
    if gamma is None:
        gamma = christoffel(grid, g)
    xflat = np.einsum("...ij,...j->...i", g, x)
    dx = cov_deriv_oneform(grid, gamma, xflat)
    return dx + np.swapaxes(dx, -1, -2)


def divergence_vector(grid: Grid, g: np.ndarray, x: np.ndarray, gamma=None):
    """div X = g^{ij} (nabla_i X^flat)_j; equals tr(L_X g)/2 exactly."""
    if gamma is None:
        gamma = christoffel(grid, g)
    xflat = np.einsum("...ij,...j->...i", g, x)
    dx = cov_deriv_oneform(grid, gamma, xflat)
    return np.einsum("...ij,...ij->...", np.linalg.inv(g), dx)


def codifferential_oneform(grid: Grid, g: np.ndarray, a: np.ndarray, gamma=None):
    """d* on 1-forms: the function -g^{ij}(nabla_i a)_j."""
    if gamma is None:
        gamma = christoffel(grid, g)
    da = cov_deriv_oneform(grid, gamma, a)
    return -np.einsum("...ij,...ij->...", np.linalg.inv(g), da)


def d_oneform(grid: Grid, a: np.ndarray) -> np.ndarray:
    """Exterior derivative of a 1-form, as antisymmetric coefficients."""
    da = np.stack([partial_derivative(grid, a, ax) for ax in (1, 2, 3, 4)], axis=-2)
    return da - np.swapaxes(da, -1, -2)


def codifferential_twoform(grid: Grid, g: np.ndarray, w: np.ndarray, gamma=None) -> np.ndarray:
    """d* on 2-forms: (d* w)_j = -g^{ik} (nabla_i w)_{kj}."""
    if gamma is None:
        gamma = christoffel(grid, g)
    dw = cov_deriv_02(grid, gamma, w)
    return -np.einsum("...ik,...ikj->...j", np.linalg.inv(g), dw)


# ---------------------------------------------------------------------------
# Weighted L2 inner products (deterministic reductions).


def _vol(g: np.ndarray):
    return np.sqrt(np.linalg.det(g))


def l2_scalar(grid: Grid, f1, f2, g=None):
    w = 1.0 if g is None else _vol(g)
    return complex(integrate(grid, f1 * np.conj(f2) * w))


def l2_oneform(grid: Grid, a, b, g):
    return complex(integrate(grid, oneform_inner(g, a, b) * _vol(g)))


def l2_twoform(grid: Grid, w1, w2, g):
    return complex(integrate(grid, twoform_inner(g, w1, w2) * _vol(g)))


def l2_sym(grid: Grid, s, t, g):
    return float(integrate(grid, sym_inner(s, t) * _vol(g)).real)


def l2_spinor(grid: Grid, u, v, g=None):
    w = 1.0 if g is None else _vol(g)
    return complex(integrate(grid, spinor_inner(u, v) * w))


def l2_herm(grid: Grid, h1, h2, g):
    return float(integrate(grid, herm_inner(h1, h2) * _vol(g)))
