"""The Kahler specialization on the flat 4-torus: the frozen complex
structure z1 = x1 + i x2, z2 = x3 + i x4, hermitian/anti-hermitian
splittings of symmetric tensors, Dolbeault operators with exact discrete
adjoints, the holomorphic form of the Seiberg-Witten equations, and the
assembled kernel system with a numerical triviality check.

Bigraded components are stored by raw coefficients:

* functions: complex scalars;
* (0,1)- and (1,0)-forms: pairs (coefficients of dzbar_j resp. dz_j);
* (0,2)-forms: the coefficient of dzbar1 ^ dzbar2;
* (1,1)-forms: 2x2 matrices m[i, j] for dz_i ^ dzbar_j.

Squared norms: |f|^2, 2 sum |c_j|^2, 4 |b|^2, 4 sum |m_ij|^2 (induced by
||dz_j||^2 = ||dzbar_j||^2 = 2).
"""

from dataclasses import dataclass

import numpy as np

from .constants import IDENTIFICATION_UNITARY, J_STD, OMEGA_STD, SYM0_BASIS
from .fields import Grid, integrate, pairwise_sum, partial_derivative
from .pointwise import (
    hodge_star_flat,
    pack_twoform,
    sym_inner,
    twoform_inner,
)

# Complex basis of T^{1,0}: Z_j = (d/dx_{2j-1} - i d/dx_{2j}) / 2.
_ZCOL = 0.5 * np.array(
    [[1, 0], [-1j, 0], [0, 1], [0, -1j]], dtype=np.complex128
)
_ZBASIS = np.concatenate([_ZCOL, _ZCOL.conj()], axis=1)   # columns Z1 Z2 Zb1 Zb2
_ZBASIS_INV = np.linalg.inv(_ZBASIS)

# dz_i ^ dzbar_j as real-coordinate antisymmetric coefficient matrices.
_DX = np.eye(4)
_DZ = np.stack([_DX[0] + 1j * _DX[1], _DX[2] + 1j * _DX[3]])


def _wedge(a, b):
    return np.outer(a, b) - np.outer(b, a)


# antisymmetric coefficient matrices W with w = sum_{i<j} W_ij e^i ^ e^j;
# for a wedge of 1-forms W = outer(a,b) - outer(b,a).
DZ_DZBAR = np.stack(
    [[_wedge(_DZ[i], _DZ[j].conj()) for j in range(2)] for i in range(2)]
)


def complex_structure() -> np.ndarray:
    return J_STD.copy()


def kahler_form() -> np.ndarray:
    return OMEGA_STD.copy()


# ---------------------------------------------------------------------------
# Splittings of endomorphisms and symmetric 2-tensors.


def split_sym(s: np.ndarray, j: np.ndarray = J_STD):
    """J-linear (hermitian) and J-antilinear parts of a symmetric endo field."""
    jsj = np.einsum("ik,...kl,lj->...ij", j, s, j)
    return 0.5 * (s - jsj), 0.5 * (s + jsj)


def ab_components(f: np.ndarray):
    """Complex-linear and antilinear parts of a real endomorphism field.

    Returns (a, b) with f(Z_k) = sum_j a[j,k] Z_j + b[j,k] Zbar_j; f is
    J-linear iff b = 0, symmetric iff a is hermitian and b symmetric.
    """
    fz = np.einsum("...ij,jk->...ik", np.asarray(f, dtype=np.complex128), _ZCOL)
    coeff = np.einsum("ij,...jk->...ik", _ZBASIS_INV, fz)
    return coeff[..., :2, :], coeff[..., 2:, :]


def from_ab_components(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Reconstruct the real endomorphism from its (a, b) parts."""
    top = np.concatenate([a, b.conj()], axis=-1)
    bot = np.concatenate([b, a.conj()], axis=-1)
    m = np.concatenate([top, bot], axis=-2)
    out = np.einsum("ij,...jk,kl->...il", _ZBASIS, m, _ZBASIS_INV)
    return out.real


def herm_to_11form(a: np.ndarray) -> np.ndarray:
    """Real (1,1)-form -2i sum a_ij dz_i ^ dzbar_j of a hermitian matrix field."""
    a = np.asarray(a, dtype=np.complex128)
    herm_defect = np.max(np.abs(a - np.swapaxes(a, -1, -2).conj()))
    if herm_defect > 1e-10 * max(1.0, float(np.max(np.abs(a)))):
        raise ValueError("herm_to_11form requires a hermitian coefficient matrix")
    w = -2j * np.einsum("...ij,ijkl->...kl", a, DZ_DZBAR)
    return w.real


def herm_from_11form(w: np.ndarray) -> np.ndarray:
    """Inverse of herm_to_11form (restricted to real (1,1)-forms).

    Uses <dz_i ^ dzbar_j, dz_k ^ dzbar_l> = 4 delta_ik delta_jl for the
    half-sum pairing of coefficient matrices.
    """
    return (1j / 16.0) * np.einsum(
        "...mn,ijmn->...ij", np.asarray(w, np.complex128), DZ_DZBAR.conj()
    )


# real-coordinate 2-tensors dz_i (x) dzbar_j and dzbar_i (x) dzbar_j
_DZ_T_DZBAR = np.stack(
    [[np.outer(_DZ[i], _DZ[j].conj()) for j in range(2)] for i in range(2)]
)
_DZBAR_T_DZBAR = np.stack(
    [[np.outer(_DZ[i].conj(), _DZ[j].conj()) for j in range(2)] for i in range(2)]
)


def sym_re_part_mixed(u: np.ndarray) -> np.ndarray:
    """sym Re of u = sum u_ij dz_i (x) dzbar_j, as a symmetric endo field.

    Lands in the J-linear (hermitian) summand; its hermitian form on
    T^{1,0} is (u + conj(u)^T)/4.
    """
    t = np.einsum("...ij,ijkl->...kl", np.asarray(u, np.complex128), _DZ_T_DZBAR).real
    return 0.5 * (t + np.swapaxes(t, -1, -2))


def sym_re_part_02(v: np.ndarray) -> np.ndarray:
    """sym Re of v = sum v_ij dzbar_i (x) dzbar_j, a J-antilinear symmetric endo."""
    t = np.einsum("...ij,ijkl->...kl", np.asarray(v, np.complex128), _DZBAR_T_DZBAR).real
    return 0.5 * (t + np.swapaxes(t, -1, -2))


def delta_minus_split(s: np.ndarray, g: np.ndarray = None):
    """Blocks of delta_- on a traceless symmetric endo for the flat Kahler data.

    Returns (omega_row, b_block): the coefficients of the images of the
    three ASD basis forms on R*omega (from the hermitian part) and on the
    dzbar1^dzbar2 direction (from the antihermitian part).
    """
    tr = np.einsum("...ii->...", s)
    if np.max(np.abs(tr)) > 1e-10 * max(1.0, float(np.max(np.abs(s)))):
        raise ValueError("delta_minus_split requires a traceless input")
    from .constants import ASD_BASIS, DZBAR12, OMEGA_STD as OM

    sh, sa = split_sym(s)
    out_h = []
    out_a = []
    om_unit = OM / np.sqrt(2.0)
    mu_unit = DZBAR12 / 2.0
    for m in range(3):
        v = ASD_BASIS[m]
        for part, sink in ((sh, "h"), (sa, "a")):
            img = np.einsum("...ki,kj->...ij", part, v) + np.einsum(
                "ik,...kj->...ij", v, part
            )
            img = 0.5 * (img + hodge_star_flat(img))
            if sink == "h":
                out_h.append(0.5 * np.einsum("...ij,ij->...", img, om_unit))
            else:
                out_a.append(0.5 * np.einsum("...ij,ij->...", img, mu_unit.conj()))
    return np.stack(out_h, axis=-1), np.stack(out_a, axis=-1)


# ---------------------------------------------------------------------------
# Dolbeault operators (flat metric; exact discrete adjoints).


@dataclass
class DolbeaultField:
    """Spinor in the Kahler model: (0,0), (0,1) and (0,2) components."""

    a00: np.ndarray
    a01: np.ndarray
    a02: np.ndarray


def _dzbar_derivs(grid: Grid, f):
    d1 = 0.5 * (partial_derivative(grid, f, 1) + 1j * partial_derivative(grid, f, 2))
    d2 = 0.5 * (partial_derivative(grid, f, 3) + 1j * partial_derivative(grid, f, 4))
    return d1, d2


def _dz_derivs(grid: Grid, f):
    d1 = 0.5 * (partial_derivative(grid, f, 1) - 1j * partial_derivative(grid, f, 2))
    d2 = 0.5 * (partial_derivative(grid, f, 3) - 1j * partial_derivative(grid, f, 4))
    return d1, d2


def connection01(a: np.ndarray) -> np.ndarray:
    """(0,1)-components (a1, a2) of an imaginary coordinate 1-form."""
    a = np.asarray(a, dtype=np.complex128)
    return np.stack(
        [0.5 * (a[..., 0] + 1j * a[..., 1]), 0.5 * (a[..., 2] + 1j * a[..., 3])],
        axis=-1,
    )


def dbar_0(grid: Grid, a01, f):
    """dbar_A on functions -> (0,1)-forms."""
    d1, d2 = _dzbar_derivs(grid, f)
    if a01 is None:
        return np.stack([d1, d2], axis=-1)
    return np.stack([d1 + a01[..., 0] * f, d2 + a01[..., 1] * f], axis=-1)


def dbar_1(grid: Grid, a01, c):
    """dbar_A on (0,1)-forms -> (0,2)-forms."""
    d1c2, _ = _dzbar_derivs(grid, c[..., 1])
    _, d2c1 = _dzbar_derivs(grid, c[..., 0])
    out = d1c2 - d2c1
    if a01 is not None:
        out = out + a01[..., 0] * c[..., 1] - a01[..., 1] * c[..., 0]
    return out


def dbar_0_adj(grid: Grid, a01, c):
    """Exact adjoint of dbar_0: (0,1)-forms -> functions."""
    z1, _ = _dz_derivs(grid, c[..., 0])
    _, z2 = _dz_derivs(grid, c[..., 1])
    out = -2.0 * (z1 + z2)
    if a01 is not None:
        out = out + 2.0 * (np.conj(a01[..., 0]) * c[..., 0] + np.conj(a01[..., 1]) * c[..., 1])
    return out


def dbar_1_adj(grid: Grid, a01, b):
    """Exact adjoint of dbar_1: (0,2)-forms -> (0,1)-forms."""
    z1, z2 = _dz_derivs(grid, b)
    out1 = 2.0 * z2
    out2 = -2.0 * z1
    if a01 is not None:
        out1 = out1 - 2.0 * np.conj(a01[..., 1]) * b
        out2 = out2 + 2.0 * np.conj(a01[..., 0]) * b
    return np.stack([out1, out2], axis=-1)


def dolbeault(grid: Grid, a01, field, degree: int):
    """dbar_A on degree 0 or 1 (the valid transitions of the model)."""
    if degree == 0:
        return dbar_0(grid, a01, field)
    if degree == 1:
        return dbar_1(grid, a01, field)
    raise ValueError("dbar raises degree 0->1 or 1->2 only")


def dolbeault_adjoint(grid: Grid, a01, field, degree: int):
    """dbar_A* on degree 1 or 2."""
    if degree == 1:
        return dbar_0_adj(grid, a01, field)
    if degree == 2:
        return dbar_1_adj(grid, a01, field)
    raise ValueError("dbar* lowers degree 1->0 or 2->1 only")


def del_0(grid: Grid, f):
    """del on functions -> (1,0)-forms."""
    z1, z2 = _dz_derivs(grid, f)
    return np.stack([z1, z2], axis=-1)


def del_0_adj(grid: Grid, u):
    zb1, _ = _dzbar_derivs(grid, u[..., 0])
    _, zb2 = _dzbar_derivs(grid, u[..., 1])
    return -2.0 * (zb1 + zb2)


def del_01(grid: Grid, c):
    """del on (0,1)-forms -> (1,1)-forms m[i,j] = dz_i c_j."""
    rows = []
    for i in range(2):
        zi = _dz_derivs(grid, c[..., 0])[i], _dz_derivs(grid, c[..., 1])[i]
        rows.append(np.stack(zi, axis=-1))
    return np.stack(rows, axis=-2)


def del_01_adj(grid: Grid, m):
    """Exact adjoint of del_01: (1,1) -> (0,1), (del* m)_j = -2 sum_i dzbar_i m_ij."""
    out = []
    for j in range(2):
        zb1, _ = _dzbar_derivs(grid, m[..., 0, j])
        _, zb2 = _dzbar_derivs(grid, m[..., 1, j])
        out.append(-2.0 * (zb1 + zb2))
    return np.stack(out, axis=-1)


def dbar_10(grid: Grid, u):
    """dbar on (1,0)-forms -> (1,1)-forms: m[i,j] = -dzbar_j u_i."""
    rows = []
    for i in range(2):
        zb = _dzbar_derivs(grid, u[..., i])
        rows.append(np.stack([-zb[0], -zb[1]], axis=-1))
    return np.stack(rows, axis=-2)


def kahler_identity_defect(grid: Grid, u) -> float:
    """|| del* dbar u + dbar del* u || on (1,0)-forms (zero to machine)."""
    t1 = del_01_adj(grid, dbar_10(grid, u))  # hmm: del* of dbar u
    # careful: del* on (1,1) is del_01_adj; dbar(del* u): del* u = function
    f = _del_10_adj(grid, u)
    t2 = dbar_0(grid, None, f)
    d = t1 + t2
    return float(np.sqrt(integrate(grid, 2.0 * np.abs(d[..., 0]) ** 2 + 2.0 * np.abs(d[..., 1]) ** 2).real))


def _del_10_adj(grid: Grid, u):
    """del* on (1,0)-forms -> functions."""
    zb1, _ = _dzbar_derivs(grid, u[..., 0])
    _, zb2 = _dzbar_derivs(grid, u[..., 1])
    return -2.0 * (zb1 + zb2)


def laplace_del_01(grid: Grid, c):
    """del-Laplacian on (0,1)-forms: del* del (del* vanishes on (0,1))."""
    return del_01_adj(grid, del_01(grid, c))


# ---------------------------------------------------------------------------
# Kahler Seiberg-Witten residual and the cross-representation identification.


def kahler_sw_residual(grid: Grid, a: np.ndarray, alpha: np.ndarray, beta: np.ndarray):
    """Residuals of the holomorphic form of the equations for (a, alpha, beta).

    ``a`` is the imaginary connection 1-form on the square-root line
    (half the determinant connection); ``beta`` is the raw coefficient of
    dzbar1 ^ dzbar2.  Returns

    * r1: the Dirac row dbar_a alpha + dbar_a* beta, a (0,1)-form;
    * r2: the (0,2) scalar F_a^{0,2} - conj(alpha) beta / 4;
    * r3: the omega-component scalar <F_a, omega> - i(|alpha|^2 - 4|beta|^2)/4
      (the primitive (1,1) part of the curvature is anti-self-dual and
      does not enter the self-dual equation).

    The traceless-hermitian component of the full functional equals
    [[-2i r3, 8 conj(r2)], [8 r2, 2i r3]] in the model basis, exactly.
    """
    a01 = connection01(a)
    r1 = dbar_0(grid, a01, alpha) + dbar_1_adj(grid, a01, beta)

    from .calculus import d_oneform
    from .constants import OMEGA_STD

    f = d_oneform(grid, a)
    f02, _ = _curvature_bigrade(f)
    r2 = f02 - 0.25 * np.conj(alpha) * beta
    f_omega = 0.5 * np.einsum("...ij,ij->...", f, OMEGA_STD)
    r3 = f_omega - 0.25j * (np.abs(alpha) ** 2 - 4.0 * np.abs(beta) ** 2)
    return r1, r2, r3


def _curvature_bigrade(f):
    """(0,2) coefficient and (1,1) matrix of an imaginary 2-form field."""
    from .constants import DZBAR12

    # <f, dzbar12> / ||dzbar12||^2 with the half-sum pairing: ||dzbar12||^2 = 4
    f02 = 0.125 * np.einsum("...ij,ij->...", f, DZBAR12.conj())
    f11 = 0.125 * np.einsum("...mn,ijmn->...ij", f, DZ_DZBAR.conj())
    return f02, f11


def model_coordinates(field: DolbeaultField) -> np.ndarray:
    """Unit-norm model coordinates (w+, w-) of a Dolbeault spinor."""
    return np.stack(
        [
            field.a00,
            2.0 * field.a02,
            np.sqrt(2.0) * field.a01[..., 0],
            np.sqrt(2.0) * field.a01[..., 1],
        ],
        axis=-1,
    )


def from_model_coordinates(w: np.ndarray) -> DolbeaultField:
    return DolbeaultField(
        w[..., 0], np.stack([w[..., 2], w[..., 3]], axis=-1) / np.sqrt(2.0), 0.5 * w[..., 1]
    )


def abstract_to_dolbeault(psi4: np.ndarray) -> DolbeaultField:
    """Map a C^4 spinor field through the frozen identification unitary."""
    w = np.einsum("ij,...j->...i", IDENTIFICATION_UNITARY, psi4)
    return from_model_coordinates(w)


def dolbeault_to_abstract(field: DolbeaultField) -> np.ndarray:
    w = model_coordinates(field)
    return np.einsum("ji,...j->...i", IDENTIFICATION_UNITARY.conj(), w)


def kahler_dirac(grid: Grid, a01, field: DolbeaultField) -> DolbeaultField:
    """sqrt(2)(dbar_A + dbar_A*) in the Dolbeault model."""
    s = np.sqrt(2.0)
    out01 = s * (dbar_0(grid, a01, field.a00) + dbar_1_adj(grid, a01, field.a02))
    out00 = s * dbar_0_adj(grid, a01, field.a01)
    out02 = s * dbar_1(grid, a01, field.a01)
    return DolbeaultField(out00, out01, out02)


# ---------------------------------------------------------------------------
# The assembled kernel system and its numerical rank.


def kernel_system_apply(grid: Grid, a: np.ndarray, alpha: np.ndarray, chi: np.ndarray, mu: np.ndarray):
    """Residuals (r_a, r_b, r_c, r_e) of the obstruction system at (A, alpha).

    r_a = 2 sqrt2 dbar* mu + conj(alpha) chi          in (0,1)
    r_b = dbar_A* chi                                 in (0,0)
    r_c = sqrt2 dbar_A chi - mu alpha                 in (0,2)
    r_e = del(conj(alpha) chi) - dbar(alpha conj(chi))  in (1,1), antihermitian
    """
    a01 = connection01(a) if a is not None else None
    s = np.sqrt(2.0)
    r_a = 2.0 * s * dbar_1_adj(grid, None, mu) + np.conj(alpha)[..., None] * chi
    r_b = dbar_0_adj(grid, a01, chi)
    r_c = s * dbar_1(grid, a01, chi) - mu * alpha
    ac = np.conj(alpha)[..., None] * chi
    r_e = del_01(grid, ac) - dbar_10(grid, np.conj(ac))
    return r_a, r_b, r_c, r_e


def assemble_kernel_operator(grid: Grid, a, alpha, max_unknowns: int = 4096) -> np.ndarray:
    """Dense real matrix of the kernel system in unknowns (chi, mu).

    Columns are ordered point-major with the six real components
    (Re c1, Im c1, Re c2, Im c2, Re mu, Im mu) fastest.
    """
    npts = grid.npoints
    ncols = 6 * npts
    if ncols > 6 * max_unknowns:
        raise MemoryError(f"dense assembly bound exceeded: {ncols} columns")
    alpha = np.broadcast_to(np.asarray(alpha, dtype=np.complex128), grid.shape)

    def apply_real(x):
        x = x.reshape(grid.shape + (6,))
        chi = np.stack([x[..., 0] + 1j * x[..., 1], x[..., 2] + 1j * x[..., 3]], axis=-1)
        mu = x[..., 4] + 1j * x[..., 5]
        r_a, r_b, r_c, r_e = kernel_system_apply(grid, a, alpha, chi, mu)
        rows = [
            r_a[..., 0].real, r_a[..., 0].imag, r_a[..., 1].real, r_a[..., 1].imag,
            r_b.real, r_b.imag,
            r_c.real, r_c.imag,
            r_e[..., 0, 0].imag, r_e[..., 1, 1].imag,
            r_e[..., 0, 1].real, r_e[..., 0, 1].imag,
        ]
        return np.stack(rows, axis=-1).reshape(-1)

    cols = []
    basis = np.zeros(ncols)
    for k in range(ncols):
        basis[k] = 1.0
        cols.append(apply_real(basis))
        basis[k] = 0.0
    return np.stack(cols, axis=-1)


def kernel_dimension(matrix: np.ndarray, tol: float = 1e-8, gap_requirement: float = 1e3):
    """Numerical kernel dimension with a spectral-gap report.

    Counts singular values below tol * s_max; raises if the gap between
    kept and dropped values is below the requirement (indeterminate).
    Returns (dimension, gap_ratio, singular_values).
    """
    svals = np.linalg.svd(matrix, compute_uv=False)
    smax = svals[0] if len(svals) else 0.0
    if smax == 0.0:
        return matrix.shape[1], np.inf, svals
    cut = tol * smax
    below = svals < cut
    dim = int(np.count_nonzero(below))
    if dim == 0:
        gap = float(svals[-1] / cut)
    else:
        dropped = svals[below][0]
        kept = svals[~below][-1] if np.any(~below) else np.inf
        gap = float(kept / max(dropped, 1e-300))
    if gap < gap_requirement:
        raise ArithmeticError(
            f"kernel dimension indeterminate: spectral gap {gap:.2e} below {gap_requirement:.0e}"
        )
    return dim, gap, svals
