"""Pointwise Clifford algebra Cl(R^4) on the fixed spinor space C^4.

Spinors are 4-vectors split as W+ (+) W- (first/last two components).
Forms act through the frozen generators in :mod:`spintorus.constants`;
degree-1 real forms act skew-hermitianly and the volume form acts as
-Id on W+ and +Id on W-.
"""

import numpy as np

from .constants import GAMMA, TWOFORM_PAIRS


def gamma(i: int) -> np.ndarray:
    """Generator gamma_i, 1-based index as in the defining relations."""
    if not 1 <= i <= 4:
        raise ValueError(f"generator index must be in 1..4, got {i}")
    return GAMMA[i - 1].copy()


def spinor_plus(s):
    return np.asarray(s)[..., :2]


def spinor_minus(s):
    return np.asarray(s)[..., 2:]


def make_spinor(plus, minus):
    return np.concatenate([np.asarray(plus), np.asarray(minus)], axis=-1)


def rho_endo(coeffs, degree: int) -> np.ndarray:
    """Endomorphism of C^4 induced by a form in an orthonormal coframe.

    Coefficient layout per degree: 0 and 4 are scalars (the degree-4
    scalar multiplies e1^e2^e3^e4); 1 is a 4-vector; 2 is an
    antisymmetric 4x4 coefficient matrix; 3 is a 4-vector in the basis
    (e2^e3^e4, e1^e3^e4, e1^e2^e4, e1^e2^e3).
    """
    if degree == 0:
        return np.asarray(coeffs) * np.eye(4, dtype=np.complex128)
    if degree == 1:
        return np.einsum("a,aij->ij", np.asarray(coeffs, dtype=np.complex128), GAMMA)
    if degree == 2:
        w = np.asarray(coeffs, dtype=np.complex128)
        out = np.zeros((4, 4), dtype=np.complex128)
        for i, j in TWOFORM_PAIRS:
            out += w[i, j] * (GAMMA[i] @ GAMMA[j])
        return out
    if degree == 3:
        c = np.asarray(coeffs, dtype=np.complex128)
        triples = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))
        out = np.zeros((4, 4), dtype=np.complex128)
        for m, (i, j, k) in zip(c, triples):
            out += m * (GAMMA[i] @ GAMMA[j] @ GAMMA[k])
        return out
    if degree == 4:
        return np.asarray(coeffs) * (GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3])
    raise ValueError(f"form degree must be 0..4, got {degree}")


def clifford_mul(coeffs, spinor, degree: int = 1) -> np.ndarray:
    """Clifford multiplication of a form (orthonormal coframe) on a spinor."""
    return rho_endo(coeffs, degree) @ np.asarray(spinor, dtype=np.complex128)


def quadratic_map(psi_plus) -> np.ndarray:
    """Traceless hermitian endomorphism psi psi* - |psi|^2/2 on W+.

    Gauge covariant: quadratic_map(f psi) = |f|^2 quadratic_map(psi).
    """
    p = np.asarray(psi_plus, dtype=np.complex128)
    outer = np.einsum("...i,...j->...ij", p, p.conj())
    tr = np.einsum("...ii->...", outer).real
    return outer - 0.5 * tr[..., None, None] * np.eye(2)


def spinor_pair_to_oneform(psi_plus, chi_minus) -> np.ndarray:
    """Complex 1-form v with <rho(sigma) psi, chi> = 2 <sigma, v> for all sigma.

    Conjugate-linear in psi, linear in chi; components w.r.t. the
    orthonormal coframe.  v_a = <chi, gamma_a psi> / 2 where GAMMA maps
    W+ into W- through its lower-left block.
    """
    p = np.asarray(psi_plus, dtype=np.complex128)
    c = np.asarray(chi_minus, dtype=np.complex128)
    # gamma_a psi (W- part) = -tau_a^dagger psi; <chi, .> is linear in chi.
    gpsi = np.einsum("aki,...i->...ak", GAMMA[:, 2:, :2], p)
    return 0.5 * np.einsum("...k,...ak->...a", c, gpsi.conj())


def selfdual_from_kahler_data(lam, mu) -> np.ndarray:
    """Antisymmetric coefficient matrix of theta = lam*omega + mu - conj(mu).

    ``mu`` is the coefficient of dzbar1^dzbar2; for imaginary ``lam`` the
    result is an imaginary self-dual 2-form for the flat metric.
    """
    from .constants import DZBAR12, OMEGA_STD

    return lam * OMEGA_STD + mu * DZBAR12 - np.conj(mu) * DZBAR12.conj()


def rho_selfdual_block(lam, mu) -> np.ndarray:
    """Hermitian action of theta = lam*omega + mu - conj(mu) on W+.

    ``lam`` is imaginary, ``mu`` the dzbar1^dzbar2 coefficient.  Returned
    in the Kahler model basis (unit-norm Lambda^{0,0}, Lambda^{0,2}
    directions); equals the W+ block of clifford_mul conjugated by the
    frozen identification unitary.
    """
    lam = complex(lam)
    if abs(lam.real) > 1e-12 * max(1.0, abs(lam)):
        raise ValueError("lam must be purely imaginary")
    from .constants import IDENTIFICATION_UNITARY as U

    block = rho_endo(selfdual_from_kahler_data(lam, complex(mu)), 2)[:2, :2]
    up = U[:2, :2]
    return up @ block @ up.conj().T
