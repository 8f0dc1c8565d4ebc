"""Frozen algebraic conventions shared by every module.

Everything here is a convention choice, pinned once and verified by the
test suite:

* Clifford generators with v.v = -|v|^2, skew-hermitian, block
  off-diagonal in the chirality splitting C^4 = W+ (+) W-.
* Orientation: gamma1.gamma2.gamma3.gamma4 = -Id on W+, +Id on W-.
* Orthonormal bases of self-dual / anti-self-dual 2-forms and of
  traceless symmetric endomorphisms.
* The complex structure of the Kahler model (z1 = x1 + i x2,
  z2 = x3 + i x4) and its Kahler form omega = dx1^dx2 + dx3^dx4.
* The scalar factor by which a symmetric endomorphism acts on the
  diagonal blocks of Lambda^2 (KAPPA_TRACE, see pointwise.py).
"""

import numpy as np

# Pauli matrices.
PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

_I2 = np.eye(2, dtype=np.complex128)

# tau_a: the W- -> W+ blocks of the generators (quaternionic basis).
TAU = np.stack([1j * PAULI[0], 1j * PAULI[1], 1j * PAULI[2], _I2])

# gamma_a = [[0, tau_a], [-tau_a^dagger, 0]]; skew-hermitian, exchanges
# the chirality blocks, gamma_a gamma_b + gamma_b gamma_a = -2 delta_ab.
GAMMA = np.zeros((4, 4, 4), dtype=np.complex128)
for _a in range(4):
    GAMMA[_a, :2, 2:] = TAU[_a]
    GAMMA[_a, 2:, :2] = -TAU[_a].conj().T

# Volume element gamma1 gamma2 gamma3 gamma4 = diag(-1,-1,+1,+1):
# W+ is the first block, W- the second.
VOLUME_ELEMENT = GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3]

# Index pairs for packing antisymmetric 4x4 coefficient matrices into
# 6-vectors, ordered e12, e13, e14, e23, e24, e34.
TWOFORM_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))

# Levi-Civita symbol on four indices.
EPS4 = np.zeros((4, 4, 4, 4))
for _p, _s in (
    ((0, 1, 2, 3), 1), ((0, 1, 3, 2), -1), ((0, 2, 1, 3), -1),
    ((0, 2, 3, 1), 1), ((0, 3, 1, 2), 1), ((0, 3, 2, 1), -1),
    ((1, 0, 2, 3), -1), ((1, 0, 3, 2), 1), ((1, 2, 0, 3), 1),
    ((1, 2, 3, 0), -1), ((1, 3, 0, 2), -1), ((1, 3, 2, 0), 1),
    ((2, 0, 1, 3), 1), ((2, 0, 3, 1), -1), ((2, 1, 0, 3), -1),
    ((2, 1, 3, 0), 1), ((2, 3, 0, 1), 1), ((2, 3, 1, 0), -1),
    ((3, 0, 1, 2), -1), ((3, 0, 2, 1), 1), ((3, 1, 0, 2), 1),
    ((3, 1, 2, 0), -1), ((3, 2, 0, 1), -1), ((3, 2, 1, 0), 1),
):
    EPS4[_p] = _s


def _antisym(i, j):
    m = np.zeros((4, 4))
    m[i, j] = 1.0
    m[j, i] = -1.0
    return m


# Orthonormal bases of Lambda^2_+/- for the flat metric, as antisymmetric
# coefficient matrices; the 2-form inner product is <w, e> = 1/2 sum w_ij e_ij
# (so ||e_i ^ e_j|| = 1 and these have unit norm).
SD_BASIS = np.stack(
    [
        (_antisym(0, 1) + _antisym(2, 3)) / np.sqrt(2.0),
        (_antisym(0, 2) - _antisym(1, 3)) / np.sqrt(2.0),
        (_antisym(0, 3) + _antisym(1, 2)) / np.sqrt(2.0),
    ]
)
ASD_BASIS = np.stack(
    [
        (_antisym(0, 1) - _antisym(2, 3)) / np.sqrt(2.0),
        (_antisym(0, 2) + _antisym(1, 3)) / np.sqrt(2.0),
        (_antisym(0, 3) - _antisym(1, 2)) / np.sqrt(2.0),
    ]
)


def _sym(i, j):
    m = np.zeros((4, 4))
    m[i, j] += 0.5
    m[j, i] += 0.5
    return m


# Orthonormal basis of traceless symmetric 4x4 matrices for the inner
# product (s, t) = 2 tr(st): 2 tr(_sym(i,j)^2) = 1 already.
_diag = [np.diag(v) for v in ([1, -1, 0, 0], [1, 1, -2, 0], [1, 1, 1, -3])]
SYM0_BASIS = np.stack(
    [_sym(i, j) for i in range(4) for j in range(i + 1, 4)]
    + [d / np.sqrt(2.0 * np.trace(d @ d)) for d in _diag]
)

# Complex structure: z1 = x1 + i x2, z2 = x3 + i x4, J dx1 = dx2 etc.
J_STD = np.array(
    [
        [0.0, -1.0, 0.0, 0.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, -1.0],
        [0.0, 0.0, 1.0, 0.0],
    ]
)

# Kahler form omega = g(J., .) = dx1^dx2 + dx3^dx4 (coefficient matrix).
OMEGA_STD = _antisym(0, 1) + _antisym(2, 3)

# dzbar1 ^ dzbar2 = e13 - e24 - i(e14 + e23), the (0,2) direction of
# Lambda^2_+ (x) C in the frozen complex structure.
DZBAR12 = (
    _antisym(0, 2) - _antisym(1, 3) - 1j * (_antisym(0, 3) + _antisym(1, 2))
).astype(np.complex128)

# Diagonal-block factor of the degree-0 derivation i(s*) on 2-forms:
# i(s*) acts on Lambda^2_+/- by KAPPA_TRACE * tr(s).  The identity
# endomorphism acts as 2 on 2-forms while tr(Id) = 4, so the factor is
# 1/2; pinned against the finite-difference variation of the projected
# curvature (tests/test_functional.py).
KAPPA_TRACE = 0.5

# Unitary intertwiner between the abstract spinor space C^4 (GAMMA above)
# and the Kahler model (Lambda^{0,0} + Lambda^{0,2}, Lambda^{0,1}) in the
# unit-norm bases (1, dzbar1^dzbar2 / 2, dzbar1/sqrt2, dzbar2/sqrt2).
# Computed once by solving the intertwining equations
# U gamma_i = rho_model(dx_i) U (re-derived in tests/test_kahler.py),
# phase fixed by U[0,0] = 1.
IDENTIFICATION_UNITARY = np.array(
    [
        [1, 0, 0, 0],
        [0, -1, 0, 0],
        [0, 0, 0, -1j],
        [0, 0, -1j, 0],
    ],
    dtype=np.complex128,
)
