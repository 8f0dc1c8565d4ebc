"""Development scratch: derive and verify the frozen conventions.

Run from /root/pkg with PYTHONPATH=src. Not part of the package.
"""
import numpy as np

np.set_printoptions(precision=6, suppress=True, linewidth=120)

from spintorus.constants import GAMMA, OMEGA_STD, DZBAR12, SD_BASIS, ASD_BASIS, SYM0_BASIS
from spintorus.clifford import rho_endo, quadratic_map, spinor_pair_to_oneform

rng = np.random.default_rng(0)

# --- 1. Clifford relations ---------------------------------------------------
print("== Clifford relations ==")
err = 0.0
for i in range(4):
    for j in range(4):
        acom = GAMMA[i] @ GAMMA[j] + GAMMA[j] @ GAMMA[i]
        err = max(err, np.abs(acom + 2 * (i == j) * np.eye(4)).max())
print("anticommutation err:", err)
print("skew-hermitian err:", max(np.abs(G + G.conj().T).max() for G in GAMMA))
vol = GAMMA[0] @ GAMMA[1] @ GAMMA[2] @ GAMMA[3]
print("volume element diag:", np.diag(vol).real)

# SD acts only on W+, ASD only on W-
for name, basis, blk in (("SD", SD_BASIS, np.s_[2:, 2:]), ("ASD", ASD_BASIS, np.s_[:2, :2])):
    worst = 0.0
    for b in basis:
        R = rho_endo(b, 2)
        worst = max(worst, np.abs(R[blk]).max(), np.abs(R[:2, 2:]).max(), np.abs(R[2:, :2]).max())
    print(f"{name} annihilates other chirality err:", worst)

# rho isometry on 2-forms: <rho(w), rho(e)>_{1/4 tr} = <w, e> = 1/2 sum w e
def two_inner(w, e):
    return 0.5 * np.sum(w * e.conj())

def end_inner(A, B):
    return 0.25 * np.trace(A @ B.conj().T)

w = rng.normal(size=(4, 4)); w = w - w.T
e = rng.normal(size=(4, 4)); e = e - e.T
print("rho 2-form isometry:", two_inner(w, e), end_inner(rho_endo(w, 2), rho_endo(e, 2)))

# (ide): <rho(theta), [psi psi*]_0> = 1/4 <rho(theta) psi, psi>
theta = sum(rng.normal() * 1j * b for b in SD_BASIS)
psi = rng.normal(size=2) + 1j * rng.normal(size=2)
R = rho_endo(theta, 2)[:2, :2]
lhs = 0.25 * np.trace(R @ quadratic_map(psi).conj().T)
rhs = 0.25 * np.vdot(psi, R @ psi)  # <R psi, psi> = psi^dag R psi
print("(ide):", lhs, rhs)

# (adj): defining property of psi* (x) chi
sigma = rng.normal(size=4) + 1j * rng.normal(size=4)
chi = rng.normal(size=2) + 1j * rng.normal(size=2)
psi4 = np.concatenate([psi, [0, 0]])
full = rho_endo(sigma, 1) @ psi4
v = spinor_pair_to_oneform(psi, chi)
lhs = np.vdot(chi, full[2:])           # <rho(sigma)psi, chi> with <u,v> = v^dag u
rhs = 2 * np.sum(sigma * v.conj())
print("(adj):", lhs, rhs)

# --- 2. Kahler model rho and the intertwiner U -------------------------------
print("\n== Kahler model ==")
# model basis m1=1, m2=dzbar1^dzbar2/2, m3=dzbar1/sqrt2, m4=dzbar2/sqrt2
# x^{01} components of dx_i in (dzbar1, dzbar2): rows = i
X01 = np.array([
    [0.5, 0],        # dx1
    [0.5j, 0],       # dx2
    [0, 0.5],        # dx3
    [0, 0.5j],       # dx4
])

def rho_model(i):
    a1, a2 = X01[i]
    M = np.zeros((4, 4), dtype=complex)
    # action on m1 (function 1): sqrt2 * a = a1 dzbar1 + a2 dzbar2 -> m3, m4 comps
    M[2, 0] = np.sqrt(2) * a1 * np.sqrt(2)   # dzbar1 = sqrt2 m3
    M[3, 0] = np.sqrt(2) * a2 * np.sqrt(2)
    # action on m2 = eta/2: wedge = 0; -iota(a)(eta/2):
    # iota(a)(eta) has <iota(a)eta, v> = <eta, a ^ v>; a^v = (a1 c2 - a2 c1) eta
    # <eta, (a1 c2 - a2 c1) eta> = 4 conj(a1 c2 - a2 c1)... careful: hermitian in 2nd:
    # <eta, k eta> = 4 conj(k). So <iota(a)eta, v> = 4 conj(a1) c2bar*... no:
    # k = a1 c2 - a2 c1 (coefficients of v = c1 dzb1 + c2 dzb2)
    # <eta, k eta> = 4 kbar = 4 (conj(a1) c2bar - conj(a2) c1bar)
    # want <w, v> = 2(w1 c1bar + w2 c2bar) => w1 = -2 conj(a2), w2 = 2 conj(a1)
    # iota(a)(eta/2) = (-conj(a2) dzbar1 + conj(a1) dzbar2)
    M[2, 1] = -np.sqrt(2) * (-np.conj(a2)) * np.sqrt(2)
    M[3, 1] = -np.sqrt(2) * (np.conj(a1)) * np.sqrt(2)
    # action on m3 = dzbar1/sqrt2: wedge: a ^ dzbar1/sqrt2 = -a2/sqrt2 *... :
    # a ^ dzbar1 = a2 dzbar2 ^ dzbar1 = -a2 eta; /sqrt2 -> -a2/sqrt2 eta = -a2 sqrt2 m2
    M[1, 2] = np.sqrt(2) * (-a2) * np.sqrt(2)
    # iota(a)(dzbar1/sqrt2): <iota(a)u, f> = <u, f a> = (1/sqrt2) 2 a1bar fbar...
    # <dzbar1/sqrt2, f(a1 dzbar1 + a2 dzbar2)> = (1/sqrt2) * 2 * conj(f a1)
    # = f-linear? <w, f> = w fbar => w = sqrt2 conj(a1)
    M[0, 2] = -np.sqrt(2) * np.sqrt(2) * np.conj(a1)
    # action on m4: wedge: a ^ dzbar2 = a1 eta; /sqrt2 -> a1 sqrt2 m2
    M[1, 3] = np.sqrt(2) * (a1) * np.sqrt(2)
    M[0, 3] = -np.sqrt(2) * np.sqrt(2) * np.conj(a2)
    return M

RM = [rho_model(i) for i in range(4)]
print("rho_model(dx1):\n", RM[0].real)
# checks: skew-hermitian, anticommutation
print("model skew err:", max(np.abs(M + M.conj().T).max() for M in RM))
emax = 0.0
for i in range(4):
    for j in range(4):
        emax = max(emax, np.abs(RM[i] @ RM[j] + RM[j] @ RM[i] + 2 * (i == j) * np.eye(4)).max())
print("model anticommutation err:", emax)

# solve U gamma_i = rho_model(i) U
rows = []
for i in range(4):
    rows.append(np.kron(GAMMA[i].T, np.eye(4)) - np.kron(np.eye(4), RM[i]))
Asys = np.vstack(rows)
_, s, Vh = np.linalg.svd(Asys)
print("intertwining system smallest svals:", s[-3:])
U = Vh[-1].conj().reshape(4, 4)
# normalize: unitary, U[0,0] real positive
U = U * 2 / np.linalg.norm(U)  # make unitary: ||U||_F = 2 for 4x4 unitary
ph = U[0, 0] / abs(U[0, 0]) if abs(U[0, 0]) > 1e-12 else 1.0
U = U / ph
print("U:\n", U)
print("U unitary err:", np.abs(U @ U.conj().T - np.eye(4)).max())
print("intertwine err:", max(np.abs(U @ GAMMA[i] - RM[i] @ U).max() for i in range(4)))

# rho(omega) on W+ through U: expect diag(-2i, 2i) on (L00, L02)
Rw = rho_endo(OMEGA_STD.astype(complex), 2)
print("U rho(omega) U^-1:\n", (U @ Rw @ U.conj().T))
Rmu = rho_endo(DZBAR12, 2)
print("U rho(dzb12) U^-1:\n", (U @ Rmu @ U.conj().T))
Rmub = rho_endo(DZBAR12.conj(), 2)
print("U rho(conj dzb12) U^-1:\n", (U @ Rmub @ U.conj().T))

# --- 3. delta_minus ratio and kappa ------------------------------------------
print("\n== delta_minus / kappa ==")
def i_derivation_matrix(S):
    """6x6-ish action on antisym coefficient matrices, as operator."""
    def act(W):
        return np.einsum("ka,kj->aj", S, W) + np.einsum("kb,ik->ib", S, W)
    return act

# check i(Id) = 2 on 2-forms
S = np.eye(4)
W = rng.normal(size=(4, 4)); W = W - W.T
act = i_derivation_matrix(S)
print("i(Id) on 2-form = 2w err:", np.abs(act(W) - 2 * W).max())

def sd_project(W):
    coeffs = np.array([two_inner(W, b) for b in SD_BASIS])
    return np.einsum("k,kij->ij", coeffs, SD_BASIS.astype(complex))

def delta_minus_matrix(S0):
    """3x3 matrix of P+ i(S0) restricted to ASD, in the orthonormal bases."""
    act = i_derivation_matrix(S0)
    M = np.zeros((3, 3))
    for m, v in enumerate(ASD_BASIS):
        out = act(v)
        for k, u in enumerate(SD_BASIS):
            M[k, m] = two_inner(out, u).real
    return M

# isometry ratio over random traceless s0
ratios = []
for _ in range(5):
    c = rng.normal(size=9)
    S0 = np.einsum("m,mij->ij", c, SYM0_BASIS)
    n_s = np.sqrt(2 * np.trace(S0 @ S0))
    D = delta_minus_matrix(S0)
    n_d_half = np.sqrt(0.5 * np.trace(D @ D.T))
    ratios.append(n_d_half / n_s)
print("||delta-(s0)||_(1/2 tr) / ||s0||_(2tr):", ratios)

# kappa: d/dt [P^{+,g_t} applied after pullback] vs -(tr s/2 F+ + delta-(s0)F-)
def hodge_flat(W):
    return 0.5 * np.einsum("ijkl,kl->ij", np.zeros((4,4,4,4)) + _eps(), W)

def _eps():
    from spintorus.constants import EPS4
    return EPS4

def star_g(g, W):
    # frame conjugation star
    lam, Q = np.linalg.eigh(g)
    E = Q @ np.diag(lam ** -0.5) @ Q.T
    Wt = E.T @ W @ E
    sWt = hodge_flat(Wt)
    Ei = np.linalg.inv(E)
    return Ei.T @ sWt @ Ei

def p_plus_g(g, W):
    return 0.5 * (W + star_g(g, W))

g0 = np.eye(4)
s = rng.normal(size=(4, 4)); s = 0.5 * (s + s.T)
F = rng.normal(size=(4, 4)); F = F - F.T
t = 1e-6
res = []
for tt in (t, -t):
    phi = np.eye(4) + tt * s
    gt = phi.T @ g0 @ phi
    lam2_inv = np.linalg.inv(phi).T  # (Lambda^2 phi*)^{-1} acts by phi^{-T} on both indices
    Wt = lam2_inv.T @ F @ lam2_inv   # careful: (phi^* w)_ij = phi_ki w_kl phi_lj; inverse pullback:
    res.append(p_plus_g(g0, np.linalg.inv(phi).T @ F @ np.linalg.inv(phi)))
dFplus = (res[0] - res[1]) / (2 * t)
# formula: -(kappa tr s F+ + delta_-(s0) F-) with kappa = 1/2
s0 = s - np.trace(s) / 4 * np.eye(4)
Fp = p_plus_g(g0, F); Fm = F - Fp
act0 = i_derivation_matrix(s0)
dm_Fm = 0.5 * (act0(Fm) + star_g(g0, act0(Fm)))
formula = -(0.5 * np.trace(s) * Fp + dm_Fm)
print("kappa=1/2 formula err:", np.abs(dFplus - formula).max(), " scale:", np.abs(dFplus).max())
formula1 = -(1.0 * np.trace(s) * Fp + dm_Fm)
print("kappa=1 formula err:", np.abs(dFplus - formula1).max())

# --- 4. holonomy orientation --------------------------------------------------
print("\n== holonomy orientation ==")
def transport_edge(E, ga, gb, steps=256):
    dg = gb - ga
    h = 1.0 / steps
    for k in range(steps):
        def f(u, EE):
            g = ga + u * dg
            return -0.5 * np.linalg.solve(g, dg) @ EE
        u = k * h
        k1 = f(u, E); k2 = f(u + h / 2, E + h / 2 * k1)
        k3 = f(u + h / 2, E + h / 2 * k2); k4 = f(u + h, E + h * k3)
        E = E + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    return E

g = np.eye(4) + 0.1 * np.array([[0.5, 0.1, 0, 0],[0.1, 0.3, 0.2, 0],[0, 0.2, 0.1, 0.1],[0, 0, 0.1, 0.4]])
h_ = rng.normal(size=(4, 4)); h_ = 0.5 * (h_ + h_.T)
k_ = rng.normal(size=(4, 4)); k_ = 0.5 * (k_ + k_.T)
for eps in (1e-2, 5e-3, 2.5e-3):
    E0 = np.linalg.cholesky(np.linalg.inv(g))  # any frame with E^T g E = ... just a frame
    corners = [g, g + eps * h_, g + eps * (h_ + k_), g + eps * k_, g]
    E = E0.copy()
    for a, b in zip(corners[:-1], corners[1:]):
        E = transport_edge(E, a, b)
    hol = (E @ np.linalg.inv(E0) - np.eye(4)) / eps ** 2
    omega_formula = -0.25 * (np.linalg.solve(g, h_) @ np.linalg.solve(g, k_)
                             - np.linalg.solve(g, k_) @ np.linalg.solve(g, h_))
    print(f"eps={eps}: |hol - Omega| = {np.abs(hol - omega_formula).max():.3e}  "
          f"|hol + Omega| = {np.abs(hol + omega_formula).max():.3e}  |Omega|={np.abs(omega_formula).max():.3e}")
