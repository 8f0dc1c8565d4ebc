"""Hot integration kernels: numba-compiled with a pure-numpy fallback.

The parallel-transport integrators dominate the runtime of the
finite-difference oracles (a classical 4th-order step per grid point,
hundreds of steps per transport).  When numba is importable they run as
@njit kernels; setting the environment variable
``SPINTORUS_DISABLE_NUMBA=1`` (or uninstalling numba) selects the
vectorized numpy path instead.  Both paths implement the same classical
RK4 scheme; ``benchmarks/benchmark_kernels.py`` compares them.
"""

import os

import numpy as np

_DISABLED = os.environ.get("SPINTORUS_DISABLE_NUMBA", "0").lower() in ("1", "true", "yes")

HAS_NUMBA = False
if not _DISABLED:
    try:
        import numba

        HAS_NUMBA = True
    except ImportError:  # pragma: no cover - environment dependent
        HAS_NUMBA = False


# ---------------------------------------------------------------------------
# Pure numpy kernels (reference implementations).


def _transport_linear_np(e0, ga, gb, steps):
    dg = gb - ga
    e = e0.copy()
    h = 1.0 / steps
    for k in range(steps):
        u = k * h
        k1 = _lin_rhs(ga, dg, u, e)
        k2 = _lin_rhs(ga, dg, u + 0.5 * h, e + 0.5 * h * k1)
        k3 = _lin_rhs(ga, dg, u + 0.5 * h, e + 0.5 * h * k2)
        k4 = _lin_rhs(ga, dg, u + h, e + h * k3)
        e = e + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return e


def _lin_rhs(ga, dg, u, e):
    g = ga + u * dg
    return -0.5 * np.linalg.solve(g, np.einsum("...ij,...jk->...ik", dg, e))


def _straight_rhs(g0, s, t, e):
    ident = np.eye(4)
    phi = ident + t * s
    gt = np.einsum("...ji,...jk,...kl->...il", phi, g0, phi)
    gdot = np.einsum("...ji,...jk,...kl->...il", s, g0, phi) + np.einsum(
        "...ji,...jk,...kl->...il", phi, g0, s
    )
    return -0.5 * np.linalg.solve(gt, np.einsum("...ij,...jk->...ik", gdot, e))


def _transport_straight_np(e0, g0, s, t_final, steps):
    e = e0.copy()
    h = t_final / steps
    for k in range(steps):
        t = k * h
        k1 = _straight_rhs(g0, s, t, e)
        k2 = _straight_rhs(g0, s, t + 0.5 * h, e + 0.5 * h * k1)
        k3 = _straight_rhs(g0, s, t + 0.5 * h, e + 0.5 * h * k2)
        k4 = _straight_rhs(g0, s, t + h, e + h * k3)
        e = e + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return e


# ---------------------------------------------------------------------------
# Numba kernels (same scheme, per-point inner loops).

if HAS_NUMBA:

    @numba.njit(cache=True)
    def _lin_rhs_nb(ga, dg, u, e):
        g = ga + u * dg
        return -0.5 * np.linalg.solve(g, dg @ e)

    @numba.njit(cache=True)
    def _transport_linear_nb(e0, ga, gb, steps):
        npts = e0.shape[0]
        out = np.empty_like(e0)
        h = 1.0 / steps
        for p in range(npts):
            e = e0[p].copy()
            a = ga[p]
            dg = gb[p] - ga[p]
            for k in range(steps):
                u = k * h
                k1 = _lin_rhs_nb(a, dg, u, e)
                k2 = _lin_rhs_nb(a, dg, u + 0.5 * h, e + 0.5 * h * k1)
                k3 = _lin_rhs_nb(a, dg, u + 0.5 * h, e + 0.5 * h * k2)
                k4 = _lin_rhs_nb(a, dg, u + h, e + h * k3)
                e = e + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[p] = e
        return out

    @numba.njit(cache=True)
    def _straight_rhs_nb(g0, s, t, e):
        phi = np.eye(4) + t * s
        gt = phi.T @ g0 @ phi
        gdot = s.T @ g0 @ phi + phi.T @ g0 @ s
        return -0.5 * np.linalg.solve(gt, gdot @ e)

    @numba.njit(cache=True)
    def _transport_straight_nb(e0, g0, s, t_final, steps):
        npts = e0.shape[0]
        out = np.empty_like(e0)
        h = t_final / steps
        for p in range(npts):
            e = e0[p].copy()
            g = g0[p]
            sp = s[p]
            for k in range(steps):
                t = k * h
                k1 = _straight_rhs_nb(g, sp, t, e)
                k2 = _straight_rhs_nb(g, sp, t + 0.5 * h, e + 0.5 * h * k1)
                k3 = _straight_rhs_nb(g, sp, t + 0.5 * h, e + 0.5 * h * k2)
                k4 = _straight_rhs_nb(g, sp, t + h, e + h * k3)
                e = e + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            out[p] = e
        return out


def _as_batch(*arrays):
    lead = arrays[0].shape[:-2]
    flat = [np.ascontiguousarray(a.reshape(-1, 4, 4), dtype=np.float64) for a in arrays]
    return lead, flat


def transport_linear(e0, ga, gb, steps=64):
    """Parallel transport of frames along g(u) = ga + u (gb - ga), u in [0,1]."""
    e0, ga, gb = (np.asarray(x, dtype=float) for x in (e0, ga, gb))
    lead, (e, a, b) = _as_batch(e0, np.broadcast_to(ga, e0.shape), np.broadcast_to(gb, e0.shape))
    if HAS_NUMBA:
        out = _transport_linear_nb(e, a, b, steps)
    else:
        out = _transport_linear_np(e, a, b, steps)
    return out.reshape(lead + (4, 4))


def transport_straight(e0, g0, s, t_final, steps=128):
    """Parallel transport along g_t = (Id + t s)^T g0 (Id + t s), t in [0, t_final]."""
    e0, g0, s = (np.asarray(x, dtype=float) for x in (e0, g0, s))
    lead, (e, g, sp) = _as_batch(e0, np.broadcast_to(g0, e0.shape), np.broadcast_to(s, e0.shape))
    if HAS_NUMBA:
        out = _transport_straight_nb(e, g, sp, float(t_final), steps)
    else:
        out = _transport_straight_np(e, g, sp, float(t_final), steps)
    return out.reshape(lead + (4, 4))


def transport_path(e0, g_of_t, gdot_of_t, t0, t1, steps=128):
    """Generic-path transport (numpy only): callables t -> metric / velocity fields."""
    e = np.asarray(e0, dtype=float).copy()
    h = (t1 - t0) / steps

    def rhs(t, ee):
        g = g_of_t(t)
        gd = gdot_of_t(t)
        return -0.5 * np.linalg.solve(g, np.einsum("...ij,...jk->...ik", gd, ee))

    for k in range(steps):
        t = t0 + k * h
        k1 = rhs(t, e)
        k2 = rhs(t + 0.5 * h, e + 0.5 * h * k1)
        k3 = rhs(t + 0.5 * h, e + 0.5 * h * k2)
        k4 = rhs(t + h, e + h * k3)
        e = e + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return e
