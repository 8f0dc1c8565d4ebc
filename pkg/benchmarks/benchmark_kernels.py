#!/usr/bin/env python3
"""Benchmark the transport kernels with numba against the numpy fallback.

Runs each kernel twice: once with the compiled path (if numba imports)
and once with SPINTORUS_DISABLE_NUMBA=1 forced via a module reload.
Agreement between the two paths is asserted to 1e-12.
"""

import importlib
import os
import sys
import time

import numpy as np

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))


def load_accel(disable_numba):
    os.environ["SPINTORUS_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    import spintorus.accel

    return importlib.reload(spintorus.accel)


def bench(fn, *args, repeats=3):
    fn(*args)  # warm up / compile
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    rng = np.random.default_rng(0)
    npts = 4096  # an 8^4 grid worth of points
    p = 0.15 * rng.normal(size=(npts, 4, 4))
    p = 0.5 * (p + np.swapaxes(p, -1, -2))
    e0 = np.eye(4) + p
    g0 = np.linalg.inv(np.einsum("...ik,...jk->...ij", e0, e0))
    s = rng.normal(size=(npts, 4, 4)) * 0.3
    s = 0.5 * (s + np.swapaxes(s, -1, -2))
    g1 = g0 + 0.05 * s

    results = {}
    for disable in (False, True):
        accel = load_accel(disable)
        label = "numba" if accel.HAS_NUMBA else "numpy"
        t_straight, out_s = bench(accel.transport_straight, e0, g0, s, 0.05, 128)
        t_linear, out_l = bench(accel.transport_linear, e0, g0, g1, 64)
        results[label] = {
            "straight": (t_straight, out_s),
            "linear": (t_linear, out_l),
        }

    if "numba" not in results:
        print("numba unavailable; only the numpy path was timed")

    print(f"{'kernel':<22}{'numba':>12}{'numpy':>12}{'speedup':>10}{'agreement':>14}")
    for kernel in ("straight", "linear"):
        tn = results.get("numba", {}).get(kernel)
        tp = results["numpy"][kernel]
        if tn is None:
            print(f"{kernel:<22}{'-':>12}{tp[0]*1e3:>10.1f}ms{'-':>10}{'-':>14}")
            continue
        agree = float(np.abs(tn[1] - tp[1]).max())
        assert agree < 1e-12, f"paths disagree on {kernel}: {agree}"
        print(
            f"transport_{kernel:<12}{tn[0]*1e3:>10.1f}ms{tp[0]*1e3:>10.1f}ms"
            f"{tp[0]/tn[0]:>9.1f}x{agree:>14.2e}"
        )


if __name__ == "__main__":
    main()
