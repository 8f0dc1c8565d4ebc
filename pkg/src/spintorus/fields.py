"""Periodic grids on the flat 4-torus [0, 2pi)^4 and discrete field calculus.

Fields are numpy arrays of shape ``(n, n, n, n, *components)``.  All
derivative operators are central differences with periodic wrap, so they
commute exactly and are exactly skew-adjoint for the unweighted grid
inner product.  Reductions go through a fixed-order pairwise summation
tree for cross-run determinism.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid with n points per axis."""

    n: int

    def __post_init__(self):
        if self.n < 4 or self.n % 2:
            raise ValueError("grid size must be even and >= 4")

    @property
    def spacing(self) -> float:
        return TWO_PI / self.n

    @property
    def npoints(self) -> int:
        return self.n ** 4

    @property
    def shape(self):
        return (self.n,) * 4

    def coordinates(self):
        """Four broadcastable coordinate arrays x1..x4."""
        x = np.arange(self.n) * self.spacing
        return np.meshgrid(x, x, x, x, indexing="ij")

    @property
    def cell_volume(self) -> float:
        return self.spacing ** 4


def partial_derivative(grid: Grid, f: np.ndarray, axis: int) -> np.ndarray:
    """Central difference along a lattice axis (1-based), periodic wrap."""
    if not 1 <= axis <= 4:
        raise ValueError("axis must be in 1..4")
    a = axis - 1
    return (np.roll(f, -1, axis=a) - np.roll(f, 1, axis=a)) / (2.0 * grid.spacing)


def gradient(grid: Grid, f: np.ndarray) -> np.ndarray:
    """Stack of the four central differences along a new last axis."""
    return np.stack([partial_derivative(grid, f, a) for a in (1, 2, 3, 4)], axis=-1)


def pairwise_sum(values: np.ndarray):
    """Deterministic pairwise summation tree over the first axis."""
    v = np.asarray(values)
    v = v.reshape(v.shape[0], -1) if v.ndim > 1 else v[:, None]
    while v.shape[0] > 1:
        m = v.shape[0] // 2
        head = v[: 2 * m : 2] + v[1 : 2 * m : 2]
        v = np.concatenate([head, v[2 * m:]], axis=0) if v.shape[0] % 2 else head
    out = v[0]
    return out[0] if out.shape == (1,) else out


def integrate(grid: Grid, density: np.ndarray):
    """Integral of a pointwise density over the torus (pairwise tree)."""
    flat = np.asarray(density).reshape(grid.npoints, -1)
    return pairwise_sum(flat).reshape(np.asarray(density).shape[4:]) * grid.cell_volume


# ---------------------------------------------------------------------------
# Band-limited random fields.
#
# Smooth test fields are trigonometric polynomials with integer modes of
# max |k_i| <= kmax, so the same field can be sampled exactly on any grid
# (needed for grid-convergence studies).


class TrigPolynomial:
    """Real trigonometric polynomial field with fixed component shape."""

    def __init__(self, modes, coeffs, comp_shape=()):
        self.modes = np.asarray(modes, dtype=np.int64)          # (m, 4)
        self.coeffs = np.asarray(coeffs, dtype=np.complex128)   # (m, *comp_shape)
        self.comp_shape = tuple(comp_shape)

    def sample(self, grid: Grid) -> np.ndarray:
        xs = grid.coordinates()
        out = np.zeros(grid.shape + self.comp_shape, dtype=np.complex128)
        for k, c in zip(self.modes, self.coeffs):
            phase = k[0] * xs[0] + k[1] * xs[1] + k[2] * xs[2] + k[3] * xs[3]
            wave = np.exp(1j * phase)
            out += wave.reshape(grid.shape + (1,) * len(self.comp_shape)) * c
        return out.real + 0.0

    def sample_complex(self, grid: Grid) -> np.ndarray:
        xs = grid.coordinates()
        out = np.zeros(grid.shape + self.comp_shape, dtype=np.complex128)
        for k, c in zip(self.modes, self.coeffs):
            phase = k[0] * xs[0] + k[1] * xs[1] + k[2] * xs[2] + k[3] * xs[3]
            wave = np.exp(1j * phase)
            out += wave.reshape(grid.shape + (1,) * len(self.comp_shape)) * c
        return out


def _mode_set(kmax: int, rng, count: int):
    ks = rng.integers(-kmax, kmax + 1, size=(count, 4))
    return ks


def random_trig(rng, comp_shape=(), kmax=2, count=6, scale=1.0, complex_valued=False):
    modes = _mode_set(kmax, rng, count)
    coeffs = scale * (
        rng.normal(size=(count,) + comp_shape) + 1j * rng.normal(size=(count,) + comp_shape)
    ) / count
    poly = TrigPolynomial(modes, coeffs, comp_shape)
    poly.complex_valued = complex_valued
    return poly


def sample_real(poly: TrigPolynomial, grid: Grid) -> np.ndarray:
    return poly.sample(grid)


def random_scalar_field(grid: Grid, rng, scale=1.0, kmax=None):
    kmax = max(1, grid.n // 4) if kmax is None else kmax
    return random_trig(rng, (), kmax, scale=scale).sample(grid)


def random_oneform(grid: Grid, rng, scale=1.0, kmax=None, imaginary=False):
    kmax = max(1, grid.n // 4) if kmax is None else kmax
    a = random_trig(rng, (4,), kmax, scale=scale).sample(grid)
    return 1j * a if imaginary else a


def random_sym_field(grid: Grid, rng, scale=1.0, kmax=None):
    kmax = max(1, grid.n // 4) if kmax is None else kmax
    m = random_trig(rng, (4, 4), kmax, scale=scale).sample(grid)
    return 0.5 * (m + np.swapaxes(m, -1, -2))


def random_metric(grid: Grid, rng, amplitude=0.15, kmax=None):
    """SPD metric field g = (Id + P)^T (Id + P) with small band-limited P."""
    p = random_sym_field(grid, rng, scale=amplitude, kmax=kmax)
    e = np.eye(4) + p
    return np.einsum("...ki,...kj->...ij", e, e)


def random_spinor_field(grid: Grid, rng, ncomp=4, scale=1.0, kmax=None):
    kmax = max(1, grid.n // 4) if kmax is None else kmax
    return random_trig(rng, (ncomp,), kmax, scale=scale).sample_complex(grid)


# ---------------------------------------------------------------------------
# Field container file format: one JSON header line, then raw little-endian
# values in row-major lattice order, components fastest.


def write_field(path, grid: Grid, values: np.ndarray) -> None:
    arr = np.asarray(values)
    comp = int(np.prod(arr.shape[4:], dtype=np.int64)) if arr.ndim > 4 else 1
    if arr.shape[:4] != grid.shape:
        raise ValueError("field shape does not match grid")
    if np.iscomplexobj(arr):
        dtype, cast = "c128", "<c16"
    else:
        dtype, cast = "f64", "<f8"
    header = json.dumps(
        {"dims": list(grid.shape), "components": comp, "dtype": dtype},
        separators=(",", ":"),
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n")
        fh.write(np.ascontiguousarray(arr, dtype=cast).tobytes())


def read_field(path):
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode("ascii"))
        raw = fh.read()
    dims = header["dims"]
    comp = header["components"]
    dtype = {"f64": "<f8", "c128": "<c16"}[header["dtype"]]
    arr = np.frombuffer(raw, dtype=dtype)
    shape = tuple(dims) + ((comp,) if comp > 1 else ())
    if len(dims) == 4:
        grid = Grid(dims[0])
        return grid, arr.reshape(shape).copy()
    return None, arr.reshape(shape).copy()


def write_matrix(path, matrix: np.ndarray) -> None:
    """Two-dimensional variant of the container (dense matrices)."""
    m = np.asarray(matrix, dtype="<f8")
    header = json.dumps(
        {"dims": list(m.shape), "components": 1, "dtype": "f64"},
        separators=(",", ":"),
    )
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n")
        fh.write(np.ascontiguousarray(m).tobytes())
