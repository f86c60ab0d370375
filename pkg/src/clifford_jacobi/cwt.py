"""Sampled continuous wavelet transform on regular grids.

Coefficients use the Hermitian pairing ``C_{a,b}(f) = int f(x) conj(psi_{a,b}(x)) dV``
with ``psi_{a,b}(x) = a**(-m/2) psi((x - b)/a)`` and Clifford conjugation
``conj``; synthesis multiplies by the same normalised copy.  Integrals over
positions and points are plain Riemann sums on the signal grid, and the scale
measure ``da/a**(m+1)`` is sampled on a geometric grid with midpoint weights.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import signal

from .clifford import blade_indices, conjugation_signs, product_table
from .families import WaveletSpec
from .vecpoly import as_number

MAX_CELLS_3D = 32**3


class ScaleRangeError(ValueError):
    """A requested scale cannot be resolved on the grid."""


@dataclass(frozen=True)
class GridSignal:
    """Clifford-valued samples on a uniform grid.

    ``samples`` has shape ``extents + (2**m,)``; node ``i`` along axis ``k``
    sits at ``origin[k] + i * spacing``.
    """

    m: int
    origin: tuple
    spacing: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        samples = np.array(self.samples, dtype=float)
        if samples.ndim != self.m + 1 or samples.shape[-1] != 1 << self.m:
            raise ValueError(f"samples must have shape (n_1, ..., n_{self.m}, {1 << self.m}), got {samples.shape}")
        if any(n < 8 for n in samples.shape[:-1]):
            raise ValueError("each grid axis needs at least 8 samples")
        if self.m == 3 and math.prod(samples.shape[:-1]) > MAX_CELLS_3D:
            raise ValueError("three-dimensional grids are limited to 32^3 nodes")
        if self.m not in (2, 3):
            raise ValueError("grid signals are supported for m = 2 and m = 3")
        if not self.spacing > 0:
            raise ValueError("spacing must be positive")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))
        if len(self.origin) != self.m:
            raise ValueError("origin needs one coordinate per axis")

    @classmethod
    def from_function(cls, f, m, extents, spacing, origin=None) -> GridSignal:
        """Sample ``f(points) -> (..., 2**m)`` on a grid centred on 0 by default."""
        extents = tuple(int(n) for n in extents)
        if origin is None:
            origin = tuple(-(n - 1) * spacing / 2 for n in extents)
        grid = cls(m, origin, spacing, np.zeros(extents + (1 << m,)))
        return grid.with_samples(np.asarray(f(grid.points()), dtype=float))

    @classmethod
    def scalar(cls, values, spacing, origin=None) -> GridSignal:
        values = np.asarray(values, dtype=float)
        m = values.ndim
        if origin is None:
            origin = tuple(-(n - 1) * spacing / 2 for n in values.shape)
        samples = np.zeros(values.shape + (1 << m,))
        samples[..., 0] = values
        return cls(m, origin, spacing, samples)

    def with_samples(self, samples) -> GridSignal:
        return GridSignal(self.m, self.origin, self.spacing, samples)

    @property
    def extents(self) -> tuple:
        return self.samples.shape[:-1]

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.m

    def axes(self) -> list:
        return [o + self.spacing * np.arange(n) for o, n in zip(self.origin, self.extents)]

    def points(self) -> np.ndarray:
        return np.stack(np.meshgrid(*self.axes(), indexing="ij"), axis=-1)

    def boundary_max(self) -> float:
        s = np.abs(self.samples)
        edges = []
        for axis in range(self.m):
            edges.append(np.take(s, 0, axis=axis).max())
            edges.append(np.take(s, -1, axis=axis).max())
        return float(max(edges))

    def inner(self, other: GridSignal) -> float:
        """Discrete ``Sc int conj(f) g dV``; equals the blade dot product summed over nodes."""
        self._check_same_grid(other)
        return float(np.sum(self.samples * other.samples) * self.cell_volume)

    def norm(self) -> float:
        return math.sqrt(self.inner(self))

    def _check_same_grid(self, other: GridSignal) -> None:
        if self.m != other.m or self.extents != other.extents or self.spacing != other.spacing:
            raise ValueError("signals live on different grids")
        if not np.allclose(self.origin, other.origin):
            raise ValueError("signals live on different grids")

    def __add__(self, other: GridSignal) -> GridSignal:
        self._check_same_grid(other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other: GridSignal) -> GridSignal:
        self._check_same_grid(other)
        return self.with_samples(self.samples - other.samples)

    def scale(self, factor: float) -> GridSignal:
        return self.with_samples(self.samples * factor)

    # I/O ------------------------------------------------------------------------

    def header(self) -> dict:
        return {"m": self.m, "origin": list(self.origin), "spacing": self.spacing, "extents": list(self.extents)}

    def save(self, csv_path) -> None:
        """Write ``csv_path`` plus a ``.json`` header sidecar next to it."""
        csv_path = Path(csv_path)
        names = ["x", "y", "z"][: self.m] + [blade_name(mask) for mask in range(1 << self.m)]
        pts = self.points().reshape(-1, self.m)
        vals = self.samples.reshape(-1, 1 << self.m)
        with open(csv_path, "w") as fh:
            fh.write(",".join(names) + "\n")
            for p, v in zip(pts, vals):
                fh.write(",".join(f"{c:.17g}" for c in (*p, *v)) + "\n")
        sidecar_path(csv_path).write_text(json.dumps(self.header(), indent=2) + "\n")

    @classmethod
    def load(cls, csv_path) -> GridSignal:
        csv_path = Path(csv_path)
        header = json.loads(sidecar_path(csv_path).read_text())
        m = int(header["m"])
        extents = tuple(int(n) for n in header["extents"])
        data = np.loadtxt(csv_path, delimiter=",", skiprows=1, ndmin=2)
        if data.shape != (math.prod(extents), m + (1 << m)):
            raise ValueError(f"{csv_path}: expected {math.prod(extents)} rows of {m + (1 << m)} columns")
        samples = data[:, m:].reshape(extents + (1 << m,))
        return cls(m, tuple(header["origin"]), float(header["spacing"]), samples)


def blade_name(mask: int) -> str:
    return "e" + "".join(map(str, blade_indices(mask))) if mask else "scalar"


def sidecar_path(csv_path) -> Path:
    csv_path = Path(csv_path)
    return csv_path.with_suffix(".json")


# scales -------------------------------------------------------------------------


def geometric_scales(a_min: float, a_max: float, count: int):
    """Geometric midpoints of ``count`` equal cells of ``[ln a_min, ln a_max]`` and the cell width."""
    if not 0 < a_min < a_max:
        raise ScaleRangeError(f"need 0 < a_min < a_max, got [{a_min}, {a_max}]")
    if count < 1:
        raise ScaleRangeError("need at least one scale")
    step = math.log(a_max / a_min) / count
    scales = a_min * np.exp(step * (np.arange(count) + 0.5))
    return scales, step


def check_scales(signal: GridSignal, scales) -> None:
    smallest = float(np.min(scales))
    if smallest < 2 * signal.spacing:
        raise ScaleRangeError(f"scale {smallest:g} is below twice the grid spacing ({2 * signal.spacing:g})")


@dataclass(frozen=True)
class CwtField:
    """Coefficients ``coeffs[s, *b, blade]`` for scales ``scales[s]`` at grid positions."""

    scales: np.ndarray
    log_step: float
    grid: GridSignal = field(repr=False)
    coeffs: np.ndarray = field(repr=False)

    @property
    def m(self) -> int:
        return self.grid.m

    def scale_weights(self) -> np.ndarray:
        """Midpoint weights of ``da / a**(m+1)`` in ``ln a``, times the position cell volume."""
        return self.log_step / self.scales**self.m * self.grid.cell_volume

    def inner(self, other: CwtField) -> float:
        """Discrete ``Sc sum conj(C(f)) C(g) da dV(b) / a^(m+1)``."""
        w = self.scale_weights()
        prod = np.sum(self.coeffs * other.coeffs, axis=tuple(range(1, self.coeffs.ndim)))
        return float(np.dot(w, prod))

    def __add__(self, other: CwtField) -> CwtField:
        return CwtField(self.scales, self.log_step, self.grid, self.coeffs + other.coeffs)

    def save(self, path, spec: WaveletSpec = None) -> None:
        """Write coefficients to ``path`` (``.npy``) and metadata to its ``.json`` sidecar.

        Both files are byte-for-byte reproducible for identical inputs.
        """
        path = Path(path)
        with open(path, "wb") as fh:
            np.save(fh, np.ascontiguousarray(self.coeffs), allow_pickle=False)
        meta = {
            "scales": [float(a) for a in self.scales],
            "log_step": float(self.log_step),
            "grid": self.grid.header(),
        }
        if spec is not None:
            meta["wavelet"] = {"ell": spec.ell, "m": spec.m, "alpha": str(spec.alpha), "beta": str(spec.beta)}
        sidecar_path(path).write_text(json.dumps(meta, indent=2) + "\n")

    @classmethod
    def load(cls, path) -> CwtField:
        path = Path(path)
        meta = json.loads(sidecar_path(path).read_text())
        with open(path, "rb") as fh:
            coeffs = np.load(fh, allow_pickle=False)
        grid = meta["grid"]
        m = int(grid["m"])
        extents = tuple(int(n) for n in grid["extents"])
        scales = np.asarray(meta["scales"], dtype=float)
        if coeffs.shape != (scales.size,) + extents + (1 << m,):
            raise ValueError(f"{path}: coefficient array has shape {coeffs.shape}, header implies {(scales.size,) + extents + (1 << m,)}")
        blank = GridSignal(m, tuple(grid["origin"]), float(grid["spacing"]), np.zeros(extents + (1 << m,)))
        return cls(scales, float(meta["log_step"]), blank, coeffs)


def saved_wavelet(path) -> WaveletSpec:
    """Wavelet recorded next to a saved :class:`CwtField`."""
    meta = json.loads(sidecar_path(path).read_text())
    if "wavelet" not in meta:
        raise ValueError(f"{path}: no wavelet recorded in the sidecar")
    w = meta["wavelet"]
    return WaveletSpec(int(w["ell"]), int(w["m"]), as_number(w["alpha"]), as_number(w["beta"]))


# transform -----------------------------------------------------------------------


def wavelet_copy(spec: WaveletSpec, a: float, b, x) -> np.ndarray:
    """``a**(-m/2) psi((x - b)/a)`` as blade arrays; ``x`` has shape ``(..., m)``."""
    if a <= 0:
        raise ValueError("scale must be positive")
    x = np.asarray(x, dtype=float)
    b = np.asarray(b, dtype=float)
    return a ** (-spec.m / 2) * spec.eval_grid((x - b) / a)


def _offset_kernel(spec: WaveletSpec, a: float, grid: GridSignal) -> np.ndarray:
    """Copy at scale ``a`` sampled on all lattice offsets ``-(n-1)..(n-1)``."""
    offsets = [grid.spacing * np.arange(-(n - 1), n) for n in grid.extents]
    pts = np.stack(np.meshgrid(*offsets, indexing="ij"), axis=-1)
    return wavelet_copy(spec, a, np.zeros(grid.m), pts)


def _correlate(f: np.ndarray, kernel: np.ndarray, m: int) -> np.ndarray:
    """``out[b] = sum_x f[x] * kernel[x - b]`` (geometric product, signal on the left).

    ``kernel`` is sampled on offsets ``-(n-1)..(n-1)`` per axis; the sums run
    directly in the spatial domain, one blade pair at a time.
    """
    sign, result = product_table(m)
    out = np.zeros(f.shape)
    active_f = [i for i in range(1 << m) if np.any(f[..., i])]
    active_k = [j for j in range(1 << m) if np.any(kernel[..., j])]
    for i in active_f:
        for j in active_k:
            # valid correlation: part[s] = sum_x kernel[s + x] f[x], with s = (n-1) - b
            part = _valid_correlation(kernel[..., j], f[..., i])
            out[..., result[i, j]] += sign[i, j] * part
    flip = tuple(slice(None, None, -1) for _ in range(m))
    return out[flip]


def _valid_correlation(kernel: np.ndarray, f: np.ndarray) -> np.ndarray:
    """``part[s] = sum_x kernel[s + x] f[x]`` for real arrays, summed directly."""
    if f.ndim != 2:
        return signal.correlate(kernel, f, mode="valid", method="direct")
    n1, n2 = f.shape
    # rows[r, s2, x2] = kernel[r, s2 + x2]; one matmul does the x2 sum for every row
    rows = sliding_window_view(kernel, n2, axis=1)
    partial = rows @ f.T  # partial[r, s2, x1]
    s1 = np.arange(kernel.shape[0] - n1 + 1)[:, None]
    x1 = np.arange(n1)[None, :]
    return partial[s1 + x1, :, x1].sum(axis=1)


def cwt_forward(f: GridSignal, spec: WaveletSpec, scales, log_step: float = None) -> CwtField:
    """Coefficients at every grid position for each scale."""
    if spec.m != f.m:
        raise ValueError("wavelet and signal dimensions differ")
    scales = np.asarray(scales, dtype=float)
    check_scales(f, scales)
    if log_step is None:
        log_step = float(np.mean(np.diff(np.log(scales)))) if scales.size > 1 else 1.0
    conj = conjugation_signs(f.m)
    coeffs = np.zeros((scales.size,) + f.samples.shape)
    for s, a in enumerate(scales):
        kernel = _offset_kernel(spec, a, f) * conj
        coeffs[s] = _correlate(f.samples, kernel, f.m) * f.cell_volume
    return CwtField(scales, log_step, f.with_samples(np.zeros_like(f.samples)), coeffs)


def reconstruct(c: CwtField, spec: WaveletSpec, admissibility: float) -> GridSignal:
    """``f(x) = (1/A) sum_{a,b} C_{a,b} psi_{a,b}(x) da dV(b)/a^(m+1)``."""
    if admissibility is None or not admissibility > 0:
        raise ValueError("a positive admissibility constant is required")
    grid = c.grid
    w = c.log_step / c.scales**grid.m * grid.cell_volume
    out = np.zeros(grid.samples.shape)
    m = grid.m
    flip = tuple(slice(None, None, -1) for _ in range(m))
    for s, a in enumerate(c.scales):
        kernel = _offset_kernel(spec, a, grid)
        # f[x] = sum_b C[b] K[x - b]: correlate the flipped field with the kernel
        out += w[s] * _correlate(c.coeffs[s][flip], kernel, m)[flip]
    return grid.with_samples(out / admissibility)


def plancherel_ratio(f: GridSignal, g: GridSignal, spec: WaveletSpec, scales, admissibility: float, log_step=None) -> float:
    """``<C(f), C(g)> / (A <f, g>)`` on the sampled lattice."""
    denom = admissibility * f.inner(g)
    if abs(denom) <= 1e-300 or abs(f.inner(g)) <= 1e-14 * f.norm() * g.norm():
        raise ZeroDivisionError("<f, g> vanishes; the Plancherel ratio is undefined")
    cf = cwt_forward(f, spec, scales, log_step)
    cg = cf if g is f else cwt_forward(g, spec, scales, log_step)
    return cf.inner(cg) / denom


def gaussian_bump(extents=(64, 64), spacing=0.0625, width=0.25, center=None) -> GridSignal:
    """Isotropic scalar Gaussian ``exp(-|x - c|^2 / (2 width^2))`` on a centred grid."""
    m = len(extents)

    def f(pts):
        c = np.zeros(m) if center is None else np.asarray(center, dtype=float)
        out = np.zeros(pts.shape[:-1] + (1 << m,))
        out[..., 0] = np.exp(-np.sum((pts - c) ** 2, axis=-1) / (2 * width**2))
        return out

    return GridSignal.from_function(f, m, extents, spacing)
