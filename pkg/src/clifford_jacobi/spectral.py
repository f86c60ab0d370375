"""Fourier side of the Clifford-Jacobi wavelets.

The transform convention is ``F(f)(u) = int e^{-i<x,u>} f(x) dV(x)`` with no
normalising constant.  For the wavelet ``psi = (-1)**ell d^ell w`` with radial
``w = w_{alpha+ell, beta+ell}``,

    F(psi)(rho xi) = (-i)**ell xi**ell * S(rho),
    S(rho) = (2 pi)**(m/2) rho**(1 - m/2 + ell) h(rho),
    h(rho) = int_0^inf w(r) r**(m/2) J_{m/2-1}(r rho) dr.

``S`` is called the profile below; ``|F(psi)|`` equals ``|S|`` in the blade
norm because ``xi**ell`` is a unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .clifford import geometric_product_arrays
from .families import DivergentIntegralError, WaveletSpec
from .quadrature import QuadratureError, RadialQuadrature
from .vecpoly import surface_area

def bessel_j(nu: float, x):
    """Bessel function of the first kind for integer or half-integer ``nu >= 0``."""
    if nu < 0 or (2 * nu) != int(2 * nu):
        raise ValueError(f"unsupported Bessel order {nu}")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("bessel_j is defined here for x >= 0")
    out = special.jv(nu, x)
    return out if out.ndim else float(out)


def sphere_plane_wave(m: int, r: float, rho: float) -> float:
    """``int_{S^{m-1}} exp(-i <r w, rho xi>) dsigma(w)``, which is real.

    Equals ``(2 pi)**(m/2) J_{m/2-1}(r rho) / (r rho)**(m/2-1)`` and tends to the
    sphere area as ``r rho -> 0``.
    """
    z = r * rho
    nu = m / 2 - 1
    if z < 1e-8:
        return surface_area(m)
    return (2 * math.pi) ** (m / 2) * bessel_j(nu, z) / z**nu


def _check_spec(spec: WaveletSpec) -> None:
    a = float(spec.alpha) + spec.ell
    b = float(spec.beta) + spec.ell
    if a <= -1:
        raise DivergentIntegralError(f"alpha + ell = {a:g} makes the weight non-integrable at r = 1")
    # psi in L^1 (up to the boundary case) keeps the Hankel integral convergent
    if 2 * (a + b) + spec.m / 2 - 0.5 >= 0.5:
        raise DivergentIntegralError(f"weight exponent {2 * (a + b):g} too large for a convergent transform in R^{spec.m}")


def radial_transform(spec: WaveletSpec, rho: float, quad: RadialQuadrature = None) -> float:
    """``h(rho) = int_0^inf |1-r^2|^(alpha+ell) (1+r^2)^(beta+ell) r^(m/2) J_{m/2-1}(r rho) dr``."""
    _check_spec(spec)
    quad = quad or RadialQuadrature()
    return quad.hankel(
        float(spec.alpha) + spec.ell,
        float(spec.beta) + spec.ell,
        spec.m / 2,
        spec.m / 2 - 1,
        rho,
    )


def profile(spec: WaveletSpec, rho: float, quad: RadialQuadrature = None) -> float:
    """Scalar profile ``S(rho)`` of the transform."""
    if rho <= 0:
        raise ValueError("rho must be positive")
    m = spec.m
    h = radial_transform(spec, rho, quad)
    return (2 * math.pi) ** (m / 2) * rho ** (1 - m / 2 + spec.ell) * h


@dataclass(frozen=True)
class SpectralSample:
    """One frequency sample: the profile and the derived magnitude."""

    rho: float
    h: float
    value: float

    @property
    def magnitude(self) -> float:
        return abs(self.value)


def wavelet_hat(spec: WaveletSpec, rho: float, quad: RadialQuadrature = None) -> SpectralSample:
    if rho <= 0:
        raise ValueError("rho must be positive")
    h = radial_transform(spec, rho, quad)
    value = (2 * math.pi) ** (spec.m / 2) * rho ** (1 - spec.m / 2 + spec.ell) * h
    return SpectralSample(rho, h, value)


def wavelet_hat_at(spec: WaveletSpec, u, quad: RadialQuadrature = None):
    """Full transform at frequency vector ``u`` as ``(real, imag)`` blade arrays."""
    u = np.asarray(u, dtype=float)
    m = spec.m
    rho = float(np.linalg.norm(u))
    s = wavelet_hat(spec, rho, quad).value
    xi = np.zeros(1 << m)
    xi[[1 << j for j in range(m)]] = u / rho
    power = np.zeros(1 << m)
    power[0] = 1.0
    for _ in range(spec.ell):
        power = geometric_product_arrays(power, xi, m)
    phase = (-1j) ** spec.ell
    value = phase * power * s
    return value.real, value.imag


def spectrum_table(spec: WaveletSpec, rhos, quad: RadialQuadrature = None, workers: int = 1):
    """Samples on a list of frequencies; thread fan-out keeps input order."""
    rhos = [float(r) for r in rhos]
    if workers <= 1:
        return [wavelet_hat(spec, r, quad) for r in rhos]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda r: wavelet_hat(spec, r, quad), rhos))


# direct Fourier oracle ---------------------------------------------------------


def direct_ft(signal, u, boundary_tol: float = 1e-6):
    """Riemann-sum transform of a sampled Clifford signal at frequency ``u``.

    Returns ``(real, imag)`` blade arrays.  Raises ValueError when the signal
    has not decayed at the grid boundary.
    """
    from .cwt import GridSignal

    if not isinstance(signal, GridSignal):
        raise TypeError("direct_ft expects a GridSignal")
    u = np.asarray(u, dtype=float)
    samples = signal.samples
    peak = np.max(np.abs(samples)) if samples.size else 0.0
    if peak > 0:
        edge = signal.boundary_max()
        if edge > boundary_tol * peak:
            raise ValueError(f"signal mass at grid boundary ({edge:.3g} vs peak {peak:.3g})")
    phase = np.zeros(signal.extents)
    for axis, coord in enumerate(signal.axes()):
        shape = [1] * signal.m
        shape[axis] = -1
        phase = phase + (coord * u[axis]).reshape(shape)
    kernel = np.exp(-1j * phase) * signal.cell_volume
    total = np.tensordot(kernel, samples, axes=(tuple(range(signal.m)), tuple(range(signal.m))))
    return total.real, total.imag


# admissibility ------------------------------------------------------------------


class AdmissibilityDivergence(DivergentIntegralError):
    """The admissibility integral diverges at zero frequency."""


def admissibility(spec: WaveletSpec, quad: RadialQuadrature = None, rho_min=1e-4, rho_cap=200.0, rtol=1e-9):
    """``A = (1/|S^{m-1}|) int |F(psi)(u)|^2 dV(u)/|u|^m = int_0^inf S(rho)^2 drho/rho``.

    Below ``rho = 1`` the integral runs in ``ln rho`` with the analytic head
    ``S(rho_min)^2 / (2 ell)``.  Above it, panels are linear in ``rho`` (the
    profile oscillates with period about ``2 pi``) and added in blocks of
    length ``2 pi`` until a power-law tail fitted to the block mean squares
    falls below ``rtol`` of the running total.
    """
    if spec.ell < 1:
        raise AdmissibilityDivergence(
            "ell = 0 wavelet has nonzero mean; the admissibility integral diverges like int drho/rho at 0"
        )
    _check_spec(spec)
    quad = quad or RadialQuadrature()

    def sq(rhos):
        return np.array([profile(spec, float(r), quad) ** 2 for r in np.atleast_1d(rhos)])

    head = sq(rho_min)[0] / (2 * spec.ell)
    body = quad.log_integral(lambda t: sq(np.exp(t)), math.log(rho_min), 0.0)
    total = head + body

    block = 2 * math.pi
    means = []
    lo = 1.0
    while True:
        hi = lo + block
        nodes, weights = quad.panel_nodes(lo, hi, density=quad.nodes_per_unit / 2)
        vals = sq(nodes)
        total += float(np.dot(weights, vals / nodes))
        means.append(float(np.dot(weights, vals)) / block)
        lo = hi
        tail = _power_tail(means, block)
        if tail is not None and (tail <= rtol * total or hi >= rho_cap):
            break
        if hi >= rho_cap:
            raise QuadratureError(f"admissibility tail did not settle by rho = {rho_cap:g}")
    value = total + tail
    if not math.isfinite(value) or value <= 0:
        raise QuadratureError(f"admissibility quadrature returned {value!r}")
    return value


def _power_tail(means, block):
    """``int_R^inf S^2 drho/rho`` for mean squares decaying like ``rho^-q``; None until fittable."""
    if len(means) < 4:
        return None
    if means[-1] <= 0:
        return 0.0
    k = len(means) // 2 - 1
    r_now = 1.0 + block * (len(means) - 0.5)
    r_half = 1.0 + block * (k + 0.5)
    if means[k] <= 0:
        return None
    q = math.log(means[k] / means[-1]) / math.log(r_now / r_half)
    if q <= 0.5:
        return None
    return means[-1] / q
