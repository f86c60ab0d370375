"""Clifford-Gegenbauer and two-parameter Clifford-Jacobi polynomial families.

Every family member is a :class:`~clifford_jacobi.vecpoly.VecPoly`.  The
Jacobi family is available through two independent routes, the three-term
recurrence (:func:`jacobi_Z`) and repeated Dirac differentiation of the weight
(:func:`jacobi_Z_rodrigues`); with rational parameters they agree exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .vecpoly import (
    VecPoly,
    WeightExpansion,
    WeightParams,
    as_number,
    dirac_weight,
    factor_common_weight,
    gamma,
    surface_area,
    weight_eval,
)

MAX_ORDER = 12

FAMILIES = ("gegenbauer", "jacobi2", "legendre", "chebyshev")


class DivergentIntegralError(ValueError):
    """A requested integral does not converge absolutely."""


def _check_order(ell: int) -> None:
    if ell < 0:
        raise ValueError("order must be non-negative")
    if ell > MAX_ORDER:
        raise ValueError(f"order {ell} exceeds the configured maximum {MAX_ORDER}")


# Gegenbauer ------------------------------------------------------------------


@lru_cache(maxsize=512)
def _gegenbauer(ell, m, alpha):
    g = VecPoly.constant(m, 1)
    for k in range(ell):
        # G_{k+1} = -2(alpha - k) x G_k - (1 + |x|^2) dG_k
        g = g.mul_x().scale(-2 * (alpha - k)) - g.dirac().mul_one_plus_norm2()
    return g


def gegenbauer(ell: int, m: int, alpha) -> VecPoly:
    """Clifford-Gegenbauer polynomial ``G_{ell,m,alpha}`` by recurrence."""
    _check_order(ell)
    return _gegenbauer(ell, m, as_number(alpha))


def gegenbauer_rodrigues(ell: int, m: int, alpha) -> VecPoly:
    """``(-1)**ell (1 + |x|^2)**(ell - alpha) d^ell (1 + |x|^2)**alpha``."""
    _check_order(ell)
    base = WeightParams(0, alpha)
    e = WeightExpansion.weight(m)
    for _ in range(ell):
        e = dirac_weight(e, base)
    return factor_common_weight(e, 0, base, ell_b=ell).scale((-1) ** ell)


# two-parameter Jacobi ----------------------------------------------------------


@lru_cache(maxsize=2048)
def _jacobi(ell, m, alpha, beta):
    if ell == 0:
        return VecPoly.constant(m, 1)
    k = ell - 1
    z = _jacobi(k, m, alpha, beta)
    # x(1 - x^2) = x(1 + |x|^2) and x(1 + x^2) = x(1 - |x|^2)
    x_one_minus_x2 = VecPoly(m, (0, 1, 0, -1))
    x_one_plus_x2 = VecPoly(m, (0, 1, 0, 1))
    factor = x_one_minus_x2.scale(2 * (alpha - k)) - x_one_plus_x2.scale(2 * (beta - k))
    return factor * z - z.dirac().mul_one_plus_norm2().mul_one_minus_norm2()


def jacobi_Z(ell: int, m: int, alpha, beta) -> VecPoly:
    """Two-parameter Clifford-Jacobi polynomial ``Z_{ell,m}^{alpha,beta}`` by recurrence."""
    _check_order(ell)
    return _jacobi(ell, m, as_number(alpha), as_number(beta))


def jacobi_Z_rodrigues(ell: int, m: int, alpha, beta) -> VecPoly:
    """Same polynomial from ``(-1)**ell w_{ell-alpha, ell-beta} d^ell w_{alpha,beta}``."""
    _check_order(ell)
    base = WeightParams(alpha, beta)
    e = WeightExpansion.weight(m)
    for _ in range(ell):
        e = dirac_weight(e, base)
    return factor_common_weight(e, ell, base).scale((-1) ** ell)


def jacobi_top_factor(k: int, m: int, alpha, beta):
    """Ratio ``c_{3k+3}(Z_{k+1}) / c_{3k}(Z_k)`` of consecutive top coefficients.

    The product term contributes ``-2(alpha + beta - 2k)`` and
    ``-(1 - x^4) dZ_k`` contributes ``gamma(3k, m)``.
    """
    alpha = as_number(alpha)
    beta = as_number(beta)
    return -2 * (alpha - k) - 2 * (beta - k) + gamma(3 * k, m)


def jacobi_degree_expected(ell: int, m: int, alpha, beta) -> bool:
    """True when no top-coefficient factor vanishes, so ``deg Z_ell`` must be ``3 ell``."""
    return all(jacobi_top_factor(k, m, alpha, beta) != 0 for k in range(ell))


# Legendre and Chebyshev explicit sums ------------------------------------------


def _binomial_sum(n: int, m: int, weights) -> VecPoly:
    one_minus = VecPoly(m, (1, -1))
    one_plus = VecPoly(m, (1, 1))
    total = VecPoly(m)
    for k in range(n + 1):
        term = VecPoly.constant(m, weights(k) * (-1) ** (n - k))
        for _ in range(n - k):
            term = term * one_minus
        for _ in range(k):
            term = term * one_plus
        total = total + term
    return total.scale(Fraction(1, 2**n))


def legendre_clifford(n: int, m: int = 2) -> VecPoly:
    """``2**-n sum_k C(n,k)**2 (-1)**(n-k) (1 - x)**(n-k) (1 + x)**k``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _binomial_sum(n, m, lambda k: math.comb(n, k) ** 2)


def chebyshev_clifford(n: int, m: int = 2) -> VecPoly:
    """``2**-n sum_k C(2n,2k) (-1)**(n-k) (1 - x)**(n-k) (1 + x)**k``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _binomial_sum(n, m, lambda k: math.comb(2 * n, 2 * k))


def family_poly(family: str, ell: int, m: int, alpha=0, beta=0) -> VecPoly:
    """Dispatch on family name.  Gegenbauer reads its parameter from ``alpha``."""
    if family == "gegenbauer":
        return gegenbauer(ell, m, alpha)
    if family == "jacobi2":
        return jacobi_Z(ell, m, alpha, beta)
    if family == "legendre":
        return legendre_clifford(ell, m)
    if family == "chebyshev":
        return chebyshev_clifford(ell, m)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def family_poly_rodrigues(family: str, ell: int, m: int, alpha=0, beta=0):
    """Second derivation route, or None when the family has only one."""
    if family == "gegenbauer":
        return gegenbauer_rodrigues(ell, m, alpha)
    if family == "jacobi2":
        return jacobi_Z_rodrigues(ell, m, alpha, beta)
    return None


# CK-extension check --------------------------------------------------------------


def ck_residual(N: int, m: int, alpha, beta) -> list:
    """Coefficients of ``t**l / l!`` in ``(d_t + d_x) F*_N``.

    ``F*_N = sum_{l<=N} t**l/l! Z_l w_{alpha-l, beta-l}``.  Entry ``l`` is the
    polynomial ``P_l`` with coefficient ``P_l w_{alpha-l-1, beta-l-1}``.  For a
    monogenic series every entry but the last is zero; the last equals
    ``-Z_{N+1}``, the Dirac derivative of the top term.
    """
    base = WeightParams(alpha, beta)
    out = []
    for ell in range(N + 1):
        own = WeightExpansion(m, {(ell, ell): jacobi_Z(ell, m, alpha, beta)})
        res = dirac_weight(own, base)
        if ell < N:
            nxt = jacobi_Z(ell + 1, m, alpha, beta)
            res = res + WeightExpansion(m, {(ell + 1, ell + 1): nxt})
        out.append(factor_common_weight(res, ell + 1, base))
    return out


# wavelets ---------------------------------------------------------------------


@dataclass(frozen=True)
class WaveletSpec:
    """Mother wavelet ``psi = (-1)**ell d^ell w_{alpha+ell, beta+ell}``.

    Off the unit ball the weight is ``|1 - r^2|**a (1 + r^2)**b`` and each
    Dirac derivative of ``|1 - r^2|`` carries ``sign(1 - r)``, so
    ``psi = sign(1 - r)**ell * Z(x) * w_{alpha,beta}(r)`` with
    ``Z = Z_{ell,m}^{alpha+ell, beta+ell}``.
    """

    ell: int
    m: int
    alpha: object
    beta: object
    Z: VecPoly = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        _check_order(self.ell)
        object.__setattr__(self, "alpha", as_number(self.alpha))
        object.__setattr__(self, "beta", as_number(self.beta))
        object.__setattr__(self, "Z", jacobi_Z(self.ell, self.m, self.alpha + self.ell, self.beta + self.ell))

    @property
    def weight(self) -> WeightParams:
        return WeightParams(self.alpha, self.beta)

    @property
    def decay_exponent(self) -> float:
        """Power of ``r`` governing ``|psi|`` as ``r -> infinity``."""
        return 3 * self.ell + 2 * float(self.alpha + self.beta)

    def radial_parts(self, r):
        """``(S, V)`` with ``psi(x) = S(r) + x V(r)``."""
        r = np.asarray(r, dtype=float)
        s, v = self.Z.radial_parts(r)
        w = np.asarray(weight_eval(self.weight, r))
        if self.ell % 2:
            w = w * np.sign(1.0 - r)
        return s * w, v * w

    def eval_grid(self, points) -> np.ndarray:
        """Blade arrays ``(..., 2**m)`` of ``psi`` at points ``(..., m)``."""
        points = np.asarray(points, dtype=float)
        s, v = self.radial_parts(np.linalg.norm(points, axis=-1))
        out = np.zeros(points.shape[:-1] + (1 << self.m,))
        out[..., 0] = s
        for j in range(self.m):
            out[..., 1 << j] = points[..., j] * v
        return out

    def __call__(self, x):
        from .clifford import Multivector

        return Multivector(self.m, self.eval_grid(np.asarray(x, dtype=float)))


def moment_integral(k: int, spec: WaveletSpec, quad=None):
    """``int_{R^m} x**k psi(x) dV`` as a Multivector.

    Odd powers of ``x`` in ``x**k Z`` integrate to zero over every sphere, so
    only the scalar profile is integrated, as a one-dimensional radial
    integral split at ``r = 1``.
    """
    from .clifford import Multivector
    from .quadrature import RadialQuadrature

    if k < 0:
        raise ValueError("k must be non-negative")
    if float(spec.alpha) <= -1:
        raise DivergentIntegralError(f"alpha={spec.alpha} makes the weight non-integrable at r=1")
    if spec.decay_exponent + k + spec.m >= 0:
        raise DivergentIntegralError(
            f"x^{k} psi decays like r^{spec.decay_exponent + k:g}; need exponent + m < 0 "
            f"(here {spec.decay_exponent + k + spec.m:g})"
        )
    quad = quad or RadialQuadrature()
    poly = VecPoly.monomial(spec.m, k) * spec.Z
    # scalar part of x^{2j} is (-r^2)^j
    r_coeffs = np.zeros(poly.degree + 1 if poly.degree >= 0 else 1)
    for j, c in enumerate(poly.coeffs[0::2]):
        r_coeffs[2 * j] = float(c) * (-1) ** j
    value = quad.weighted_poly_integral(
        r_coeffs,
        power=spec.m - 1,
        alpha=float(spec.alpha),
        beta=float(spec.beta),
        outside_sign=-1 if spec.ell % 2 else 1,
    )
    return Multivector.scalar(spec.m, surface_area(spec.m) * value)


def orthogonality_integral(k: int, t: int, m: int, alpha, beta, quad=None):
    """``int x**k Z_t^{alpha+t, beta+t} w_{alpha,beta} dV``, with the sign convention of :class:`WaveletSpec`."""
    return moment_integral(k, WaveletSpec(t, m, alpha, beta), quad)
