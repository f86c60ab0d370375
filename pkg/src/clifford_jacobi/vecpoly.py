"""Polynomials in the Clifford vector variable and Dirac derivatives of weights.

A :class:`VecPoly` stores ``p(x) = sum_k c_k x**k`` where ``x`` is the Clifford
vector ``sum_j e_j x_j``.  Because ``x**2 = -|x|**2`` every such polynomial
evaluates to ``S(r) + x V(r)``, a scalar plus a radial multiple of ``x``.

Coefficients stay exact (:class:`fractions.Fraction`) as long as the inputs
are ints, Fractions or decimal strings; floats propagate as floats.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Mapping

import numpy as np

from .clifford import Multivector


class WeightDomainError(ValueError):
    """The weight is not finite at the requested radius."""


def as_number(value):
    """Exact Fraction for ints/Fractions/decimal strings, float otherwise."""
    if isinstance(value, bool):
        raise TypeError("boolean is not a number")
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    return float(value)


def gamma(n: int, m: int) -> int:
    """Eigenvalue of the Dirac operator on ``x**n``: ``d(x**n) = gamma(n, m) x**(n-1)``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if n % 2 == 0:
        return -n
    return -(m + n - 1)


def _trim(coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class VecPoly:
    """Polynomial ``sum_k coeffs[k] * x**k`` in dimension ``m``."""

    m: int
    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(as_number(c) for c in self.coeffs))

    @classmethod
    def constant(cls, m: int, value=1) -> VecPoly:
        return cls(m, (value,))

    @classmethod
    def monomial(cls, m: int, k: int, value=1) -> VecPoly:
        return cls(m, (0,) * k + (value,))

    @property
    def degree(self) -> int:
        """Degree; ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def coeff(self, k: int):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def _check(self, other: VecPoly) -> None:
        if other.m != self.m:
            raise ValueError(f"dimension mismatch: {self.m} vs {other.m}")

    def __add__(self, other: VecPoly) -> VecPoly:
        self._check(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return VecPoly(self.m, [self.coeff(k) + other.coeff(k) for k in range(n)])

    def __neg__(self) -> VecPoly:
        return VecPoly(self.m, [-c for c in self.coeffs])

    def __sub__(self, other: VecPoly) -> VecPoly:
        return self + (-other)

    def scale(self, factor) -> VecPoly:
        factor = as_number(factor)
        return VecPoly(self.m, [factor * c for c in self.coeffs])

    def __mul__(self, other):
        if not isinstance(other, VecPoly):
            return self.scale(other)
        self._check(other)
        if self.is_zero or other.is_zero:
            return VecPoly(self.m)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return VecPoly(self.m, out)

    def __rmul__(self, other):
        return self.scale(other)

    # coefficient transforms -------------------------------------------------

    def mul_x(self) -> VecPoly:
        return VecPoly(self.m, (0,) + self.coeffs)

    def mul_norm2(self) -> VecPoly:
        # |x|^2 = -x^2
        return VecPoly(self.m, (0, 0) + tuple(-c for c in self.coeffs))

    def mul_one_plus_norm2(self) -> VecPoly:
        return self + self.mul_norm2()

    def mul_one_minus_norm2(self) -> VecPoly:
        return self - self.mul_norm2()

    def dirac(self) -> VecPoly:
        return VecPoly(self.m, [gamma(k, self.m) * c for k, c in enumerate(self.coeffs)][1:])

    # evaluation ---------------------------------------------------------------

    def radial_parts(self, r):
        """Scalar and x-coefficient profiles ``(S(r), V(r))`` with ``p(x) = S + x V``."""
        r = np.asarray(r, dtype=float)
        t = -r * r
        s = np.zeros_like(r)
        v = np.zeros_like(r)
        even = [float(c) for c in self.coeffs[0::2]]
        odd = [float(c) for c in self.coeffs[1::2]]
        for c in reversed(even):
            s = s * t + c
        for c in reversed(odd):
            v = v * t + c
        return s, v

    def eval(self, x) -> Multivector:
        """Value at a point; ``x`` is a sequence of ``m`` reals or a vector Multivector."""
        if isinstance(x, Multivector):
            if x.m != self.m:
                raise ValueError(f"dimension mismatch: {self.m} vs {x.m}")
            comps = x.coeffs[[1 << j for j in range(x.m)]]
        else:
            comps = np.asarray(x, dtype=float)
            if comps.shape != (self.m,):
                raise ValueError(f"expected a point in R^{self.m}, got shape {comps.shape}")
        s, v = self.radial_parts(np.linalg.norm(comps))
        return Multivector.scalar(self.m, float(s)) + Multivector.vector(comps) * float(v)

    def eval_grid(self, points: np.ndarray) -> np.ndarray:
        """Values at points of shape ``(..., m)`` as blade arrays ``(..., 2**m)``."""
        points = np.asarray(points, dtype=float)
        s, v = self.radial_parts(np.linalg.norm(points, axis=-1))
        out = np.zeros(points.shape[:-1] + (1 << self.m,))
        out[..., 0] = s
        for j in range(self.m):
            out[..., 1 << j] = points[..., j] * v
        return out

    # serialization ------------------------------------------------------------

    def to_dict(self) -> dict:
        return {"m": self.m, "coeffs": [_format_coeff(c) for c in self.coeffs]}

    @classmethod
    def from_dict(cls, data: Mapping) -> VecPoly:
        return cls(int(data["m"]), [Fraction(c) if _is_exact_str(c) else float(c) for c in data["coeffs"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> VecPoly:
        return cls.from_dict(json.loads(text))

    def __str__(self):
        if self.is_zero:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            parts.append(f"{c}" if k == 0 else f"({c})*x^{k}")
        return " + ".join(parts)


def _format_coeff(c) -> str:
    if isinstance(c, Fraction):
        return str(c)
    return repr(float(c))


def _is_exact_str(c) -> bool:
    if not isinstance(c, str):
        return isinstance(c, int)
    try:
        Fraction(c)
    except ValueError:
        return False
    # floats like "1e-300" parse as Fractions too; only plain rationals count as exact
    return all(ch in "0123456789-+/" for ch in c)


def mul_x(p: VecPoly) -> VecPoly:
    return p.mul_x()


def mul_one_plus_norm2(p: VecPoly) -> VecPoly:
    return p.mul_one_plus_norm2()


def mul_one_minus_norm2(p: VecPoly) -> VecPoly:
    return p.mul_one_minus_norm2()


def dirac(p: VecPoly) -> VecPoly:
    return p.dirac()


# weights ---------------------------------------------------------------------


@dataclass(frozen=True)
class WeightParams:
    """Exponents of ``w(x) = |1 - |x|^2|**alpha * (1 + |x|^2)**beta``."""

    alpha: object = 0
    beta: object = 0

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_number(self.alpha))
        object.__setattr__(self, "beta", as_number(self.beta))

    def shifted(self, da, db) -> WeightParams:
        return WeightParams(self.alpha + da, self.beta + db)


def weight_eval(w: WeightParams, r):
    """Evaluate ``|1 - r**2|**alpha * (1 + r**2)**beta``.

    The absolute value realises the sign convention ``((1 - r**2) eps_r)``
    with ``eps_r = sign(1 - r)``, which keeps fractional powers real outside
    the unit ball.  Vectorised over ``r``.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("radius must be non-negative")
    alpha = float(w.alpha)
    beta = float(w.beta)
    gap = np.abs(1.0 - r * r)
    if alpha < 0 and np.any(gap == 0):
        raise WeightDomainError(f"weight with alpha={w.alpha} is infinite on the unit sphere")
    with np.errstate(divide="ignore"):
        out = gap**alpha * (1.0 + r * r) ** beta
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class WeightExpansion:
    """Finite sum ``sum_i poly_i * w_{alpha - a_i, beta - b_i}``.

    ``terms`` maps the shift pair ``(a_i, b_i)`` to the polynomial factor.
    """

    m: int
    terms: Mapping = field(default_factory=dict)

    def __post_init__(self):
        merged = {}
        for (a, b), poly in dict(self.terms).items():
            if a < 0 or b < 0:
                raise ValueError("weight shifts must be non-negative")
            if poly.m != self.m:
                raise ValueError("dimension mismatch inside expansion")
            if not poly.is_zero:
                merged[(a, b)] = poly
        object.__setattr__(self, "terms", merged)

    @classmethod
    def weight(cls, m: int) -> WeightExpansion:
        """The bare weight, ``1 * w_{alpha, beta}``."""
        return cls(m, {(0, 0): VecPoly.constant(m, 1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: WeightExpansion) -> WeightExpansion:
        terms = dict(self.terms)
        for key, poly in other.terms.items():
            terms[key] = terms[key] + poly if key in terms else poly
        return WeightExpansion(self.m, terms)

    def scale(self, factor) -> WeightExpansion:
        return WeightExpansion(self.m, {k: p.scale(factor) for k, p in self.terms.items()})

    def max_shift(self) -> tuple[int, int]:
        if not self.terms:
            return 0, 0
        return max(a for a, _ in self.terms), max(b for _, b in self.terms)

    def evaluate(self, base: WeightParams, points: np.ndarray) -> np.ndarray:
        """Blade arrays of the expansion at points ``(..., m)``."""
        points = np.asarray(points, dtype=float)
        r = np.linalg.norm(points, axis=-1)
        out = np.zeros(points.shape[:-1] + (1 << self.m,))
        for (a, b), poly in self.terms.items():
            wgt = weight_eval(base.shifted(-a, -b), r)
            out += poly.eval_grid(points) * np.asarray(wgt)[..., None]
        return out


def dirac_weight(e: WeightExpansion, base: WeightParams) -> WeightExpansion:
    """Dirac derivative of an expansion by the product rule.

    ``d(p w_{a,b}) = (dp) w_{a,b} + p (-2a x w_{a-1,b} + 2b x w_{a,b-1})``.
    The signed factor ``(1 - |x|^2)`` is used; see :func:`weight_eval` for
    how this relates to the absolute-value convention off the unit ball.
    """
    out = {}

    def acc(key, poly):
        if poly.is_zero:
            return
        out[key] = out[key] + poly if key in out else poly

    for (sa, sb), poly in e.terms.items():
        a = base.alpha - sa
        b = base.beta - sb
        acc((sa, sb), poly.dirac())
        px = poly.mul_x()
        if a != 0:
            acc((sa + 1, sb), px.scale(-2 * a))
        if b != 0:
            acc((sa, sb + 1), px.scale(2 * b))
    return WeightExpansion(e.m, out)


def factor_common_weight(e: WeightExpansion, ell: int, base: WeightParams = None, ell_b: int = None) -> VecPoly:
    """Rewrite ``sum p_i w_{alpha-a_i, beta-b_i}`` as ``P * w_{alpha-ell, beta-ell_b}``.

    Returns ``P``.  ``ell_b`` defaults to ``ell``.  ``base`` is accepted for
    symmetry with :func:`dirac_weight`; the factorisation does not depend on it.
    """
    if ell_b is None:
        ell_b = ell
    total = VecPoly(e.m)
    for (a, b), poly in e.terms.items():
        if a > ell or b > ell_b:
            raise ValueError(f"term shift ({a}, {b}) exceeds common shift ({ell}, {ell_b})")
        for _ in range(ell - a):
            poly = poly.mul_one_minus_norm2()
        for _ in range(ell_b - b):
            poly = poly.mul_one_plus_norm2()
        total = total + poly
    return total


def surface_area(m: int) -> float:
    """Area of the unit sphere ``S^{m-1}``."""
    return 2.0 * math.pi ** (m / 2) / math.gamma(m / 2)


__all__ = [
    "VecPoly",
    "WeightParams",
    "WeightExpansion",
    "WeightDomainError",
    "as_number",
    "gamma",
    "dirac",
    "mul_x",
    "mul_one_plus_norm2",
    "mul_one_minus_norm2",
    "weight_eval",
    "dirac_weight",
    "factor_common_weight",
    "surface_area",
]
