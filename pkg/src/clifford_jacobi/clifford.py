"""Real Clifford algebra R_m with negative-definite generators.

Blades are stored as bitmasks over the generators: bit ``j - 1`` set means
``e_j`` is a factor.  A multivector is a dense array of ``2**m`` blade
coefficients indexed by that bitmask.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_DIM = 8


class DimensionError(ValueError):
    """Operands live in different algebras, or an index is out of range."""


def _check_dim(m: int) -> None:
    if not 1 <= m <= MAX_DIM:
        raise DimensionError(f"dimension m={m} outside 1..{MAX_DIM}")


def blade_mask(indices: Iterable[int], m: int) -> int:
    """Bitmask of the blade ``e_{i1} e_{i2} ...`` with 1-based strictly increasing indices."""
    indices = tuple(indices)
    if any(b <= a for a, b in zip(indices, indices[1:])):
        raise ValueError(f"blade indices must be strictly increasing: {indices}")
    mask = 0
    for j in indices:
        if not 1 <= j <= m:
            raise DimensionError(f"generator e_{j} not in R_{m}")
        mask |= 1 << (j - 1)
    return mask


def blade_indices(mask: int) -> tuple[int, ...]:
    return tuple(j + 1 for j in range(mask.bit_length()) if mask >> j & 1)


def grade(mask: int) -> int:
    return bin(mask).count("1")


def _reorder_sign(a: int, b: int) -> int:
    # parity of the transpositions needed to merge the ordered factors of a and b
    swaps = 0
    a >>= 1
    while a:
        swaps += grade(a & b)
        a >>= 1
    return -1 if swaps & 1 else 1


def mask_product(a: int, b: int) -> tuple[int, int]:
    """Sign and blade of ``e_A e_B`` for bitmasks; uses ``e_j**2 = -1``."""
    sign = _reorder_sign(a, b)
    if grade(a & b) & 1:
        sign = -sign
    return sign, a ^ b


def blade_product(a: Sequence[int], b: Sequence[int], m: int) -> tuple[int, tuple[int, ...]]:
    """Product of two blades given as index tuples.

    >>> blade_product((2,), (1,), 2)
    (-1, (1, 2))
    """
    _check_dim(m)
    sign, mask = mask_product(blade_mask(a, m), blade_mask(b, m))
    return sign, blade_indices(mask)


@lru_cache(maxsize=None)
def product_table(m: int) -> tuple[np.ndarray, np.ndarray]:
    """``(sign, result)`` arrays of shape ``(2**m, 2**m)`` for all blade pairs."""
    _check_dim(m)
    n = 1 << m
    sign = np.empty((n, n), dtype=np.int8)
    result = np.empty((n, n), dtype=np.intp)
    for a in range(n):
        for b in range(n):
            sign[a, b], result[a, b] = mask_product(a, b)
    sign.setflags(write=False)
    result.setflags(write=False)
    return sign, result


@lru_cache(maxsize=None)
def conjugation_signs(m: int) -> np.ndarray:
    """Sign picked up by each blade under the conjugation anti-involution.

    A grade-k blade reverses (``(-1)**(k(k-1)/2)``) and each generator flips
    (``(-1)**k``).
    """
    _check_dim(m)
    k = np.array([grade(mask) for mask in range(1 << m)])
    signs = np.where(((k * (k - 1) // 2) + k) % 2 == 0, 1, -1).astype(float)
    signs.setflags(write=False)
    return signs


def geometric_product_arrays(a: np.ndarray, b: np.ndarray, m: int) -> np.ndarray:
    """Geometric product of broadcastable arrays of shape ``(..., 2**m)``.

    Blade components that are identically zero in either operand are skipped,
    which keeps products of scalar-plus-vector fields cheap.
    """
    sign, result = product_table(m)
    a = np.asarray(a)
    b = np.asarray(b)
    shape = np.broadcast_shapes(a.shape, b.shape)
    dtype = np.result_type(a, b, float)
    out = np.zeros(shape, dtype=dtype)
    active_a = [i for i in range(1 << m) if np.any(a[..., i])]
    active_b = [j for j in range(1 << m) if np.any(b[..., j])]
    for i in active_a:
        for j in active_b:
            out[..., result[i, j]] += sign[i, j] * (a[..., i] * b[..., j])
    return out


class Multivector:
    """Immutable element of R_m.

    Parameters
    ----------
    m : int
        Number of generators, ``1 <= m <= 8``.
    coeffs : array_like, optional
        ``2**m`` blade coefficients indexed by bitmask.  Zero if omitted.
    """

    __slots__ = ("m", "coeffs")

    def __init__(self, m: int, coeffs=None):
        _check_dim(m)
        if coeffs is None:
            arr = np.zeros(1 << m)
        else:
            arr = np.array(coeffs, dtype=float)
            if arr.shape != (1 << m,):
                raise DimensionError(f"expected {1 << m} coefficients for m={m}, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("Multivector is immutable")

    @classmethod
    def scalar(cls, m: int, value: float = 1.0) -> Multivector:
        coeffs = np.zeros(1 << m)
        coeffs[0] = value
        return cls(m, coeffs)

    @classmethod
    def blade(cls, m: int, indices: Sequence[int], value: float = 1.0) -> Multivector:
        coeffs = np.zeros(1 << m)
        coeffs[blade_mask(indices, m)] = value
        return cls(m, coeffs)

    @classmethod
    def vector(cls, components: Sequence[float]) -> Multivector:
        """Embed ``x`` as ``sum_j e_j x_j``."""
        comps = np.asarray(components, dtype=float)
        m = comps.shape[0]
        coeffs = np.zeros(1 << m)
        coeffs[[1 << j for j in range(m)]] = comps
        return cls(m, coeffs)

    def _coerce(self, other) -> Multivector:
        if isinstance(other, Multivector):
            if other.m != self.m:
                raise DimensionError(f"R_{self.m} and R_{other.m} operands")
            return other
        if np.isscalar(other):
            return Multivector.scalar(self.m, float(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.m, self.coeffs + other.coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Multivector(self.m, -self.coeffs)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.m, self.coeffs - other.coeffs)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if np.isscalar(other):
            return Multivector(self.m, self.coeffs * float(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Multivector(self.m, geometric_product_arrays(self.coeffs, other.coeffs, self.m))

    def __rmul__(self, other):
        if np.isscalar(other):
            return Multivector(self.m, self.coeffs * float(other))
        return NotImplemented

    def __truediv__(self, other):
        if not np.isscalar(other):
            return NotImplemented
        return Multivector(self.m, self.coeffs / float(other))

    def __eq__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        return self.m == other.m and np.array_equal(self.coeffs, other.coeffs)

    def __hash__(self):
        return hash((self.m, self.coeffs.tobytes()))

    def __getitem__(self, indices) -> float:
        if isinstance(indices, int):
            indices = (indices,)
        return float(self.coeffs[blade_mask(indices, self.m)])

    def conjugate(self) -> Multivector:
        return Multivector(self.m, self.coeffs * conjugation_signs(self.m))

    def scalar_part(self) -> float:
        return float(self.coeffs[0])

    def grade_part(self, k: int) -> Multivector:
        keep = np.array([grade(mask) == k for mask in range(1 << self.m)])
        return Multivector(self.m, np.where(keep, self.coeffs, 0.0))

    def norm(self) -> float:
        """Euclidean norm of the blade coefficients; equals sqrt(Sc(conj(a) a))."""
        return float(np.linalg.norm(self.coeffs))

    def allclose(self, other, rtol=1e-12, atol=1e-12) -> bool:
        other = self._coerce(other)
        return bool(np.allclose(self.coeffs, other.coeffs, rtol=rtol, atol=atol))

    def __repr__(self):
        terms = []
        for mask, c in enumerate(self.coeffs):
            if c:
                name = "e" + "".join(map(str, blade_indices(mask))) if mask else "1"
                terms.append(f"{c:g}*{name}")
        return f"Multivector(m={self.m}, {' + '.join(terms) or '0'})"


def mv_mul(a: Multivector, b: Multivector) -> Multivector:
    return a * b


def conjugate(a: Multivector) -> Multivector:
    return a.conjugate()


def embed(x: Sequence[float]) -> Multivector:
    return Multivector.vector(x)
