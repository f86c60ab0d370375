"""One-dimensional radial quadrature for weights with a kink at ``r = 1``.

All integrands handled here have the form ``g(r) * |1 - r**2|**a`` on
``[0, inf)``.  The interval is split at ``r = 1``; the outer half is mapped to
``(0, 1]`` by ``r = 1/u`` when the integrand is monotone in its tail, and cut
into half-periods with Shanks extrapolation when it oscillates (Bessel
kernels).  QUADPACK's algebraic-weight rule absorbs the endpoint powers.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import integrate, special


class QuadratureError(RuntimeError):
    """Adaptive refinement could not reach the requested tolerance."""


def _quad(f, a, b, *, epsabs, epsrel, limit, wvar=None):
    kwargs = dict(epsabs=epsabs, epsrel=epsrel, limit=limit, full_output=1)
    if wvar is not None:
        kwargs.update(weight="alg", wvar=wvar)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info, *msg = integrate.quad(f, a, b, **kwargs)
    if msg and err > max(epsabs, epsrel * abs(value)) * 1e3:
        raise QuadratureError(f"quad on [{a}, {b}] stalled: {msg[0]!s} (error estimate {err:.3g})")
    return value, err


@dataclass(frozen=True)
class RadialQuadrature:
    """Settings for radial integrals.

    Parameters
    ----------
    epsabs, epsrel : float
        Tolerances handed to each QUADPACK call.
    limit : int
        Subinterval budget per call.
    max_chunks : int
        Half-periods summed before giving up on an oscillatory tail.
    nodes_per_unit : int
        Outer (log-frequency) Gauss-Legendre nodes per unit of ``ln(rho)``,
        used by admissibility integrals.
    """

    epsabs: float = 1e-14
    epsrel: float = 1e-12
    limit: int = 400
    max_chunks: int = 400
    nodes_per_unit: int = 8

    def refined(self, factor: int = 2) -> RadialQuadrature:
        return RadialQuadrature(self.epsabs, self.epsrel, self.limit, self.max_chunks, self.nodes_per_unit * factor)

    # polynomial times weight ----------------------------------------------------

    def weighted_poly_integral(self, coeffs, power, alpha, beta, outside_sign=1):
        """``int_0^inf p(r) r**power |1-r^2|**alpha (1+r^2)**beta s(r) dr``.

        ``p`` has ascending coefficients ``coeffs`` in ``r``; ``s(r)`` is 1 on
        the unit ball and ``outside_sign`` beyond it.
        """
        coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), "b")
        if coeffs.size == 0:
            return 0.0
        deg = coeffs.size - 1
        p = np.polynomial.Polynomial(coeffs)

        def inner(r):
            return p(r) * r**power * (1 + r) ** alpha * (1 + r * r) ** beta

        # r = 1/u: r^power p(1/u) (r^2-1)^alpha (1+r^2)^beta dr
        #        = u^(-power-deg-2-2alpha-2beta) q(u) (1-u^2)^alpha (1+u^2)^beta du,  q(u) = u^deg p(1/u)
        q = np.polynomial.Polynomial(coeffs[::-1])
        u_power = -power - deg - 2 - 2 * alpha - 2 * beta
        if u_power <= -1:
            raise QuadratureError(f"integrand decays too slowly at infinity (u exponent {u_power:g})")

        def outer(u):
            return q(u) * (1 + u) ** alpha * (1 + u * u) ** beta

        scale = float(np.max(np.abs(coeffs)))
        eps = dict(epsabs=self.epsabs * scale, epsrel=self.epsrel, limit=self.limit)
        v_in, _ = _quad(inner, 0.0, 1.0, wvar=(0.0, alpha), **eps)
        v_out, _ = _quad(outer, 0.0, 1.0, wvar=(u_power, alpha), **eps)
        return v_in + outside_sign * v_out

    # Hankel-type integrals ------------------------------------------------------

    def hankel(self, a, b, power, nu, rho):
        """``int_0^inf |1-r^2|**a (1+r^2)**b r**power J_nu(r rho) dr`` for ``rho > 0``.

        Absolute convergence needs ``2a + 2b + power - 1/2 < -1``; conditional
        convergence (down to ``< 1/2``) is still summed correctly by the
        extrapolation but with looser error control.
        """
        if rho <= 0:
            raise ValueError("rho must be positive")
        if a <= -1:
            raise QuadratureError(f"|1-r^2|^{a} is not integrable at r = 1")
        tail_power = 2 * a + 2 * b + power - 0.5
        if tail_power >= 0.5:
            raise QuadratureError(f"Hankel integrand grows like r^{tail_power:g}; integral diverges")

        def core(r):
            return (1 + r * r) ** b * r**power * special.jv(nu, r * rho)

        eps = dict(epsabs=self.epsabs, epsrel=self.epsrel, limit=self.limit)
        v_in, _ = _quad(lambda r: core(r) * (1 + r) ** a, 0.0, 1.0, wvar=(0.0, a), **eps)

        # zeros of J_nu spaced by about pi/rho; cut there so chunk sums alternate
        half = math.pi / rho
        phase = nu / 2 - 0.25
        first = (math.ceil(1.0 / half - phase) + phase) * half
        if first <= 1.0:
            first += half
        # endpoint power on [1, 2]; for small rho the rest of the first cut is long and smooth
        near = min(2.0, first)
        v_kink, _ = _quad(lambda r: core(r) * (r + 1) ** a, 1.0, near, wvar=(a, 0.0), **eps)
        lo = near
        while lo < first:
            hi = min(2 * lo, first)
            val, _ = _quad(lambda r: core(r) * (r * r - 1) ** a, lo, hi, **eps)
            v_kink += val
            lo = hi

        def outer(r):
            return core(r) * (r * r - 1) ** a

        partial = [0.0]
        lo = first
        for n in range(self.max_chunks):
            hi = lo + half
            val, _ = _quad(outer, lo, hi, **eps)
            partial.append(partial[-1] + val)
            lo = hi
            if abs(val) <= self.epsabs and abs(partial[-2]) > 0 and n >= 2:
                return v_in + v_kink + partial[-1]
            if n >= 6:
                est, spread = _shanks_estimate(partial)
                if spread <= max(self.epsabs, self.epsrel * abs(est)):
                    return v_in + v_kink + est
        raise QuadratureError(f"oscillatory tail did not converge at rho={rho:g}")

    def panel_nodes(self, lo, hi, density=None):
        """Composite 8-point Gauss-Legendre nodes and weights, ``density`` (default ``nodes_per_unit``) per unit length."""
        density = self.nodes_per_unit if density is None else density
        n_panels = max(1, int(math.ceil((hi - lo) * density / 8)))
        x, w = np.polynomial.legendre.leggauss(8)
        edges = np.linspace(lo, hi, n_panels + 1)
        half = 0.5 * np.diff(edges)
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        return nodes, weights

    def log_integral(self, f, lo, hi):
        """``int f(t) dt`` on ``[lo, hi]``; ``f`` takes an array of nodes."""
        nodes, weights = self.panel_nodes(lo, hi)
        return float(np.dot(weights, f(nodes)))


def _shanks_estimate(partial):
    """Extrapolated limit of partial sums and a spread used as error estimate."""
    seq = partial[-14:] if len(partial) > 14 else partial[1:]
    table = mpmath.shanks([mpmath.mpf(v) for v in seq])
    # epsilon-table estimates sit in odd columns; take the deepest of the last two rows
    rows = [row[len(row) - 1 - (len(row) - 1 + 1) % 2] for row in table[-2:]]
    return float(rows[-1]), float(abs(rows[-1] - rows[0]))
