"""Acceptance checks shared by the ``verify`` subcommand and the test suite.

Every check returns a :class:`CheckResult` made of named metrics, each with a
measured value, a pinned tolerance and a comparison.  A check passes when all
its metrics pass.  Tolerances can be overridden for fault-injection runs
through the ``CJW_TOL_OVERRIDE`` environment variable, e.g.
``CJW_TOL_OVERRIDE="plancherel.ratio_deviation=0,algebra_laws.seconds=1"``.
"""

from __future__ import annotations

import math
import os
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .clifford import Multivector, geometric_product_arrays
from .cwt import geometric_scales, cwt_forward, gaussian_bump, reconstruct
from .cwt import GridSignal
from .families import (
    WaveletSpec,
    chebyshev_clifford,
    gegenbauer,
    jacobi_degree_expected,
    jacobi_Z,
    jacobi_Z_rodrigues,
    legendre_clifford,
    moment_integral,
    orthogonality_integral,
)
from .quadrature import RadialQuadrature
from .spectral import AdmissibilityDivergence, admissibility, direct_ft, wavelet_hat, wavelet_hat_at
from .vecpoly import VecPoly

OVERRIDE_ENV = "CJW_TOL_OVERRIDE"

# check.metric -> (comparison, tolerance)
TOLERANCES = {
    "algebra_laws.max_rel_error": ("le", 1e-12),
    "algebra_laws.seconds": ("le", 5.0),
    "closed_forms.mismatches": ("le", 0),
    "route_equivalence.mismatches": ("le", 0),
    "route_equivalence.seconds": ("le", 30.0),
    "degree_law.violations": ("le", 0),
    "vanishing_moments.moment_k1": ("le", 1e-8),
    "vanishing_moments.moment_k2": ("le", 1e-8),
    "vanishing_moments.negative_control": ("gt", 1e-4),
    "vanishing_moments.orthogonality": ("le", 1e-8),
    "spectral_oracle.max_rel_error": ("le", 1e-3),
    "spectral_oracle.slope_deviation": ("le", 0.1),
    "spectral_oracle.seconds": ("le", 120.0),
    "admissibility.self_convergence": ("le", 1e-6),
    "admissibility.finite_positive": ("ge", 1),
    "admissibility.divergence_raised": ("ge", 1),
    "plancherel.ratio_deviation": ("le", 0.1),
    "plancherel.l2_error": ("le", 0.1),
    "plancherel.ratio_improvement": ("gt", 0.0),
    "plancherel.error_improvement": ("gt", 0.0),
    "plancherel.seconds": ("le", 300.0),
    "explicit_sums.low_order_mismatches": ("le", 0),
    "explicit_sums.classical_max_error": ("le", 1e-12),
}


def tolerance_overrides(env=None) -> dict:
    """Parse ``name=value`` pairs from the override variable."""
    text = (os.environ if env is None else env).get(OVERRIDE_ENV, "").strip()
    out = {}
    if not text:
        return out
    for item in text.split(","):
        name, sep, value = item.partition("=")
        name = name.strip()
        if not sep or name not in TOLERANCES:
            raise ValueError(f"bad tolerance override {item!r}; known names: {sorted(TOLERANCES)}")
        out[name] = float(value)
    return out


@dataclass
class Metric:
    value: float
    tolerance: float
    comparison: str

    @property
    def passed(self) -> bool:
        v = self.value
        if not math.isfinite(v):
            return False
        if self.comparison == "le":
            return v <= self.tolerance
        if self.comparison == "ge":
            return v >= self.tolerance
        return v > self.tolerance

    def as_dict(self) -> dict:
        return {"pass": self.passed, "value": self.value, "tolerance": self.tolerance, "comparison": self.comparison}


@dataclass
class CheckResult:
    name: str
    criterion: int
    metrics: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(m.passed for m in self.metrics.values())

    @property
    def headline(self) -> Metric:
        return next(iter(self.metrics.values()))

    def as_dict(self) -> dict:
        head = self.headline
        return {
            "criterion": self.criterion,
            "pass": self.passed,
            "value": head.value,
            "tolerance": head.tolerance,
            "metrics": {k: m.as_dict() for k, m in self.metrics.items()},
            "details": self.details,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        parts = [f"{k}={m.value:.3g} ({m.comparison} {m.tolerance:g})" for k, m in self.metrics.items()]
        return f"[{status}] criterion {self.criterion} {self.name}: " + ", ".join(parts)


class _Recorder:
    def __init__(self, name, criterion, overrides):
        self.result = CheckResult(name, criterion)
        self.overrides = overrides

    def add(self, metric, value):
        key = f"{self.result.name}.{metric}"
        comparison, tol = TOLERANCES[key]
        tol = self.overrides.get(key, tol)
        self.result.metrics[metric] = Metric(float(value), float(tol), comparison)


# 1 ------------------------------------------------------------------------------


def check_algebra_laws(rec: _Recorder, cases: int = 1000, seed: int = 1) -> None:
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for m in (2, 3, 4):
        n = 1 << m
        a, b, c = (rng.normal(size=(cases, n)) for _ in range(3))
        left = geometric_product_arrays(geometric_product_arrays(a, b, m), c, m)
        right = geometric_product_arrays(a, geometric_product_arrays(b, c, m), m)
        scale = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1) * np.linalg.norm(c, axis=1)
        worst = max(worst, float(np.max(np.max(np.abs(left - right), axis=1) / scale)))
        # generators: e_j e_k = -e_k e_j and e_j^2 = -1
        for j in range(m):
            ej = Multivector.blade(m, (j + 1,))
            worst = max(worst, (ej * ej + 1).norm())
            for k in range(j + 1, m):
                ek = Multivector.blade(m, (k + 1,))
                worst = max(worst, (ej * ek + ek * ej).norm())
        # vector square
        xs = rng.normal(size=(cases, m))
        vec = np.zeros((cases, n))
        vec[:, [1 << j for j in range(m)]] = xs
        sq = geometric_product_arrays(vec, vec, m)
        sq[:, 0] += np.sum(xs**2, axis=1)
        worst = max(worst, float(np.max(np.max(np.abs(sq), axis=1) / np.sum(xs**2, axis=1))))
    rec.add("max_rel_error", worst)
    rec.add("seconds", time.perf_counter() - start)


# 2 ------------------------------------------------------------------------------


def check_closed_forms(rec: _Recorder) -> None:
    mismatches = []
    for m in (2, 3, 4, 5):
        for alpha in (Fraction(1), Fraction(2), Fraction(-3, 2), Fraction(7, 3)):
            g1 = VecPoly(m, (0, -2 * alpha))
            g2 = VecPoly(m, (-m, 0, 2 * (alpha - 1) + m)).scale(2 * alpha)
            if gegenbauer(1, m, alpha) != g1:
                mismatches.append(f"G1 m={m} alpha={alpha}")
            if gegenbauer(2, m, alpha) != g2:
                mismatches.append(f"G2 m={m} alpha={alpha}")
            for beta in (Fraction(0), Fraction(-6), Fraction(5, 4)):
                z1 = VecPoly(m, (0, 2 * (alpha - beta), 0, -2 * (alpha + beta)))
                if jacobi_Z(1, m, alpha, beta) != z1:
                    mismatches.append(f"Z1 m={m} alpha={alpha} beta={beta}")
    rec.add("mismatches", len(mismatches))
    rec.result.details["mismatched"] = mismatches


# 3 and 4 ------------------------------------------------------------------------


def random_rationals(count: int, seed: int):
    rng = random.Random(seed)
    return [
        (Fraction(rng.randint(-40, 40), rng.randint(1, 9)), Fraction(rng.randint(-40, 40), rng.randint(1, 9)))
        for _ in range(count)
    ]


def check_route_equivalence(rec: _Recorder, pairs: int = 25, max_ell: int = 6, seed: int = 7) -> None:
    start = time.perf_counter()
    mismatches = []
    for alpha, beta in random_rationals(pairs, seed):
        for m in (2, 3, 4):
            for ell in range(max_ell + 1):
                if jacobi_Z(ell, m, alpha, beta) != jacobi_Z_rodrigues(ell, m, alpha, beta):
                    mismatches.append(f"ell={ell} m={m} alpha={alpha} beta={beta}")
    rec.add("mismatches", len(mismatches))
    rec.add("seconds", time.perf_counter() - start)
    rec.result.details["mismatched"] = mismatches


def check_degree_law(rec: _Recorder, pairs: int = 25, max_ell: int = 6, seed: int = 7) -> None:
    violations, excluded = [], 0
    for alpha, beta in random_rationals(pairs, seed):
        for m in (2, 3, 4):
            for ell in range(max_ell + 1):
                if not jacobi_degree_expected(ell, m, alpha, beta):
                    excluded += 1
                    continue
                if jacobi_Z(ell, m, alpha, beta).degree != 3 * ell:
                    violations.append(f"ell={ell} m={m} alpha={alpha} beta={beta}")
    rec.add("violations", len(violations))
    rec.result.details.update(excluded_degenerate=excluded, violated=violations)


# 5 ------------------------------------------------------------------------------


def check_vanishing_moments(rec: _Recorder) -> None:
    spec = WaveletSpec(3, 2, 2, -14)
    values = {k: moment_integral(k, spec).norm() for k in (1, 2, 3)}
    rec.add("moment_k1", values[1])
    rec.add("moment_k2", values[2])
    rec.add("negative_control", values[3])
    # orthogonality against x^k for k < t = 1
    rec.add("orthogonality", orthogonality_integral(0, 1, 2, 1, -6).norm())
    rec.result.details["spec"] = {"ell": 3, "m": 2, "alpha": 2, "beta": -14}


# 6 ------------------------------------------------------------------------------

# (ell, alpha, beta), grid points per axis, half-width of the square domain
SPECTRAL_CASES = (
    ((1, 0, -6), 1024, 6.0),
    ((1, 1, -8), 256, 16.0),
    ((2, 2, -9), 256, 16.0),
)


def spectral_errors(ell, alpha, beta, n, half_width, rhos, direction=0.3):
    spec = WaveletSpec(ell, 2, alpha, beta)
    spacing = 2 * half_width / n
    axis = -half_width + spacing * (np.arange(n) + 0.5)
    grid = GridSignal.from_function(spec.eval_grid, 2, (n, n), spacing, origin=(axis[0], axis[0]))
    errors = []
    for rho in rhos:
        u = rho * np.array([math.cos(direction), math.sin(direction)])
        re, im = direct_ft(grid, u, boundary_tol=1e-5)
        fre, fim = wavelet_hat_at(spec, u)
        diff = math.hypot(np.linalg.norm(re - fre), np.linalg.norm(im - fim))
        errors.append(diff / math.hypot(np.linalg.norm(fre), np.linalg.norm(fim)))
    return errors


def low_frequency_slope(spec: WaveletSpec, lo=1e-3, hi=1e-2, count=6) -> float:
    rhos = np.geomspace(lo, hi, count)
    mags = [wavelet_hat(spec, r).magnitude for r in rhos]
    return float(np.polyfit(np.log(rhos), np.log(mags), 1)[0])


def check_spectral_oracle(rec: _Recorder) -> None:
    start = time.perf_counter()
    rhos = np.linspace(0.5, 8.0, 10)
    worst, slope_dev = 0.0, 0.0
    per_spec = {}
    for (ell, alpha, beta), n, half in SPECTRAL_CASES:
        errs = spectral_errors(ell, alpha, beta, n, half, rhos)
        slope = low_frequency_slope(WaveletSpec(ell, 2, alpha, beta))
        worst = max(worst, max(errs))
        slope_dev = max(slope_dev, abs(slope - ell))
        per_spec[f"ell={ell},alpha={alpha},beta={beta}"] = {"max_rel_error": max(errs), "slope": slope}
    rec.add("max_rel_error", worst)
    rec.add("slope_deviation", slope_dev)
    rec.add("seconds", time.perf_counter() - start)
    rec.result.details["specs"] = per_spec


# 7 ------------------------------------------------------------------------------

ADMISSIBLE_CASES = ((1, 0, -6), (1, 1, -8), (2, 2, -9))


def check_admissibility(rec: _Recorder) -> None:
    quad = RadialQuadrature()
    worst, finite = 0.0, 1
    values = {}
    for ell, alpha, beta in ADMISSIBLE_CASES:
        spec = WaveletSpec(ell, 2, alpha, beta)
        a = admissibility(spec, quad)
        b = admissibility(spec, quad.refined())
        finite = finite and math.isfinite(a) and a > 0
        worst = max(worst, abs(a - b) / abs(b))
        values[f"ell={ell},alpha={alpha},beta={beta}"] = a
    try:
        admissibility(WaveletSpec(0, 2, 0, -4), quad)
        raised = 0
    except AdmissibilityDivergence:
        raised = 1
    rec.add("self_convergence", worst)
    rec.add("finite_positive", int(finite))
    rec.add("divergence_raised", raised)
    rec.result.details["admissibility"] = values


# 8 ------------------------------------------------------------------------------

PLANCHEREL_SPEC = (1, 2, 0, -6)
PLANCHEREL_GRID = dict(extents=(64, 64), spacing=0.0625, width=0.25)
SCALE_RANGES = ((0.25, 4.0), (0.125, 8.0))
SCALE_COUNT = 16


def plancherel_run(scale_range, spec=None, signal=None, adm=None):
    """Parseval ratio and round-trip relative L2 error for one scale range."""
    spec = spec or WaveletSpec(*PLANCHEREL_SPEC)
    signal = signal or gaussian_bump(**PLANCHEREL_GRID)
    adm = adm if adm is not None else admissibility(spec)
    scales, step = geometric_scales(*scale_range, SCALE_COUNT)
    field_ = cwt_forward(signal, spec, scales, step)
    ratio = field_.inner(field_) / (adm * signal.inner(signal))
    error = (reconstruct(field_, spec, adm) - signal).norm() / signal.norm()
    return ratio, error


def check_plancherel(rec: _Recorder) -> None:
    start = time.perf_counter()
    spec = WaveletSpec(*PLANCHEREL_SPEC)
    signal = gaussian_bump(**PLANCHEREL_GRID)
    adm = admissibility(spec)
    runs = [plancherel_run(r, spec, signal, adm) for r in SCALE_RANGES]
    (ratio, error), (ratio_w, error_w) = runs
    rec.add("ratio_deviation", abs(ratio - 1))
    rec.add("l2_error", error)
    rec.add("ratio_improvement", abs(ratio - 1) - abs(ratio_w - 1))
    rec.add("error_improvement", error - error_w)
    rec.add("seconds", time.perf_counter() - start)
    rec.result.details.update(
        admissibility=adm,
        ranges={f"[{lo:g}, {hi:g}]": {"ratio": float(r), "l2_error": float(e)} for (lo, hi), (r, e) in zip(SCALE_RANGES, runs)},
    )


# 9 ------------------------------------------------------------------------------


def classical_values(kind: str, n_max: int, x: Multivector) -> list:
    """Classical Legendre or Chebyshev recurrence run with a Clifford argument."""
    one = Multivector.scalar(x.m, 1.0)
    vals = [one, x]
    for n in range(1, n_max):
        if kind == "legendre":
            nxt = ((2 * n + 1) / (n + 1)) * (x * vals[n]) - (n / (n + 1)) * vals[n - 1]
        else:
            nxt = 2.0 * (x * vals[n]) - vals[n - 1]
        vals.append(nxt)
    return vals


def check_explicit_sums(rec: _Recorder, n_max: int = 5) -> None:
    low = 0
    for m in (2, 3, 4):
        for build in (legendre_clifford, chebyshev_clifford):
            low += build(0, m) != VecPoly.constant(m, 1)
            low += build(1, m) != VecPoly.monomial(m, 1)
    worst = 0.0
    for kind, build in (("legendre", legendre_clifford), ("chebyshev", chebyshev_clifford)):
        polys = [build(n, 2) for n in range(n_max + 1)]
        for t in np.linspace(-1.5, 1.5, 31):
            x = Multivector.vector((t, 0.0))
            classical = classical_values(kind, n_max, x)
            for n in range(n_max + 1):
                got = polys[n].eval((t, 0.0))
                worst = max(worst, (got - classical[n]).norm() / max(1.0, classical[n].norm()))
    rec.add("low_order_mismatches", low)
    rec.add("classical_max_error", worst)


CHECKS = {
    "algebra_laws": (1, check_algebra_laws),
    "closed_forms": (2, check_closed_forms),
    "route_equivalence": (3, check_route_equivalence),
    "degree_law": (4, check_degree_law),
    "vanishing_moments": (5, check_vanishing_moments),
    "spectral_oracle": (6, check_spectral_oracle),
    "admissibility": (7, check_admissibility),
    "plancherel": (8, check_plancherel),
    "explicit_sums": (9, check_explicit_sums),
}


def run_check(name: str, overrides=None) -> CheckResult:
    if name not in CHECKS:
        raise KeyError(f"unknown check {name!r}; expected one of {list(CHECKS)}")
    criterion, fn = CHECKS[name]
    rec = _Recorder(name, criterion, tolerance_overrides() if overrides is None else overrides)
    fn(rec)
    return rec.result


def run_checks(names=None, overrides=None, progress=None) -> dict:
    """Run the named checks (all by default) in criterion order."""
    names = list(CHECKS) if not names else list(names)
    overrides = tolerance_overrides() if overrides is None else overrides
    results = {}
    for name in names:
        results[name] = run_check(name, overrides)
        if progress is not None:
            progress(results[name])
    return results
