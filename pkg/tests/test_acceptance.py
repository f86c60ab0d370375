"""Acceptance criteria 1 to 9 at their stated tolerances.

Each criterion runs once through :mod:`clifford_jacobi.verify` with no
environment overrides.  The one-line summaries are collected and printed in a
block at the end of the session (see ``conftest.py``), so ``pytest -v`` shows
them without ``-s``.
"""

import numpy as np
import pytest
from scipy import integrate

from clifford_jacobi import verify
from clifford_jacobi.families import WaveletSpec
from clifford_jacobi.spectral import admissibility, profile

SUMMARY_LINES = {}
_RESULTS = {}


def _result(name):
    if name not in _RESULTS:
        _RESULTS[name] = verify.run_check(name, overrides={})
    return _RESULTS[name]

STATED = {
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


def test_thresholds_are_the_stated_ones():
    assert verify.TOLERANCES == STATED
    assert [c for c, _ in verify.CHECKS.values()] == list(range(1, 10))


@pytest.mark.parametrize("name", list(verify.CHECKS), ids=[f"criterion{c}-{n}" for n, (c, _) in verify.CHECKS.items()])
def test_criterion(name):
    result = _result(name)
    line = result.summary()
    SUMMARY_LINES[result.criterion] = line
    print(line)
    assert result.passed, line


def test_plancherel_trend_holds_on_its_own():
    # Criterion 8 bundles absolute bounds with a trend.  The absolute bounds
    # are out of reach for this wavelet and signal (see the decision ledger);
    # the trend part is asserted separately so a regression in it stays visible.
    result = _result("plancherel")
    for metric in ("ratio_improvement", "error_improvement", "seconds"):
        assert result.metrics[metric].passed, result.summary()


def _captured_fraction(width, a_min, a_max, t, g, adm):
    """Continuum Parseval ratio for an isotropic 2-D Gaussian of the given width.

    With ``G(x) = int_0^x S^2 dt/t`` the scale window keeps the fraction
    ``(G(a_max rho) - G(a_min rho)) / A`` of the energy at frequency ``rho``;
    the Gaussian spectrum weights ``rho`` by ``exp(-width^2 rho^2) rho``.
    """
    rho = np.linspace(1e-4, 8 / width, 4000)
    ln_t = np.log(t)
    upper = np.interp(np.log(np.minimum(a_max * rho, t[-1])), ln_t, g)
    lower = np.interp(np.log(a_min * rho), ln_t, g)
    kept = (upper - lower) / adm
    return 2 * width**2 * integrate.trapezoid(np.exp(-(width * rho) ** 2) * kept * rho, rho)


def test_plancherel_shortfall_is_a_continuum_property():
    spec = WaveletSpec(*verify.PLANCHEREL_SPEC)
    t = np.geomspace(1e-4, 120.0, 1500)
    s2 = np.array([profile(spec, x) ** 2 for x in t])
    g = s2[0] / 2 + np.concatenate([[0.0], integrate.cumulative_trapezoid(s2, np.log(t))])
    adm = admissibility(spec)
    np.testing.assert_allclose(g[-1], adm, rtol=1e-6)

    # the sampled transform reproduces the continuum value on [0.25, 4]
    discrete = _result("plancherel").details["ranges"]["[0.25, 4]"]["ratio"]
    continuum = _captured_fraction(0.25, 0.25, 4.0, t, g, adm)
    assert abs(discrete - continuum) < 5e-3
    # and no Gaussian width brings the continuum ratio up to 0.9
    best = max(_captured_fraction(w, 0.25, 4.0, t, g, adm) for w in np.geomspace(0.02, 3.0, 60))
    assert best < 0.9
