import sys

import numpy as np
import pytest

from clifford_jacobi.clifford import geometric_product_arrays


def numeric_dirac(f, x, m, h=1e-5):
    """Central-difference ``sum_j e_j d_j f`` at points ``x`` of shape ``(n, m)``."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1] + (1 << m,))
    for j in range(m):
        step = np.zeros(m)
        step[j] = h
        deriv = (f(x + step) - f(x - step)) / (2 * h)
        ej = np.zeros(1 << m)
        ej[1 << j] = 1.0
        out += geometric_product_arrays(ej, deriv, m)
    return out


def annulus_points(rng, count, m, lo, hi):
    """Random points with radius uniform in ``[lo, hi]``."""
    v = rng.normal(size=(count, m))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    return v * rng.uniform(lo, hi, size=(count, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    lines = getattr(sys.modules.get("test_acceptance"), "SUMMARY_LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(lines):
        terminalreporter.write_line(lines[criterion])
