from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_jacobi.clifford import Multivector
from clifford_jacobi.vecpoly import (
    VecPoly,
    WeightDomainError,
    WeightExpansion,
    WeightParams,
    dirac,
    dirac_weight,
    factor_common_weight,
    gamma,
    mul_one_minus_norm2,
    mul_one_plus_norm2,
    mul_x,
    weight_eval,
)

from conftest import annulus_points, numeric_dirac


def test_gamma_examples():
    for m in range(2, 9):
        assert gamma(2, m) == -2
        assert gamma(1, m) == -m
        assert gamma(0, m) == 0
    assert gamma(3, 3) == -5


def test_dirac_examples():
    assert dirac(VecPoly.monomial(4, 2)) == VecPoly(4, (0, -2))
    assert dirac(VecPoly.constant(3, 1)).is_zero
    assert dirac(VecPoly.monomial(3, 3)) == VecPoly(3, (0, 0, -5))


def test_dirac_drops_degree_by_one():
    p = VecPoly(3, (1, 2, 3, 4, 5))
    assert dirac(p).degree == p.degree - 1


def test_multiplier_examples():
    assert mul_x(VecPoly.constant(2, 1)) == VecPoly.monomial(2, 1)
    assert mul_one_plus_norm2(VecPoly.monomial(2, 1)) == VecPoly(2, (0, 1, 0, -1))
    assert mul_one_minus_norm2(VecPoly.constant(2, 1)) == VecPoly(2, (1, 0, 1))


def test_trailing_zeros_trimmed_and_exact():
    p = VecPoly(2, (1, "1/3", 0, 0))
    assert p.coeffs == (Fraction(1), Fraction(1, 3))
    assert p.is_exact
    assert not VecPoly(2, (0.5,)).is_exact


def test_eval_examples():
    assert VecPoly.monomial(2, 2).eval((3.0, 4.0)) == Multivector.scalar(2, -25.0)
    # Z_1 with alpha=1, beta=0 at e_1: 2 e1 - 2 e1^3 = 4 e1
    z1 = VecPoly(2, (0, 2, 0, -2))
    assert z1.eval((1.0, 0.0)).allclose(Multivector.blade(2, (1,), 4.0))
    assert VecPoly.constant(3, 1).eval((0.3, -2.0, 5.0)) == Multivector.scalar(3, 1.0)


def test_eval_matches_repeated_clifford_products(rng):
    p = VecPoly(3, (0.5, -1.0, 2.0, 0.25, -0.75))
    for x in rng.normal(size=(5, 3)):
        xv = Multivector.vector(x)
        power = Multivector.scalar(3, 1.0)
        expected = Multivector(3)
        for c in p.coeffs:
            expected = expected + power * float(c)
            power = power * xv
        assert p.eval(x).allclose(expected, atol=1e-12)


def test_eval_dimension_mismatch():
    with pytest.raises(ValueError):
        VecPoly.monomial(3, 1).eval((1.0, 2.0))
    with pytest.raises(ValueError):
        VecPoly.monomial(2, 1) + VecPoly.monomial(3, 1)


def test_weight_eval_examples():
    assert weight_eval(WeightParams(0, 0), 3.7) == 1.0
    assert weight_eval(WeightParams(1, 1), 0.0) == 1.0
    np.testing.assert_allclose(weight_eval(WeightParams(2, -3), 2.0), 9 / 125, rtol=1e-15)


def test_weight_eval_absolute_value_convention():
    # odd integer alpha: |1 - r^2| differs from (1 - r^2) by a sign outside the ball
    np.testing.assert_allclose(weight_eval(WeightParams(1, 0), 2.0), 3.0)
    np.testing.assert_allclose(weight_eval(WeightParams("1/2", 0), 2.0), np.sqrt(3.0))


def test_weight_eval_domain_error_on_unit_sphere():
    with pytest.raises(WeightDomainError):
        weight_eval(WeightParams(-0.5, 1), 1.0)
    assert weight_eval(WeightParams(0.5, 1), 1.0) == 0.0


def test_dirac_weight_examples():
    base = WeightParams(Fraction(5, 2), Fraction(-3))
    d = dirac_weight(WeightExpansion.weight(2), base)
    assert d.terms == {(1, 0): VecPoly(2, (0, -5)), (0, 1): VecPoly(2, (0, -6))}
    assert dirac_weight(WeightExpansion.weight(2), WeightParams(0, 0)).is_zero


def test_factor_common_weight_examples():
    one = WeightExpansion.weight(3)
    # (1 - |x|^2)(1 + |x|^2) = 1 - |x|^4 = 1 - x^4
    assert factor_common_weight(one, 1) == VecPoly(3, (1, 0, 0, 0, -1))
    assert factor_common_weight(WeightExpansion(3), 2).is_zero
    alpha, beta = Fraction(3), Fraction(-2)
    d = dirac_weight(WeightExpansion.weight(3), WeightParams(alpha, beta))
    z1 = VecPoly(3, (0, 2 * (alpha - beta), 0, -2 * (alpha + beta)))
    assert factor_common_weight(d, 1).scale(-1) == z1


def test_factor_common_weight_rejects_large_shift():
    e = WeightExpansion(2, {(2, 0): VecPoly.constant(2, 1)})
    with pytest.raises(ValueError):
        factor_common_weight(e, 1)


def test_weight_expansion_rejects_negative_shift():
    with pytest.raises(ValueError):
        WeightExpansion(2, {(-1, 0): VecPoly.constant(2, 1)})


def test_serialization_round_trip():
    p = VecPoly(4, ("1/3", -2, 0, "7/5"))
    data = p.to_dict()
    assert data == {"m": 4, "coeffs": ["1/3", "-2", "0", "7/5"]}
    assert VecPoly.from_json(p.to_json()) == p
    q = VecPoly(2, (0.1, 2.5))
    assert VecPoly.from_json(q.to_json()) == q


@pytest.mark.parametrize("m", [2, 3])
def test_leibniz_against_finite_differences(m, rng):
    for _ in range(4):
        p = VecPoly(m, tuple(rng.integers(-3, 4, size=4)))
        base = WeightParams(float(rng.uniform(0.5, 3)), float(rng.uniform(-4, 1)))
        e = WeightExpansion(m, {(0, 0): p})
        pts = annulus_points(rng, 20, m, 0.1, 0.9)
        exact = dirac_weight(e, base).evaluate(base, pts)
        numeric = numeric_dirac(lambda x: e.evaluate(base, x), pts, m)
        np.testing.assert_allclose(numeric, exact, rtol=1e-6, atol=1e-6 * np.abs(exact).max())


@pytest.mark.parametrize("m", [2, 3])
def test_dirac_of_mul_x_against_finite_differences(m, rng):
    p = mul_x(VecPoly(m, (1, -2, 3)))
    pts = annulus_points(rng, 20, m, 0.1, 1.5)
    numeric = numeric_dirac(p.eval_grid, pts, m)
    np.testing.assert_allclose(numeric, dirac(p).eval_grid(pts), rtol=1e-6, atol=1e-7)


def test_factoring_reproduces_expansion_pointwise(rng):
    base = WeightParams(Fraction(7, 2), Fraction(-5, 3))
    e = WeightExpansion.weight(3)
    for _ in range(3):
        e = dirac_weight(e, base)
    ell = 3
    factored = factor_common_weight(e, ell, base)
    pts = annulus_points(rng, 25, 3, 0.05, 0.95)
    direct = e.evaluate(base, pts)
    w = weight_eval(base.shifted(-ell, -ell), np.linalg.norm(pts, axis=-1))
    np.testing.assert_allclose(factored.eval_grid(pts) * w[:, None], direct, rtol=1e-12, atol=1e-12 * np.abs(direct).max())


small_ints = st.integers(-6, 6)


@settings(max_examples=100, deadline=None)
@given(a=st.lists(small_ints, max_size=6), b=st.lists(small_ints, max_size=6), m=st.integers(2, 6))
def test_dirac_is_linear(a, b, m):
    p, q = VecPoly(m, a), VecPoly(m, b)
    assert dirac(p + q) == dirac(p) + dirac(q)
    assert dirac(p.scale(Fraction(3, 7))) == dirac(p).scale(Fraction(3, 7))


@settings(max_examples=100, deadline=None)
@given(a=st.lists(small_ints, max_size=6), m=st.integers(2, 6))
def test_norm_multipliers_commute_and_compose(a, m):
    p = VecPoly(m, a)
    both = mul_one_plus_norm2(mul_one_minus_norm2(p))
    assert both == mul_one_minus_norm2(mul_one_plus_norm2(p))
    # (1 - |x|^2)(1 + |x|^2) = 1 - |x|^4 = 1 - x^4
    assert both == p - p * VecPoly.monomial(m, 4)


@settings(max_examples=100, deadline=None)
@given(a=st.lists(small_ints, min_size=1, max_size=6), m=st.integers(2, 5), r=st.floats(0, 2))
def test_values_stay_in_scalar_plus_vector_span(a, m, r):
    x = np.zeros(m)
    x[0] = r
    value = VecPoly(m, a).eval(x)
    others = [i for i in range(1 << m) if i not in (0, 1)]
    assert np.all(value.coeffs[others] == 0)
