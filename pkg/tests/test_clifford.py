import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clifford_jacobi.clifford import (
    DimensionError,
    Multivector,
    blade_product,
    conjugate,
    conjugation_signs,
    embed,
    geometric_product_arrays,
    mv_mul,
)


def test_blade_product_examples():
    assert blade_product((1,), (1,), 2) == (-1, ())
    assert blade_product((1,), (2,), 2) == (1, (1, 2))
    assert blade_product((2,), (1,), 2) == (-1, (1, 2))


def test_blade_product_hand_table_m3():
    # e12 e23 = e1 e2 e2 e3 = -e13 ; e123 e123 = +1 ; e13 e2 = -e123
    assert blade_product((1, 2), (2, 3), 3) == (-1, (1, 3))
    assert blade_product((1, 2, 3), (1, 2, 3), 3) == (1, ())
    assert blade_product((1, 3), (2,), 3) == (-1, (1, 2, 3))


def test_blade_product_rejects_bad_index():
    with pytest.raises(DimensionError):
        blade_product((3,), (1,), 2)
    with pytest.raises(ValueError):
        blade_product((2, 1), (1,), 2)


def test_mv_mul_examples():
    one_plus = Multivector.scalar(2, 1.0) + Multivector.blade(2, (1,))
    one_minus = Multivector.scalar(2, 1.0) - Multivector.blade(2, (1,))
    assert mv_mul(one_plus, one_minus) == Multivector.scalar(2, 2.0)

    x = embed((3.0, 4.0))
    assert mv_mul(x, x) == Multivector.scalar(2, -25.0)

    wedge = mv_mul(embed((1.0, 0.0)), embed((0.0, 1.0)))
    assert wedge == Multivector.blade(2, (1, 2))


def test_mv_mul_dimension_mismatch():
    with pytest.raises(ValueError):
        Multivector.scalar(2) * Multivector.scalar(3)


def test_conjugate_examples():
    assert conjugate(Multivector.blade(3, (1,))) == Multivector.blade(3, (1,), -1.0)
    assert conjugate(Multivector.scalar(3, 5.0)) == Multivector.scalar(3, 5.0)
    assert conjugate(Multivector.blade(2, (1, 2))) == Multivector.blade(2, (1, 2), -1.0)


def test_conjugation_signs_by_grade():
    # grades 0..3 pick up +, -, -, +
    np.testing.assert_array_equal(conjugation_signs(3), [1, -1, -1, -1, -1, -1, -1, 1])


def test_norm_is_scalar_part_of_conjugate_product():
    rng = np.random.default_rng(3)
    a = Multivector(4, rng.normal(size=16))
    np.testing.assert_allclose((a.conjugate() * a).scalar_part(), a.norm() ** 2, rtol=1e-13)


def test_generators_anticommute_and_square_to_minus_one():
    for m in range(2, 9):
        for j in range(1, m + 1):
            ej = Multivector.blade(m, (j,))
            assert ej * ej == Multivector.scalar(m, -1.0)
            for k in range(j + 1, m + 1):
                ek = Multivector.blade(m, (k,))
                assert ej * ek == -(ek * ej)


def test_indexing_by_blade():
    a = Multivector(3, np.arange(8.0))
    assert a[(1, 3)] == 5.0
    assert a[2] == 2.0


def test_multivector_is_immutable():
    a = Multivector.scalar(2, 1.0)
    with pytest.raises(AttributeError):
        a.m = 3
    with pytest.raises(ValueError):
        a.coeffs[0] = 2.0


dims = st.sampled_from([2, 3, 4])
finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)


def _mv(m, data):
    return Multivector(m, np.array(data.draw(st.lists(finite, min_size=1 << m, max_size=1 << m))))


@settings(max_examples=150, deadline=None)
@given(m=dims, data=st.data())
def test_associativity(m, data):
    a, b, c = (_mv(m, data) for _ in range(3))
    scale = max(1.0, a.norm() * b.norm() * c.norm())
    np.testing.assert_allclose(((a * b) * c).coeffs, (a * (b * c)).coeffs, atol=1e-12 * scale)


@settings(max_examples=150, deadline=None)
@given(m=dims, data=st.data())
def test_conjugation_reverses_products(m, data):
    a, b = _mv(m, data), _mv(m, data)
    scale = max(1.0, a.norm() * b.norm())
    np.testing.assert_allclose((a * b).conjugate().coeffs, (b.conjugate() * a.conjugate()).coeffs, atol=1e-12 * scale)


@settings(max_examples=150, deadline=None)
@given(m=dims, data=st.data())
def test_vector_square(m, data):
    x = np.array(data.draw(st.lists(finite, min_size=m, max_size=m)))
    sq = embed(x) * embed(x)
    np.testing.assert_allclose(sq.coeffs, Multivector.scalar(m, -float(x @ x)).coeffs, atol=1e-12 * max(1.0, x @ x))


def test_array_product_matches_multivector_product():
    rng = np.random.default_rng(11)
    a = rng.normal(size=(5, 8))
    b = rng.normal(size=(5, 8))
    out = geometric_product_arrays(a, b, 3)
    for row in range(5):
        expected = Multivector(3, a[row]) * Multivector(3, b[row])
        np.testing.assert_allclose(out[row], expected.coeffs, atol=1e-14)


def test_thousand_random_triples_per_dimension():
    rng = np.random.default_rng(0)
    for m in (2, 3, 4):
        a, b, c = (rng.normal(size=(1000, 1 << m)) for _ in range(3))
        left = geometric_product_arrays(geometric_product_arrays(a, b, m), c, m)
        right = geometric_product_arrays(a, geometric_product_arrays(b, c, m), m)
        np.testing.assert_allclose(left, right, atol=1e-12 * np.abs(left).max())
