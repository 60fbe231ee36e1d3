import numpy as np
from hypothesis import given, strategies as st

from amelab.polynomial import SparsePoly, monomials

seeds = st.integers(0, 2 ** 32 - 1)


def _random_poly(rng, nvars=2, degree=3, nterms=4):
    basis = monomials(nvars, degree)
    pick = rng.choice(len(basis), size=min(nterms, len(basis)), replace=False)
    return SparsePoly(nvars, {basis[i]: complex(*rng.normal(size=2)) for i in pick})


def test_monomials():
    assert monomials(2, 2) == [(2, 0), (1, 1), (0, 2)]
    assert len(monomials(3, 4)) == 15


def test_basic_arithmetic():
    x, y = SparsePoly.variable(0, 2), SparsePoly.variable(1, 2)
    p = x ** 5 * y - x * y ** 5
    assert p.degree == 6 and p.is_homogeneous()
    assert p(2, 1) == 30
    assert (p - p).is_zero()
    assert p.to_string() == "x^5*y - x*y^5"
    assert (x + 1).degrees() == {0, 1}


@given(seeds)
def test_ring_laws_by_evaluation(seed):
    rng = np.random.default_rng(seed)
    p, q = _random_poly(rng), _random_poly(rng)
    pt = rng.normal(size=2) + 1j * rng.normal(size=2)
    assert np.isclose((p * q)(pt), p(pt) * q(pt))
    assert np.isclose((p + q)(pt), p(pt) + q(pt))


@given(seeds)
def test_substitute_linear(seed):
    rng = np.random.default_rng(seed)
    p = _random_poly(rng, degree=4)
    m = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    y = rng.normal(size=2)
    assert np.isclose(p.substitute_linear(m)(y), p(m @ y))


def test_evaluate_many_points():
    p = SparsePoly(2, {(1, 1): 2.0})
    assert np.allclose(p(np.array([[1, 2], [3, 4]])), [4, 24])
