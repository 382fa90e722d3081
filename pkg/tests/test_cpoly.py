import numpy as np
import pytest
from hypothesis import given, strategies as st

from specrig.cpoly import (
    ComplexPoly,
    homogeneous_resultant,
    implicit_roots,
    poly_compose,
    poly_resultant,
    poly_roots,
)

# high-precision roots of t^3 + 2t^2 + t + 1 (mpmath polyroots, 40 digits)
CUBIC_ROOTS = [-1.7548776662466927600, -0.12256116687665361998 + 0.74486176661974423659j,
               -0.12256116687665361998 - 0.74486176661974423659j]


def _sorted(vals):
    return sorted(vals, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


def test_trim_and_degree():
    p = ComplexPoly([1, 2, 0, 1e-14])
    assert p.degree == 1
    assert ComplexPoly([]).is_zero
    assert ComplexPoly([0, 0]).is_zero


def test_json_round_trip():
    p = ComplexPoly([1 + 2j, -3.5, 0.25j])
    q = ComplexPoly.from_json(p.to_json())
    assert np.array_equal(p.coeffs, q.coeffs)
    assert p.to_json() == {"coeffs": [[1.0, 2.0], [-3.5, 0.0], [0.0, 0.25]]}


def test_roots_of_unity_pair():
    cl = poly_roots(ComplexPoly([-1, 0, 1]))
    vals = _sorted([c.value for c in cl])
    assert [c.multiplicity for c in cl] == [1, 1]
    assert np.allclose(vals, [-1, 1], atol=1e-12)


def test_perfect_cube_is_one_cluster():
    cl = poly_roots(ComplexPoly([-8, 12, -6, 1]))
    assert len(cl) == 1
    assert cl[0].multiplicity == 3
    assert abs(cl[0].value - 2) < 1e-6


def test_cubic_against_high_precision_roots():
    cl = poly_roots(ComplexPoly([1, 1, 2, 1]))
    got = _sorted([c.value for c in cl])
    assert np.allclose(got, _sorted(CUBIC_ROOTS), atol=1e-12)


def test_compose_examples():
    z = ComplexPoly.monomial(1)
    assert np.allclose(poly_compose(ComplexPoly([0, 0, 1]), ComplexPoly([1, 1])).coeffs, [1, 2, 1])
    assert np.allclose(poly_compose(ComplexPoly([1, 1]), ComplexPoly([0, 0, 1])).coeffs, [1, 0, 1])
    r = poly_compose(ComplexPoly([-2, 0, 1]), z * z * z)
    assert np.allclose(r.coeffs, [-2, 0, 0, 0, 0, 0, 1])


def test_resultant_examples():
    assert abs(poly_resultant(ComplexPoly([-1, 0, 1]), ComplexPoly([-1, 1]))) < 1e-12
    assert abs(poly_resultant(ComplexPoly([0, 1]), ComplexPoly([-3, 1])) - (-3)) < 1e-12
    assert abs(poly_resultant(ComplexPoly([1, 0, 1]), ComplexPoly([-1, 0, 1])) - 4) < 1e-12


def test_homogeneous_resultant_detects_common_root():
    assert abs(homogeneous_resultant(np.array([-1, 0, 1]), np.array([-1, 1, 0]))) < 1e-12
    assert abs(homogeneous_resultant(np.array([0, 0, 1]), np.array([1, 0, 0]))) > 0.1


def test_implicit_roots_with_log_derivative():
    # (z - 1)(z + 2)(z - 3j) given only through its log-derivative
    r = np.array([1, -2, 3j])

    def logder(z):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.sum(1.0 / (z[:, None] - r[None, :]), axis=1)

    cl = implicit_roots(logder, 3, radius=2.0)
    assert np.allclose(_sorted([c.value for c in cl]), _sorted(list(r)), atol=1e-10)


coef = st.complex_numbers(max_magnitude=1.0, allow_nan=False, allow_infinity=False)


@given(st.lists(coef, min_size=2, max_size=31).filter(lambda c: abs(c[-1]) > 1e-3))
def test_random_roots_count_and_residual(c):
    p = ComplexPoly(c)
    cl = poly_roots(p)
    assert sum(x.multiplicity for x in cl) == p.degree
    # simple roots: backward error relative to the size of the terms at the
    # root (coefficients below 1e-280 of the largest count as zero).  An
    # m-fold cluster centroid instead lies within the cluster scale of a root
    # of the (m-1)-th derivative, so its Newton step there must be tiny.
    P = np.polynomial.Polynomial(p.coeffs)
    for x in cl:
        z = x.value
        if x.multiplicity == 1:
            k = np.arange(P.coef.size)
            scale = float(np.sum(np.abs(P.coef) * np.abs(z) ** k))
            assert abs(P(z)) <= 1e-8 * scale + 1e-280 * np.abs(P.coef).max()
        else:
            q = P.deriv(x.multiplicity - 1)
            assert abs(q(z)) <= 1e-6 * max(1.0, abs(z)) * abs(q.deriv()(z))


@given(st.lists(coef, min_size=1, max_size=5), st.lists(coef, min_size=1, max_size=5),
       st.lists(coef, min_size=1, max_size=5))
def test_compose_associative(a, b, c):
    p, q, r = ComplexPoly(a), ComplexPoly(b), ComplexPoly(c)
    lhs = poly_compose(p, poly_compose(q, r)).coeffs
    rhs = poly_compose(poly_compose(p, q), r).coeffs
    n = max(lhs.size, rhs.size)
    lhs, rhs = np.pad(lhs, (0, n - lhs.size)), np.pad(rhs, (0, n - rhs.size))
    assert np.allclose(lhs, rhs, rtol=1e-10, atol=1e-10 * (1 + np.abs(lhs).max(initial=0)))


@given(st.lists(coef, min_size=2, max_size=4).filter(lambda c: abs(c[-1]) > 0.1),
       st.lists(coef, min_size=2, max_size=4).filter(lambda c: abs(c[-1]) > 0.1),
       st.booleans())
def test_resultant_vanishes_iff_shared_root(a, b, share):
    p, q = ComplexPoly(a), ComplexPoly(b)
    if share:
        r = poly_roots(p)[0].value
        q = q * ComplexPoly([-r, 1])
    res = poly_resultant(p, q) / (np.linalg.norm(p.coeffs) ** q.degree * np.linalg.norm(q.coeffs) ** p.degree)
    shared = any(abs(x.value - y.value) < 1e-6 for x in poly_roots(p) for y in poly_roots(q))
    if share:
        assert shared and abs(res) < 1e-8
    elif abs(res) < 1e-8:
        assert shared


def test_roots_reject_constant():
    with pytest.raises(ValueError):
        poly_roots(ComplexPoly([1]))
