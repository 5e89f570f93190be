from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from feec_weights.barypoly import (BaryPoint, BaryPolynomial, MultiIndex, affine_pullback, all_exponents,
                                   evaluate, integrate_monomial_over_triangle, multi_indices)
from feec_weights.geometry import UNIT_TRIANGLE, AffineMap, Triangle, tau_map

L0, L1, L2 = (BaryPolynomial.coordinate(i) for i in range(3))

small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def points(draw):
    a, b = draw(small), draw(small)
    return BaryPoint.of(a, b, 1 - a - b)


@st.composite
def polys(draw, max_degree=3):
    exps = all_exponents(max_degree)
    chosen = draw(st.lists(st.sampled_from(exps), max_size=6))
    return BaryPolynomial({a: draw(small) for a in chosen}, max_degree)


@st.composite
def triangles(draw):
    while True:
        v = [(draw(small), draw(small)) for _ in range(3)]
        try:
            return Triangle(tuple(v))
        except ValueError:
            continue


@st.composite
def affine_maps(draw):
    return AffineMap(((draw(small), draw(small)), (draw(small), draw(small))), (draw(small), draw(small)))


def test_multi_index_checks():
    assert MultiIndex((1, 2, 0)).degree == 3
    with pytest.raises(ValueError):
        MultiIndex((1, -1, 0))
    assert multi_indices(2) == [(0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 0, 1), (1, 1, 0), (2, 0, 0)]


def test_point_must_sum_to_one():
    with pytest.raises(ValueError):
        BaryPoint.of(1, 1, 0)
    assert BaryPoint.of(F(1, 2), F(1, 2), 0).inside()
    assert not BaryPoint.of(F(3, 2), F(-1, 2), 0).inside()


@pytest.mark.parametrize("p, pt, expected", [
    (L0, (1, 0, 0), 1),
    (L0 * L1, (F(1, 3), F(1, 3), F(1, 3)), F(1, 9)),
    (L0 * L0 + L1 * L1 + L2 * L2, (F(1, 2), F(1, 4), F(1, 4)), F(3, 8)),
])
def test_evaluate_examples(p, pt, expected):
    assert evaluate(p, BaryPoint.of(*pt)) == expected


def test_integrate_examples():
    assert integrate_monomial_over_triangle((0, 0, 0), UNIT_TRIANGLE) == F(1, 2)
    T = Triangle(((1, 2), (5, 3), (F(1, 2), 7)))
    assert integrate_monomial_over_triangle((1, 0, 0), T) == T.area / 3
    assert integrate_monomial_over_triangle((1, 1, 0), T) == T.area / 12


def test_pullback_examples():
    xi = BaryPoint.of(F(1, 2), F(1, 4), F(1, 4))
    tau = tau_map(UNIT_TRIANGLE, xi)
    assert affine_pullback(L0, tau) == L0 * F(1, 2)
    assert affine_pullback(L1, tau) == L1 * F(1, 2) + F(1, 4)
    p = L0 * L1 * 3 + L2 - 2
    assert affine_pullback(p, AffineMap.identity()) == p


def test_arithmetic_examples():
    assert L0 + L1 + L2 == BaryPolynomial.constant(1)
    assert (L0 * 0).is_zero()
    assert (L0 + L1) * (L0 - L1) == L0 * L0 - L1 * L1


@given(st.lists(points(), min_size=1, max_size=20))
def test_partition_of_unity(pts):
    for pt in pts:
        assert evaluate(L0 + L1 + L2, pt) == 1


@given(polys(), points(), st.integers(0, 3))
def test_homogenization_preserves_values(p, pt, extra):
    h = p.homogenize(p.degree + extra)
    assert all(sum(a) == p.degree + extra for a, _ in h.items())
    assert evaluate(h, pt) == evaluate(p, pt)
    assert h == p


@given(polys(), affine_maps(), affine_maps(), points())
def test_pullback_functorial(p, f, g, pt):
    lhs = affine_pullback(p, f.compose(g))
    rhs = affine_pullback(affine_pullback(p, f), g)
    assert lhs == rhs
    assert evaluate(lhs, pt) == evaluate(p, f.apply_bary(g.apply_bary(pt)))


def _dunavant_like(n):
    # collapsed Gauss product rule built independently from numpy's Legendre nodes
    x, w = np.polynomial.legendre.leggauss(n)
    u, v = (x + 1) / 2, (x + 1) / 2
    pts, wts = [], []
    for a, wa in zip(u, w / 2):
        for b, wb in zip(v, w / 2):
            pts.append((a, (1 - a) * b))
            wts.append(wa * wb * (1 - a))
    return np.array(pts), np.array(wts)


def test_integration_against_quadrature_oracle(rng):
    pts, wts = _dunavant_like(8)
    for _ in range(20):
        while True:
            v = [(F(rng.randint(-20, 20), rng.randint(1, 5)), F(rng.randint(-20, 20), rng.randint(1, 5)))
                 for _ in range(3)]
            try:
                T = Triangle(tuple(v))
                break
            except ValueError:
                pass
        for alpha in all_exponents(8):
            # on T itself: lambda = (1 - s - t, s, t) in the collapsed chart
            lam = np.column_stack([1 - pts[:, 0] - pts[:, 1], pts[:, 0], pts[:, 1]])
            vals = np.prod(lam ** np.array(alpha), axis=1)
            oracle = 2 * float(T.area) * np.dot(wts, vals)
            exact = float(integrate_monomial_over_triangle(alpha, T))
            assert exact == pytest.approx(oracle, rel=1e-12, abs=1e-300)


def test_integration_rejects_degenerate():
    with pytest.raises(ValueError):
        Triangle(((0, 0), (1, 1), (2, 2)))


def test_partial_derivative():
    p = L0 * L0 * L1 * 3
    assert p.partial(0) == L0 * L1 * 6
    assert p.partial(2).is_zero()
