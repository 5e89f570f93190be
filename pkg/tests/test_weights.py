from fractions import Fraction as F

import numpy as np
import pytest

from feec_weights.barypoly import BaryPoint, BaryPolynomial, evaluate_many
from feec_weights.forms import PolyForm, random_form, space_dim
from feec_weights.geometry import UNIT_TRIANGLE, Cell, Triangle, build_cells, build_complex
from feec_weights.interp import cart_to_bary
from feec_weights.weights import (collapsed_triangle_rule, de_rham_matrix, gauss_segment, stokes_defect,
                                  stokes_holds, vandermonde, weight, weight_numeric)

P = BaryPoint.of
ONE = BaryPolynomial.constant(1)
ZERO = BaryPolynomial()


def test_weight_examples():
    seg = Cell(1, (P(1, 0, 0), P(0, 1, 0)))
    assert weight(PolyForm(1, (ONE, ZERO)), seg) == 1
    whole = build_cells(UNIT_TRIANGLE, 2)[0]
    assert weight(PolyForm(2, (ONE,)), whole) == F(1, 2)
    top = next(c for c in build_cells(UNIT_TRIANGLE, 3) if c.anchor == P(1, 0, 0))
    assert weight(PolyForm(2, (ONE,)), top) == top.shoelace_area(UNIT_TRIANGLE)


def test_quadrature_rules():
    t, w = gauss_segment(5)
    assert np.dot(w, t ** 9) == pytest.approx(1 / 10, rel=1e-14)
    st, w = collapsed_triangle_rule(6)
    assert w.sum() == pytest.approx(0.5, rel=1e-14)
    # int x^a y^b over the unit triangle = a! b! / (a + b + 2)!
    assert np.dot(w, st[:, 0] ** 5 * st[:, 1] ** 6) == pytest.approx(120 * 720 / 6227020800, rel=1e-12)


@pytest.mark.parametrize("r", [3, 4, 5])
def test_numeric_matches_exact(r, rng):
    tri = Triangle(((F(1, 2), 0), (3, 1), (1, 2)))
    cx = build_complex(tri, r)
    for k in (1, 2):
        w = random_form(r - k, k, rng, tri)

        def f(x, y, w=w):
            lam = cart_to_bary(tri, x, y)
            vals = [evaluate_many(c, lam) for c in w.components]
            return tuple(vals) if k == 1 else vals[0]

        for c in cx.cells(k):
            exact = float(weight(w, c))
            assert weight_numeric(f, c, order=r + 2, tri=tri) == pytest.approx(exact, rel=1e-12, abs=1e-13)
    one = lambda x, y: np.ones_like(x)
    for c in cx.F2:
        assert weight_numeric(one, c, tri=tri) == pytest.approx(float(c.area(tri)), rel=1e-14)


def test_numeric_self_convergence():
    f = lambda x, y: np.exp(x) * np.sin(np.pi * y)
    (c,) = build_cells(UNIT_TRIANGLE, 2)
    assert weight_numeric(f, c, order=20) == pytest.approx(weight_numeric(f, c, order=22), rel=1e-10)


def _inside(poly, x, y):
    inside = np.zeros_like(x, dtype=bool)
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        x0, y0, x1, y1 = map(float, (x0, y0, x1, y1))
        cond = (y0 > y) != (y1 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
        inside ^= cond & (x < xc)
    return inside


def test_two_cell_weights_against_monte_carlo(rng):
    gen = np.random.default_rng(rng.randint(0, 2 ** 32))
    n = 10 ** 6
    u = gen.random((n, 2))
    flip = u.sum(axis=1) > 1
    u[flip] = 1 - u[flip]
    x, y = u[:, 0], u[:, 1]
    lam = np.column_stack([1 - x - y, x, y])
    cells = build_cells(UNIT_TRIANGLE, 5)
    masks = [_inside([UNIT_TRIANGLE.to_cart(p) for p in c.polygon], x, y) for c in cells]
    for trial in range(20):
        w = random_form(4, 2, rng)
        vals = evaluate_many(w.components[0], lam)
        c, mask = cells[trial % len(cells)], masks[trial % len(cells)]
        sample = 0.5 * vals * mask
        est, se = sample.mean(), sample.std() / np.sqrt(n)
        assert abs(est - float(weight(w, c))) <= 3 * se + 1e-12


def test_vandermonde_examples():
    cx = build_complex(UNIT_TRIANGLE, 2)
    V = vandermonde(cx, 2, 2)
    assert V.entries == [[F(1, 2)]]
    V0 = vandermonde(cx, 2, 0)
    assert V0.shape == (6, 6) and V0.rank() == 6
    cx3 = build_complex(UNIT_TRIANGLE, 3)
    V1 = vandermonde(cx3, 3, 1)
    assert V1.shape == (12, 12) and V1.rank() == 12


@pytest.mark.parametrize("r", range(2, 7))
def test_unisolvence(r):
    cx = build_complex(UNIT_TRIANGLE, r)
    for k in range(3):
        for kind in ("barycentric", "cartesian"):
            V = vandermonde(cx, r, k, kind)
            assert V.is_square and V.rank() == space_dim(r, k)


def test_de_rham_signs():
    cx = build_complex(UNIT_TRIANGLE, 3)
    assert de_rham_matrix(cx, 3, 0).entries == vandermonde(cx, 3, 0).entries
    R = de_rham_matrix(cx, 3, 1)
    signs = [1] * len(cx.F1)
    signs[4] = -1
    S = de_rham_matrix(cx, 3, 1, signs)
    diff = [i for i, (a, b) in enumerate(zip(R.entries, S.entries)) if a != b]
    assert diff == [4] and S.entries[4] == [-v for v in R.entries[4]]


@pytest.mark.parametrize("r", range(2, 7))
def test_stokes(r):
    cx = build_complex(UNIT_TRIANGLE, r)
    assert stokes_holds(cx, 0) and stokes_holds(cx, 1)


def test_stokes_on_other_triangle():
    cx = build_complex(Triangle(((2, 4), (0, 0), (4, 0))), 4)
    lhs, rhs = stokes_defect(cx, 0)
    assert lhs == rhs


def test_exports_are_exact():
    V = vandermonde(build_complex(UNIT_TRIANGLE, 2), 2, 2)
    assert V.to_csv().splitlines()[1].endswith(",1/2")
    assert '"1/2"' in V.to_json()
