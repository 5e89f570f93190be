import numpy as np
import pytest

from feec_weights.barypoly import BaryPolynomial
from feec_weights.forms import PolyForm, random_form
from feec_weights.geometry import UNIT_TRIANGLE, GammaSet, Triangle, build_complex, gamma_set
from feec_weights.interp import (check_commuting, convergence_experiment, get_complex, interpolate,
                                 smooth_differential, smooth_potential, verify_all, zero_norm)
from feec_weights.weights import numeric_weights, vandermonde, weight

L0 = BaryPolynomial.coordinate(0)


@pytest.mark.parametrize("r,k", [(r, k) for r in range(2, 6) for k in range(3)])
def test_projection(r, k, rng):
    for _ in range(10):
        w = random_form(r - k, k, rng)
        assert interpolate(w, r, k).form() == w


def test_constant_interpolates_to_itself():
    one = PolyForm(0, (BaryPolynomial.constant(1),))
    for r in range(2, 6):
        assert interpolate(one, r, 0).form() == one


def test_interpolant_reproduces_weights(rng):
    cx = get_complex(UNIT_TRIANGLE, 4)
    w = random_form(6, 1, rng)
    pi = interpolate(w, 4, 1, cx).form()
    assert [weight(pi, c) for c in cx.F1] == [weight(w, c) for c in cx.F1]
    f = interpolate(smooth_differential, 4, 1, cx)
    V = vandermonde(cx, 4, 1).to_float()
    np.testing.assert_allclose(V @ np.array(f.coeffs, dtype=float), numeric_weights(smooth_differential, cx, 1),
                               rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("r", range(2, 7))
def test_commuting(r, rng):
    for _ in range(5):
        assert check_commuting(random_form(r, 0, rng), r)
    assert check_commuting(PolyForm(0, (L0 ** (r + 1),)), r)


def test_commuting_refuses_broken_complex():
    cx = build_complex(UNIT_TRIANGLE, 3).without_edge(2)
    assert not check_commuting(PolyForm(0, (L0,)), 3, cx)


def test_zero_norm_basics():
    zero = lambda x, y: np.zeros_like(x)
    assert zero_norm(zero, 0, 10).value == 0.0
    assert zero_norm(lambda x, y: np.full_like(x, -2.5), 0, 7).value == 2.5
    assert zero_norm(lambda x, y: (np.zeros_like(x), np.zeros_like(x)), 1, 10).value == 0.0
    # constant 1-form dx: the longest ratio is along the x direction
    assert zero_norm(lambda x, y: (np.ones_like(x), np.zeros_like(x)), 1, 5).value == pytest.approx(1.0)


def test_zero_norm_monotone_in_density():
    prev = 0.0
    for m in (5, 10, 20, 40):
        v = zero_norm(smooth_potential, 0, m).value
        assert v >= prev
        prev = v
    prev = 0.0
    for m in (5, 10, 20, 40):
        v = zero_norm(smooth_differential, 1, m).value
        assert v >= prev
        prev = v


def test_potential_reference_norm():
    assert zero_norm(smooth_potential, 0, 40).value == pytest.approx(1.7319, rel=0.02)


def test_polynomial_targets_have_zero_residual(rng):
    w = random_form(2, 0, rng)
    pi = interpolate(w, 3, 0)
    assert (pi.form() - w).is_zero()


def test_convergence_shape():
    rows = convergence_experiment(4, m=20, order=12)
    got = {(row.r, row.k) for row in rows}
    assert got == {(2, 0), (3, 0), (4, 0), (1, 1), (2, 1), (3, 1)}
    with pytest.raises(ValueError):
        convergence_experiment(7)


def test_verify_all_examples():
    rep = verify_all(2)
    assert rep.ok and rep.ranks == (6, 6, 1)
    rep = verify_all(4)
    assert rep.ok and rep.ranks == (15, 20, 6)
    assert rep.to_dict()["cochain_exact"]


def test_verify_all_sabotaged_gamma():
    pts = list(gamma_set(3))
    pts[1] = pts[0]
    rep = verify_all(3, gamma=GammaSet(tuple(pts), 3))
    assert not rep.ok
    assert rep.ranks[2] < rep.dims[2]


def test_verify_all_other_triangle():
    assert verify_all(3, Triangle(((0, 0), (0, 1), (1, 0)))).ok
