from fractions import Fraction as F
import importlib

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from feec_weights import _kernels
from feec_weights._kernels import _bareiss_py
from feec_weights.linalg import ExactSolver, SingularMatrixError, cond2, inverse, rank, solve

entries = st.fractions(min_value=-9, max_value=9, max_denominator=5)


def matrices(n_min=1, n_max=6, square=False):
    @st.composite
    def build(draw):
        n = draw(st.integers(n_min, n_max))
        m = n if square else draw(st.integers(n_min, n_max))
        return [[draw(entries) for _ in range(m)] for _ in range(n)]
    return build()


def oracle_rank(M):
    # textbook Gauss-Jordan on Fractions
    A = [list(map(F, row)) for row in M]
    r = 0
    for c in range(len(A[0]) if A else 0):
        piv = next((i for i in range(r, len(A)) if A[i][c]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        for i in range(len(A)):
            if i != r and A[i][c]:
                f = A[i][c] / A[r][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        r += 1
    return r


@given(matrices())
def test_rank_matches_oracle(M):
    assert rank(M) == oracle_rank(M)


@given(matrices(square=True))
def test_solve_roundtrip(M):
    b = list(range(1, len(M) + 1))
    if oracle_rank(M) < len(M):
        with pytest.raises(SingularMatrixError):
            solve(M, b)
        return
    x = solve(M, b)
    assert [sum(a * v for a, v in zip(row, x)) for row in M] == b
    assert ExactSolver(M)(b) == x


def test_rank_examples():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[F(1, 3), F(1, 2)], [F(1, 5), F(1, 7)]]) == 2
    assert rank([[0, 0], [0, 0]]) == 0
    # Hilbert matrices are famously ill conditioned but exactly nonsingular
    H = [[F(1, i + j + 1) for j in range(12)] for i in range(12)]
    assert rank(H) == 12
    inv = inverse(H)
    assert inv[0][0] == 144


def test_cond2():
    assert cond2(np.eye(4)) == 1.0
    assert cond2(np.diag([1.0, 1e-3])) == pytest.approx(1e3)
    assert cond2(np.array([[1.0, 2.0], [2.0, 4.0]])) == float("inf")
    with pytest.raises(ValueError):
        cond2(np.ones((2, 3)))


@given(matrices(n_max=8))
def test_backends_agree(M):
    from feec_weights.linalg import _integer_rows, _rows
    ints = _integer_rows(_rows(M))
    a = [list(r) for r in ints]
    b = [list(r) for r in ints]
    assert _kernels.eliminate(a, len(M[0])) == _bareiss_py.eliminate(b, len(M[0]))
    assert a == b


def test_pure_fallback_selected(monkeypatch):
    monkeypatch.setenv("FEEC_WEIGHTS_PURE", "1")
    mod = importlib.reload(_kernels)
    try:
        assert mod.BACKEND == "python"
        assert mod.eliminate is _bareiss_py.eliminate
    finally:
        monkeypatch.delenv("FEEC_WEIGHTS_PURE")
        importlib.reload(_kernels)


def det_laplace(M):
    if len(M) == 1:
        return F(M[0][0])
    return sum((-1) ** j * F(M[0][j]) * det_laplace([row[:j] + row[j + 1:] for row in M[1:]])
               for j in range(len(M)) if M[0][j])


def test_solve_examples():
    eye = [[int(i == j) for j in range(4)] for i in range(4)]
    assert solve(eye, [1, 2, 3, 4]) == [1, 2, 3, 4]
    assert solve([[2 * v for v in row] for row in eye], [1] * 4) == [F(1, 2)] * 4
    assert rank(eye + [eye[0]]) == 4
    assert cond2(np.diag([10.0, 1.0, 0.1])) == pytest.approx(100.0, rel=1e-14)


def test_rank_against_determinant(rng):
    for _ in range(10):
        M = [[F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(7)] for _ in range(7)]
        if rng.random() < 0.5:
            M[3] = [a + 2 * b for a, b in zip(M[1], M[2])]
        assert (rank(M) == 7) == (det_laplace(M) != 0)


@given(matrices(n_min=2), st.randoms(use_true_random=False))
def test_rank_invariances(M, rnd):
    rows = list(M)
    rnd.shuffle(rows)
    cols = list(range(len(M[0])))
    rnd.shuffle(cols)
    P = [[row[c] * F(rnd.randint(1, 9), rnd.randint(1, 9)) for c in cols] for row in rows]
    assert rank(P) == rank(M)
    if len(M) == len(M[0]):
        A = np.array([[float(v) for v in row] for row in M])
        B = A[::-1, ::-1]
        ca, cb = cond2(A), cond2(B)
        if np.isfinite(ca) and ca < 1e8:
            assert cb == pytest.approx(ca, rel=1e-10)
