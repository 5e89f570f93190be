"""Exact rank and solves over the rationals, and 2-norm conditioning."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from ._kernels import eliminate


class SingularMatrixError(ArithmeticError):
    """Raised by :func:`solve` when the matrix is rank deficient."""

    def __init__(self, rank: int, size: int):
        super().__init__(f"matrix is singular: rank {rank} < {size}")
        self.rank = rank
        self.size = size


def _rows(M) -> list[list[Fraction]]:
    if isinstance(M, np.ndarray):
        M = M.tolist()
    return [[Fraction(v) for v in row] for row in M]


def _integer_rows(rows: list[list[Fraction]]) -> list[list[int]]:
    # scaling a row by a nonzero constant changes neither rank nor solutions
    out = []
    for row in rows:
        m = lcm(*(v.denominator for v in row)) if row else 1
        out.append([v.numerator * (m // v.denominator) for v in row])
    return out


def rank(M) -> int:
    """Exact rank of a rational matrix (fraction-free Bareiss elimination)."""
    rows = _rows(M)
    if not rows or not rows[0]:
        return 0
    r, _ = eliminate(_integer_rows(rows), len(rows[0]))
    return r


def _back_substitute(ech: list[list[int]], n: int) -> list[list[Fraction]]:
    nrhs = len(ech[0]) - n
    x = [[Fraction(0)] * nrhs for _ in range(n)]
    for i in range(n - 1, -1, -1):
        row = ech[i]
        piv = row[i]
        for c in range(nrhs):
            s = Fraction(row[n + c])
            for j in range(i + 1, n):
                if row[j]:
                    s -= row[j] * x[j][c]
            x[i][c] = s / piv
    return x


def solve_many(M, B) -> list[list[Fraction]]:
    """Exact solution ``X`` of ``M X = B`` for square full-rank `M`.

    `B` is a list of right-hand-side columns; the result is a list of
    solution columns.
    """
    rows = _rows(M)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("solve needs a square matrix")
    cols = [[Fraction(v) for v in b] for b in B]
    aug = [rows[i] + [c[i] for c in cols] for i in range(n)]
    ints = _integer_rows(aug)
    r, piv = eliminate(ints, n)
    if r < n:
        raise SingularMatrixError(r, n)
    X = _back_substitute(ints, n)
    return [[X[i][c] for i in range(n)] for c in range(len(cols))]


def solve(M, b: Sequence) -> list[Fraction]:
    """Exact ``x`` with ``M x = b``; raises :class:`SingularMatrixError`."""
    return solve_many(M, [b])[0]


def inverse(M) -> list[list[Fraction]]:
    n = len(_rows(M))
    eye = [[Fraction(int(i == j)) for i in range(n)] for j in range(n)]
    cols = solve_many(M, eye)
    return [[cols[j][i] for j in range(n)] for i in range(n)]


class ExactSolver:
    """Factor a square rational matrix once, then solve many right-hand sides."""

    def __init__(self, M):
        self.inv = inverse(M)
        self.n = len(self.inv)

    def __call__(self, b: Sequence) -> list[Fraction]:
        b = [Fraction(v) for v in b]
        return [sum((a * v for a, v in zip(row, b) if a and v), Fraction(0)) for row in self.inv]


def to_float(M) -> np.ndarray:
    """Round-to-nearest double conversion of a rational matrix."""
    return np.array([[float(v) for v in row] for row in _rows(M)], dtype=float)


def cond2(M) -> float:
    """``sigma_max / sigma_min``; ``inf`` when singular to working precision."""
    A = np.asarray(M, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("cond2 needs a square matrix")
    s = np.linalg.svd(A, compute_uv=False)
    if s[-1] <= s[0] * max(A.shape) * np.finfo(float).eps:
        return float("inf")
    return float(s[0] / s[-1])
