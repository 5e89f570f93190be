"""Weights (integrals of forms over cells), de Rham maps and Vandermonde matrices."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_jacobi, roots_legendre

from .barypoly import BaryPolynomial, evaluate, integrate_over_simplex
from .forms import PolyForm, basis, derivative_matrix
from .geometry import Cell, DofComplex, Triangle, bounds_scale, bounds_vertices
from .linalg import cond2, rank, to_float

DEFAULT_QUAD_ORDER = 20


# ---------------------------------------------------------------------------
# exact weights
# ---------------------------------------------------------------------------


@lru_cache(maxsize=200_000)
def _segment_moment(a: tuple, b: tuple, alpha: tuple) -> Fraction:
    # integral over t in [0, 1] of l(a + t (b - a)) ** alpha
    return integrate_over_simplex(BaryPolynomial.monomial(alpha), [a, b], 1)


@lru_cache(maxsize=200_000)
def _triangle_moment(bounds: tuple, alpha: tuple) -> Fraction:
    # integral of l ** alpha over triangle(bounds), per unit reference area
    s = bounds_scale(bounds)
    return integrate_over_simplex(BaryPolynomial.monomial(alpha), bounds_vertices(bounds), s * s)


def _integrate_poly(p: BaryPolynomial, cell: Cell, tri: Triangle) -> Fraction:
    total = Fraction(0)
    if cell.dim == 1:
        a, b = (tuple(q) for q in cell.points)
        for alpha, c in p.items():
            total += c * _segment_moment(a, b, alpha)
        return total
    for bnd, mult in cell.pieces:
        part = Fraction(0)
        for alpha, c in p.items():
            part += c * _triangle_moment(bnd, alpha)
        total += mult * part
    return total * tri.area


def weight(omega: PolyForm, cell: Cell) -> Fraction:
    """Exact integral of `omega` over `cell` (``omega.k`` must equal ``cell.dim``).

    Points: evaluation.  Segments: the line integral along the cell's
    orientation.  2-cells: ``integral f dA`` through the cell's signed
    decomposition into homothetic triangles.
    """
    if omega.k != cell.dim:
        raise ValueError(f"cannot integrate a {omega.k}-form over a {cell.dim}-cell")
    tri = omega.tri
    if cell.dim == 0:
        return evaluate(omega.components[0], cell.points[0])
    if cell.dim == 1:
        (ax, ay), (bx, by) = (tri.to_cart(p) for p in cell.points)
        px, py = omega.components
        return _integrate_poly(px * (bx - ax) + py * (by - ay), cell, tri)
    return _integrate_poly(omega.components[0], cell, tri)


# ---------------------------------------------------------------------------
# numerical weights
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def gauss_segment(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes/weights on [0, 1]; exact to degree ``2*order - 1``."""
    x, w = roots_legendre(order)
    return (x + 1) / 2, w / 2


@lru_cache(maxsize=64)
def collapsed_triangle_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Conical-product rule on the triangle ``{(s, t): s, t >= 0, s + t <= 1}``.

    Gauss-Jacobi(1, 0) in the collapsed direction times Gauss-Legendre in the
    other; ``order**2`` points, exact to degree ``2*order - 1``, weights sum
    to 1/2.
    """
    xj, wj = roots_jacobi(order, 1, 0)
    xl, wl = roots_legendre(order)
    u = (xj + 1) / 2  # collapsed coordinate, weight (1 - u)
    v = (xl + 1) / 2
    U, V = np.meshgrid(u, v, indexing="ij")
    W = np.outer(wj / 4, wl / 2)
    s = U
    t = (1 - U) * V
    return np.column_stack([s.ravel(), t.ravel()]), W.ravel()


def _cart(tri: Triangle, lam: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    P = lam @ tri.float_vertices()
    return P[:, 0], P[:, 1]


def weight_numeric(f: Callable, cell: Cell, order: int = DEFAULT_QUAD_ORDER, tri: Triangle | None = None,
                   k: int | None = None) -> float:
    """Quadrature approximation of the weight of a smooth form.

    `f` is vectorised over Cartesian coordinate arrays: ``f(x, y)`` returns the
    value for 0- and 2-forms and the pair ``(f_x, f_y)`` of ``dx``/``dy``
    coefficients for 1-forms.
    """
    if order < 1:
        raise ValueError("quadrature order must be >= 1")
    from .geometry import UNIT_TRIANGLE

    tri = tri or UNIT_TRIANGLE
    if cell.dim == 0:
        x, y = _cart(tri, np.array([[float(v) for v in cell.points[0]]]))
        return float(np.asarray(f(x, y)).ravel()[0])
    if cell.dim == 1:
        return float(segment_integrals(f, [cell], order, tri)[0])
    return float(cell_integrals(f, [cell], order, tri)[0])


def segment_integrals(f: Callable, cells: Sequence[Cell], order: int, tri: Triangle) -> np.ndarray:
    """Line integrals of a 1-form callback over many segments at once."""
    t, w = gauss_segment(order)
    A = np.array([[float(v) for v in c.points[0]] for c in cells])
    B = np.array([[float(v) for v in c.points[1]] for c in cells])
    lam = (A[:, None, :] + t[None, :, None] * (B - A)[:, None, :]).reshape(-1, 3)
    x, y = _cart(tri, lam)
    fx, fy = f(x, y)
    V = tri.float_vertices()
    d = (B - A) @ V
    vals = (np.asarray(fx).reshape(len(cells), -1) * d[:, :1]
            + np.asarray(fy).reshape(len(cells), -1) * d[:, 1:])
    return vals @ w


def cell_integrals(f: Callable, cells: Sequence[Cell], order: int, tri: Triangle) -> np.ndarray:
    """``integral f dA`` over many 2-cells at once."""
    st, w = collapsed_triangle_rule(order)
    out = np.zeros(len(cells))
    area = float(tri.area)
    for n, cell in enumerate(cells):
        for bnd, mult in cell.pieces:
            V = np.array([[float(v) for v in p] for p in bounds_vertices(bnd)])
            lam = V[0] + st[:, :1] * (V[1] - V[0]) + st[:, 1:] * (V[2] - V[0])
            x, y = _cart(tri, lam)
            s = float(bounds_scale(bnd))
            out[n] += mult * 2 * area * s * s * np.dot(w, np.asarray(f(x, y), dtype=float))
    return out


def numeric_weights(f: Callable, cx: DofComplex, k: int, order: int = DEFAULT_QUAD_ORDER) -> np.ndarray:
    """Weights of a smooth k-form callback on every cell of ``F^k``."""
    tri = cx.tri
    if k == 0:
        lam = np.array([[float(v) for v in p] for p in cx.F0])
        x, y = _cart(tri, lam)
        return np.asarray(f(x, y), dtype=float)
    if k == 1:
        return segment_integrals(f, cx.F1, order, tri)
    return cell_integrals(f, cx.F2, order, tri)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightMatrix:
    """Exact generalized Vandermonde matrix ``V[i][j] = w(omega_j, s_i)``."""

    entries: list[list[Fraction]]
    row_labels: list[str]
    col_labels: list[str]
    r: int
    k: int
    basis_kind: str = "barycentric"
    _float: np.ndarray | None = field(default=None, repr=False, compare=False)

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.entries), len(self.col_labels)

    @property
    def is_square(self) -> bool:
        n, m = self.shape
        return n == m

    def rank(self) -> int:
        return rank(self.entries)

    def to_float(self) -> np.ndarray:
        return to_float(self.entries)

    def cond2(self) -> float:
        if not self.is_square:
            return float("inf")
        return cond2(self.to_float())

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cell"] + self.col_labels)
        for label, row in zip(self.row_labels, self.entries):
            w.writerow([label] + [f"{v.numerator}/{v.denominator}" for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps({
            "r": self.r, "k": self.k, "basis": self.basis_kind,
            "rows": self.row_labels, "columns": self.col_labels,
            "entries": [[f"{v.numerator}/{v.denominator}" for v in row] for row in self.entries],
        }, indent=1)


def cell_label(cell: Cell) -> str:
    if cell.dim == 0:
        return str(cell.points[0])
    if cell.dim == 1:
        return f"{cell.points[0]}->{cell.points[1]}"
    return f"s{cell.anchor}" if cell.anchor is not None else "cell"


def vandermonde(cx: DofComplex, r: int | None = None, k: int = 0, basis_kind: str = "barycentric",
                forms: Sequence[PolyForm] | None = None) -> WeightMatrix:
    """Weights of the basis of ``P_{r-k} Lambda^k`` over the cells of ``F^k``."""
    r = cx.r if r is None else r
    if r != cx.r:
        raise ValueError(f"complex was built for r={cx.r}, not r={r}")
    forms = list(forms) if forms is not None else basis(r, k, cx.tri, basis_kind)
    cells = cx.cells(k)
    entries = [[weight(f, c) for f in forms] for c in cells]
    return WeightMatrix(entries, [cell_label(c) for c in cells], [repr(f) for f in forms], r, k, basis_kind)


def de_rham_matrix(cx: DofComplex, r: int | None = None, k: int = 0, signs: Sequence[int] | None = None,
                   basis_kind: str = "barycentric") -> WeightMatrix:
    """The de Rham map in the monomial basis and the cochain basis of ``F^k``.

    With the complex's own cell orientations this is the Vandermonde matrix;
    `signs` re-orients individual cells (a sign of -1 negates that row).
    """
    V = vandermonde(cx, r, k, basis_kind)
    if signs is None:
        return V
    if len(signs) != len(V.entries):
        raise ValueError("one sign per cell is required")
    rows = [[s * v for v in row] for s, row in zip(signs, V.entries)]
    return WeightMatrix(rows, V.row_labels, V.col_labels, V.r, V.k, V.basis_kind)


def _matmul(A, B) -> list[list[Fraction]]:
    A = [list(map(Fraction, row)) for row in (A.tolist() if isinstance(A, np.ndarray) else A)]
    B = [list(map(Fraction, row)) for row in (B.tolist() if isinstance(B, np.ndarray) else B)]
    m = len(B[0]) if B else 0
    out = []
    for row in A:
        acc = [Fraction(0)] * m
        for i, a in enumerate(row):
            if a:
                bi = B[i]
                for j in range(m):
                    if bi[j]:
                        acc[j] += a * bi[j]
        out.append(acc)
    return out


def stokes_defect(cx: DofComplex, k: int) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """Both sides of ``delta_k R^k = R^{k+1} D_k`` (monomial bases)."""
    r = cx.r
    Rk = vandermonde(cx, r, k).entries
    Rk1 = vandermonde(cx, r, k + 1).entries
    lhs = _matmul(cx.coboundary(k), Rk)
    rhs = _matmul(Rk1, derivative_matrix(r, k, cx.tri))
    return lhs, rhs


def stokes_holds(cx: DofComplex, k: int) -> bool:
    lhs, rhs = stokes_defect(cx, k)
    return lhs == rhs
