"""Weight interpolation, the commuting-diagram check and the 0-norm experiment."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .barypoly import evaluate_many
from .forms import PolyForm, basis, derivative_matrix, exterior_derivative, linear_combination, space_dim
from .geometry import (UNIT_TRIANGLE, CellularComplexError, CellConstructionError, DofComplex,
                       GammaSet, Triangle, build_complex, small_simplices)
from .linalg import ExactSolver, SingularMatrixError, rank
from .weights import (DEFAULT_QUAD_ORDER, numeric_weights, segment_integrals, stokes_holds,
                      vandermonde, weight)

log = logging.getLogger(__name__)

DEFAULT_NORM_DENSITY = 40


def smooth_potential(x, y):
    """``exp(x) sin(pi y)``."""
    return np.exp(x) * np.sin(np.pi * y)


def smooth_differential(x, y):
    """``d(exp(x) sin(pi y))`` as its ``(dx, dy)`` coefficients."""
    e = np.exp(x)
    return e * np.sin(np.pi * y), np.pi * e * np.cos(np.pi * y)


def cart_to_bary(tri: Triangle, x, y) -> np.ndarray:
    V = tri.float_vertices()
    M = np.array([[V[0, 0], V[1, 0], V[2, 0]], [V[0, 1], V[1, 1], V[2, 1]], [1.0, 1.0, 1.0]])
    rhs = np.vstack([np.ravel(x), np.ravel(y), np.ones(np.size(x))])
    return np.linalg.solve(M, rhs).T


# ---------------------------------------------------------------------------
# interpolation
# ---------------------------------------------------------------------------


@dataclass
class Interpolant:
    """Coefficients of ``Pi^k omega`` against the basis of ``P_{r-k} Lambda^k``."""

    r: int
    k: int
    coeffs: Sequence
    complex: DofComplex | None
    basis_kind: str = "barycentric"
    forms: list[PolyForm] = field(default_factory=list, repr=False)

    @property
    def exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def form(self) -> PolyForm:
        """The interpolant as an exact :class:`PolyForm` (rational pipelines only)."""
        if not self.forms:
            return PolyForm.zero(self.k, self.complex.tri if self.complex else UNIT_TRIANGLE)
        return linear_combination([Fraction(c) for c in self.coeffs], self.forms)

    def __call__(self, x, y):
        """Vectorised float values; a ``(f_x, f_y)`` pair for 1-forms."""
        x = np.asarray(x, dtype=float)
        shape = x.shape
        ncomp = 2 if self.k == 1 else 1
        out = [np.zeros(x.size) for _ in range(ncomp)]
        if self.forms:
            lam = cart_to_bary(self.forms[0].tri, x, y)
            for c, f in zip(self.coeffs, self.forms):
                c = float(c)
                if c:
                    for i, p in enumerate(f.components):
                        if p.items():
                            out[i] += c * evaluate_many(p, lam)
        out = [o.reshape(shape) for o in out]
        return (out[0], out[1]) if self.k == 1 else out[0]


_solvers: dict[tuple, tuple[DofComplex, ExactSolver]] = {}
_complexes: dict[tuple, DofComplex] = {}


def get_complex(tri: Triangle, r: int) -> DofComplex:
    key = (tri, r)
    if key not in _complexes:
        _complexes[key] = build_complex(tri, r)
    return _complexes[key]


def _exact_solver(cx: DofComplex, k: int, basis_kind: str) -> ExactSolver:
    key = (id(cx), k, basis_kind)
    hit = _solvers.get(key)
    if hit is None or hit[0] is not cx:
        V = vandermonde(cx, cx.r, k, basis_kind)
        hit = (cx, ExactSolver(V.entries))
        _solvers[key] = hit
    return hit[1]


def interpolate(target: PolyForm | Callable, r: int, k: int, cx: DofComplex | None = None,
                tri: Triangle = UNIT_TRIANGLE, basis_kind: str = "barycentric",
                order: int = DEFAULT_QUAD_ORDER) -> Interpolant:
    """The unique element of ``P_{r-k} Lambda^k`` sharing the target's weights on ``F^k``.

    A :class:`PolyForm` target is interpolated exactly; a callable target
    (see :func:`weights.weight_numeric`) goes through quadrature and a
    floating-point solve.
    """
    if isinstance(target, PolyForm):
        tri = target.tri
    cx = cx or get_complex(tri, r)
    forms = basis(r, k, cx.tri, basis_kind)
    cells = cx.cells(k)
    if isinstance(target, PolyForm):
        if target.k != k:
            raise ValueError("target has the wrong form degree")
        w = [weight(target, c) for c in cells]
        coeffs = _exact_solver(cx, k, basis_kind)(w)
    else:
        w = numeric_weights(target, cx, k, order)
        V = vandermonde(cx, r, k, basis_kind).to_float()
        if V.shape[0] != V.shape[1]:
            raise SingularMatrixError(min(V.shape), V.shape[1])
        coeffs = np.linalg.solve(V, w)
    return Interpolant(r, k, list(coeffs), cx, basis_kind, forms)


def check_commuting(omega0: PolyForm, r: int, cx: DofComplex | None = None) -> bool:
    """``d(Pi^0 omega0) == Pi^1(d omega0)`` with exact coefficients.

    Returns False without interpolating when the cells do not form a
    cellular complex.
    """
    if omega0.k != 0:
        raise ValueError("check_commuting expects a 0-form")
    cx = cx or get_complex(omega0.tri, r)
    problems = cx.cellular_violations()
    if problems:
        log.warning("not a cellular complex: %s", problems[0])
        return False
    c0 = interpolate(omega0, r, 0, cx).coeffs
    c1 = interpolate(exterior_derivative(omega0), r, 1, cx).coeffs
    D = derivative_matrix(r, 0, cx.tri)
    dc0 = [sum((a * b for a, b in zip(row, c0)), Fraction(0)) for row in D]
    return dc0 == list(c1)


# ---------------------------------------------------------------------------
# 0-norm
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormEstimate:
    value: float
    k: int
    m: int


def zero_norm(residual: Callable, k: int, m: int = DEFAULT_NORM_DENSITY, tri: Triangle = UNIT_TRIANGLE,
              order: int = DEFAULT_QUAD_ORDER) -> NormEstimate:
    """Sup of ``|integral_c residual| / |c|`` over the small simplices of density `m`.

    k = 0 takes the max over the lattice ``L_m``; k = 1 the max over the
    small edges ``Sigma^1_m`` with lengths measured in the Cartesian metric.
    """
    if m < 1:
        raise ValueError("density must be positive")
    if k == 0:
        pts = np.array([[float(v) for v in c.points[0]] for c in small_simplices(tri, m, 0)])
        P = pts @ tri.float_vertices()
        vals = np.abs(np.asarray(residual(P[:, 0], P[:, 1]), dtype=float))
        return NormEstimate(float(vals.max()), 0, m)
    if k == 1:
        edges = small_simplices(tri, m, 1)
        ints = np.abs(segment_integrals(residual, edges, order, tri))
        A = np.array([[float(v) for v in e.points[0]] for e in edges]) @ tri.float_vertices()
        B = np.array([[float(v) for v in e.points[1]] for e in edges]) @ tri.float_vertices()
        lengths = np.linalg.norm(B - A, axis=1)
        return NormEstimate(float((ints / lengths).max()), 1, m)
    raise ValueError("the 0-norm estimator handles k = 0 and k = 1")


# ---------------------------------------------------------------------------
# convergence experiment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConvergenceRow:
    r: int
    k: int
    residual_norm: float
    norm_reference: float


def _residual(target: Callable, interp: Interpolant | None, k: int) -> Callable:
    if interp is None:
        return target
    if k == 0:
        return lambda x, y: np.asarray(target(x, y)) - interp(x, y)

    def res(x, y):
        fx, fy = target(x, y)
        px, py = interp(x, y)
        return np.asarray(fx) - px, np.asarray(fy) - py

    return res


def convergence_experiment(r_max: int, potential: Callable = smooth_potential,
                           differential: Callable = smooth_differential, tri: Triangle = UNIT_TRIANGLE,
                           m: int = DEFAULT_NORM_DENSITY, order: int = DEFAULT_QUAD_ORDER,
                           basis_kind: str = "barycentric") -> list[ConvergenceRow]:
    """Residual 0-norms of ``omega - Pi^0 omega`` and ``d omega - Pi^1 d omega``.

    Rows are indexed by polynomial degree, as in the conditioning table: row
    ``r`` interpolates the potential in ``P_r`` (cells of the degree-r
    sequence, r >= 2) and the differential in ``P_r Lambda^1`` (cells of the
    degree-(r+1) sequence, r <= r_max - 1).
    """
    if r_max > 6:
        raise ValueError("the experiment is limited to r_max <= 6")
    ref0 = zero_norm(potential, 0, m, tri, order).value
    ref1 = zero_norm(differential, 1, m, tri, order).value
    rows = []
    for r in range(1, r_max + 1):
        if r >= 2:
            cx = get_complex(tri, r)
            p0 = interpolate(potential, r, 0, cx, tri, basis_kind, order)
            rows.append(ConvergenceRow(r, 0, zero_norm(_residual(potential, p0, 0), 0, m, tri, order).value, ref0))
        if r <= r_max - 1:
            p1 = interpolate(differential, r + 1, 1, get_complex(tri, r + 1), tri, basis_kind, order)
            rows.append(ConvergenceRow(r, 1, zero_norm(_residual(differential, p1, 1), 1, m, tri, order).value,
                                       ref1))
    return rows


# ---------------------------------------------------------------------------
# full verification
# ---------------------------------------------------------------------------


@dataclass
class VerificationReport:
    r: int
    counts: tuple[int, int, int] = (0, 0, 0)
    dims: tuple[int, int, int] = (0, 0, 0)
    euler: int = 0
    paving_defect: str = "0"
    max_overlap: str = "0"
    boundary_squared_zero: bool = False
    cellular_problems: list[str] = field(default_factory=list)
    ranks: tuple[int, int, int] = (0, 0, 0)
    stokes: tuple[bool, bool] = (False, False)
    cochain_exact: bool = False
    condition_numbers: dict[str, list[float]] = field(default_factory=dict)
    errors: list[str] = field(default_factory=list)

    @property
    def full_rank(self) -> bool:
        return tuple(self.ranks) == tuple(self.dims)

    @property
    def ok(self) -> bool:
        return (self.full_rank and tuple(self.counts) == tuple(self.dims) and self.euler == 1
                and self.paving_defect == "0" and self.max_overlap == "0" and self.boundary_squared_zero
                and not self.cellular_problems and all(self.stokes) and self.cochain_exact and not self.errors)

    def to_dict(self) -> dict:
        return {
            "r": self.r, "ok": self.ok, "counts": list(self.counts), "dims": list(self.dims),
            "euler": self.euler, "paving_defect": self.paving_defect, "max_overlap": self.max_overlap,
            "boundary_squared_zero": self.boundary_squared_zero,
            "cellular_problems": self.cellular_problems, "ranks": list(self.ranks),
            "full_rank": self.full_rank, "stokes": list(self.stokes), "cochain_exact": self.cochain_exact,
            "condition_numbers": self.condition_numbers, "errors": self.errors,
        }


def verify_all(r: int, tri: Triangle = UNIT_TRIANGLE, gamma: GammaSet | Sequence | None = None,
               cx: DofComplex | None = None) -> VerificationReport:
    """Every structural and algebraic check for degree r; failures are recorded, not raised."""
    if r < 2:
        raise ValueError("verification needs r >= 2")
    rep = VerificationReport(r, dims=tuple(space_dim(r, k) for k in range(3)))
    if cx is None:
        try:
            cx = build_complex(tri, r, gamma)
        except (CellularComplexError, CellConstructionError) as exc:
            rep.errors.append(str(exc))
            return rep
    rep.counts = cx.counts
    rep.euler = cx.euler
    rep.paving_defect = str(cx.paving_defect())
    rep.max_overlap = str(cx.max_overlap())
    rep.cellular_problems = cx.cellular_violations()
    if rep.cellular_problems:
        return rep
    d1, d2 = cx.boundary1, cx.boundary2
    rep.boundary_squared_zero = not np.any(d1 @ d2)
    mats = [vandermonde(cx, r, k) for k in range(3)]
    rep.ranks = tuple(m.rank() for m in mats)
    rep.condition_numbers = {"barycentric": [m.cond2() for m in mats]}
    rep.condition_numbers["cartesian"] = [vandermonde(cx, r, k, "cartesian").cond2() for k in range(3)]
    rep.stokes = (stokes_holds(cx, 0), stokes_holds(cx, 1))
    rk0 = rank(cx.coboundary(0).tolist())
    rk1 = rank(cx.coboundary(1).tolist())
    # ker delta_0 = constants, im delta_0 = ker delta_1, delta_1 onto
    rep.cochain_exact = (rep.boundary_squared_zero and rk0 == len(cx.F0) - 1
                         and rk0 == len(cx.F1) - rk1 and rk1 == len(cx.F2))
    return rep
