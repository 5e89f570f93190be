"""Reference triangle, principal lattices, the poised set Gamma_r and the cells.

Every triangle handled here other than the reference one is *homothetic with
positive ratio* to it.  Such a triangle is the set ``{l0 >= b0, l1 >= b1,
l2 >= b2}`` for a bound triple ``b`` with ``b0 + b1 + b2 < 1``, so two of them
intersect in the triangle bounded by the componentwise maximum.  All cell
bookkeeping (areas, overlaps, inclusion-exclusion) is done on bound triples
with exact fractions.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .barypoly import BaryPoint, BaryPolynomial, multi_indices
from .linalg import rank

log = logging.getLogger(__name__)

Point2 = tuple[Fraction, Fraction]
Bounds = tuple[Fraction, Fraction, Fraction]


class CellConstructionError(ValueError):
    """A cell could not be built (for instance it has zero area)."""


class CellularComplexError(ValueError):
    """The boundary of a 2-cell is not a union of the available 1-cells."""

    def __init__(self, cell_index: int, message: str):
        super().__init__(f"cell {cell_index}: {message}")
        self.cell_index = cell_index


def _q(v) -> Fraction:
    if isinstance(v, float):
        raise TypeError("use exact rationals for geometry")
    return Fraction(v)


# ---------------------------------------------------------------------------
# Triangle and affine maps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Triangle:
    """A non-degenerate triangle with rational vertices ``(x0, x1, x2)``."""

    vertices: tuple[Point2, Point2, Point2]

    def __post_init__(self) -> None:
        verts = tuple((_q(x), _q(y)) for x, y in self.vertices)
        if len(verts) != 3:
            raise ValueError("a triangle has three vertices")
        object.__setattr__(self, "vertices", verts)
        if self.signed_area == 0:
            raise ValueError("zero-area domain")

    @classmethod
    def unit(cls) -> Triangle:
        return cls(((0, 0), (1, 0), (0, 1)))

    @property
    def signed_area(self) -> Fraction:
        (x0, y0), (x1, y1), (x2, y2) = self.vertices
        return ((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)) / 2

    @property
    def area(self) -> Fraction:
        return abs(self.signed_area)

    @property
    def orientation(self) -> int:
        return 1 if self.signed_area > 0 else -1

    def to_cart(self, pt: BaryPoint | Sequence) -> Point2:
        lam = tuple(pt)
        x = sum((lam[i] * self.vertices[i][0] for i in range(3)), Fraction(0))
        y = sum((lam[i] * self.vertices[i][1] for i in range(3)), Fraction(0))
        return x, y

    def to_bary(self, p: Sequence) -> BaryPoint:
        (x0, y0), (x1, y1), (x2, y2) = self.vertices
        x, y = _q(p[0]), _q(p[1])
        det = 2 * self.signed_area
        l1 = ((x - x0) * (y2 - y0) - (x2 - x0) * (y - y0)) / det
        l2 = ((x1 - x0) * (y - y0) - (x - x0) * (y1 - y0)) / det
        return BaryPoint((1 - l1 - l2, l1, l2))

    @cached_property
    def grad_lambda(self) -> tuple[Point2, Point2, Point2]:
        """Exact constant gradients ``(d l_i/dx, d l_i/dy)``."""
        (x0, y0), (x1, y1), (x2, y2) = self.vertices
        det = 2 * self.signed_area
        g1 = ((y2 - y0) / det, -(x2 - x0) / det)
        g2 = (-(y1 - y0) / det, (x1 - x0) / det)
        g0 = (-g1[0] - g2[0], -g1[1] - g2[1])
        return g0, g1, g2

    @cached_property
    def coordinate_polys(self) -> tuple[BaryPolynomial, BaryPolynomial]:
        """``x`` and ``y`` as degree-1 barycentric polynomials."""
        xs = [v[0] for v in self.vertices]
        ys = [v[1] for v in self.vertices]
        return BaryPolynomial.linear(xs), BaryPolynomial.linear(ys)

    def float_vertices(self) -> np.ndarray:
        return np.array([[float(x), float(y)] for x, y in self.vertices])


UNIT_TRIANGLE = Triangle.unit()


@dataclass(frozen=True)
class AffineMap:
    """``x -> A x + b`` on the plane, with barycentric coordinates taken in `tri`."""

    linear: tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]
    translation: Point2
    tri: Triangle = UNIT_TRIANGLE

    def __post_init__(self) -> None:
        A = tuple(tuple(_q(v) for v in row) for row in self.linear)
        b = tuple(_q(v) for v in self.translation)
        object.__setattr__(self, "linear", A)
        object.__setattr__(self, "translation", b)

    @classmethod
    def identity(cls, tri: Triangle = UNIT_TRIANGLE) -> AffineMap:
        return cls(((1, 0), (0, 1)), (0, 0), tri)

    @property
    def determinant(self) -> Fraction:
        (a, b), (c, d) = self.linear
        return a * d - b * c

    @property
    def invertible(self) -> bool:
        return self.determinant != 0

    def __call__(self, p: Sequence) -> Point2:
        (a, b), (c, d) = self.linear
        x, y = _q(p[0]), _q(p[1])
        return a * x + b * y + self.translation[0], c * x + d * y + self.translation[1]

    def apply_bary(self, pt: BaryPoint) -> BaryPoint:
        return self.tri.to_bary(self(self.tri.to_cart(pt)))

    def compose(self, inner: AffineMap) -> AffineMap:
        """``self o inner``."""
        (a, b), (c, d) = self.linear
        (e, f), (g, h) = inner.linear
        lin = ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))
        t = self(inner.translation)
        return AffineMap(lin, t, self.tri)

    def bary_matrix(self) -> list[list[Fraction]]:
        """Matrix ``M`` with ``l(self(x)) = M l(x)``; column j is ``l(self(x_j))``."""
        cols = [tuple(self.tri.to_bary(self(v))) for v in self.tri.vertices]
        return [[cols[j][i] for j in range(3)] for i in range(3)]


def tau_map(tri: Triangle, xi: BaryPoint) -> AffineMap:
    """``x -> l0(xi) x + l1(xi) x1 + l2(xi) x2``; invertible iff ``l0(xi) != 0``."""
    l0, l1, l2 = xi
    (_, p1, p2) = tri.vertices
    lin = ((l0, 0), (0, l0))
    t = (l1 * p1[0] + l2 * p2[0], l1 * p1[1] + l2 * p2[1])
    return AffineMap(lin, t, tri)


def homothety(tri: Triangle, alpha: Sequence[int], r: int) -> AffineMap:
    """The map ``x -> (1/r) sum_i (l_i(x) + alpha_i) x_i`` onto a small triangle."""
    t = (sum(Fraction(alpha[i], r) * tri.vertices[i][0] for i in range(3)),
         sum(Fraction(alpha[i], r) * tri.vertices[i][1] for i in range(3)))
    s = Fraction(1, r)
    return AffineMap(((s, 0), (0, s)), t, tri)


# ---------------------------------------------------------------------------
# Homothetic triangles as bound triples
# ---------------------------------------------------------------------------


def tau_bounds(xi: BaryPoint) -> Bounds:
    """Bound triple of ``tau_xi(T)``: ``{l0 >= 0, l1 >= xi1, l2 >= xi2}``."""
    return (Fraction(0), xi[1], xi[2])


def bounds_scale(b: Bounds) -> Fraction:
    """Homothety ratio ``1 - sum(b)``; the triangle is non-degenerate iff > 0."""
    return 1 - b[0] - b[1] - b[2]


def intersect_bounds(a: Bounds, b: Bounds) -> Bounds:
    """Binding constraint per edge direction."""
    return (max(a[0], b[0]), max(a[1], b[1]), max(a[2], b[2]))


def bounds_vertices(b: Bounds) -> tuple[BaryPoint, BaryPoint, BaryPoint]:
    """Vertices in the same order (and orientation) as the reference triangle."""
    s = bounds_scale(b)
    return (BaryPoint((b[0] + s, b[1], b[2])),
            BaryPoint((b[0], b[1] + s, b[2])),
            BaryPoint((b[0], b[1], b[2] + s)))


# ---------------------------------------------------------------------------
# Lattices and Gamma_r
# ---------------------------------------------------------------------------


def principal_lattice(tri: Triangle, r: int) -> list[BaryPoint]:
    """Points ``alpha / r`` with ``|alpha| = r``, lexicographic in ``alpha``."""
    if r <= 0:
        raise ValueError("the lattice degree must be positive")
    return [BaryPoint(tuple(Fraction(a, r) for a in alpha)) for alpha in multi_indices(r)]


@dataclass(frozen=True)
class GammaSet:
    points: tuple[BaryPoint, ...]
    r: int

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def problems(self) -> list[str]:
        """Violations of the invariants (empty when the set is admissible)."""
        out = []
        if len(self.points) != self.r * (self.r - 1) // 2:
            out.append(f"cardinality {len(self.points)} != {self.r * (self.r - 1) // 2}")
        lattice = set(principal_lattice(UNIT_TRIANGLE, self.r))
        for p in self.points:
            if p not in lattice:
                out.append(f"{p} is not in L_{self.r}")
            if p[0] <= 0:
                out.append(f"{p} has l0 <= 0")
        if len(set(self.points)) != len(self.points):
            out.append("repeated points")
        return out


def gamma_set(r: int) -> GammaSet:
    """The recursive poised set: ``Gamma_2 = {(1,0,0)}``, then
    ``Gamma_r = tau_{zeta_r}(Gamma_{r-1}) | Delta_r``.
    """
    if r < 2:
        raise ValueError("Gamma_r is defined for r >= 2")
    pts = [BaryPoint.of(1, 0, 0)]
    for s in range(3, r + 1):
        if s % 2:
            zeta = BaryPoint.of(Fraction(s - 1, s), 0, Fraction(1, s))
            delta = [BaryPoint.of(Fraction(i, s), Fraction(s - i, s), 0)
                     for i in range(1, s + 1) if 2 * i != s + 1]
        else:
            zeta = BaryPoint.of(Fraction(s - 1, s), Fraction(1, s), 0)
            delta = [BaryPoint.of(Fraction(i, s), 0, Fraction(s - i, s))
                     for i in range(1, s + 1) if 2 * i != s]
        # tau_zeta in barycentric form: l -> zeta0 * l + (0, zeta1, zeta2)
        moved = [BaryPoint((zeta[0] * p[0], zeta[0] * p[1] + zeta[1], zeta[0] * p[2] + zeta[2]))
                 for p in pts]
        pts = moved + delta
    return GammaSet(tuple(pts), r)


def certify_poised(points: Sequence[BaryPoint], degree: int) -> bool:
    """True iff no nonzero polynomial of `degree` vanishes on `points`.

    The number of points must equal ``dim P_degree``; the check is an exact
    rank computation on the evaluation matrix of the monomials ``l**alpha``,
    ``|alpha| = degree``.
    """
    basis = multi_indices(degree)
    if len(points) != len(basis):
        raise ValueError(f"need {len(basis)} points for degree {degree}, got {len(points)}")
    mat = []
    for p in points:
        row = []
        for alpha in basis:
            v = Fraction(1)
            for i, a in enumerate(alpha):
                v *= p[i] ** a
            row.append(v)
        mat.append(row)
    return rank(mat) == len(basis)


# ---------------------------------------------------------------------------
# Cells
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Cell:
    """A point, an oriented segment, or a polygonal 2-cell.

    A 2-cell stores ``pieces``: bound triples with integer multiplicities such
    that its indicator equals ``sum(c * 1[triangle(b)])`` almost everywhere,
    together with its boundary ``polygon`` (counterclockwise in Cartesian
    coordinates).  ``anchor`` and ``subtracted`` record the base point
    ``xi_i`` and the set ``Gamma_r(i)`` when the cell comes from Gamma_r.
    """

    dim: int
    points: tuple[BaryPoint, ...] = ()
    pieces: tuple[tuple[Bounds, int], ...] = ()
    anchor: BaryPoint | None = None
    subtracted: tuple[BaryPoint, ...] = field(default=(), compare=False)

    @property
    def polygon(self) -> tuple[BaryPoint, ...]:
        if self.dim != 2:
            raise AttributeError("only 2-cells have a polygon")
        return self.points

    @property
    def area_fraction(self) -> Fraction:
        """Area divided by the area of the reference triangle."""
        return sum((c * bounds_scale(b) ** 2 for b, c in self.pieces), Fraction(0))

    def area(self, tri: Triangle) -> Fraction:
        return self.area_fraction * tri.area

    def length(self, tri: Triangle) -> float:
        (ax, ay), (bx, by) = (tri.to_cart(p) for p in self.points)
        return float(((bx - ax) ** 2 + (by - ay) ** 2)) ** 0.5

    def shoelace_area(self, tri: Triangle) -> Fraction:
        pts = [tri.to_cart(p) for p in self.polygon]
        s = Fraction(0)
        for (x0, y0), (x1, y1) in zip(pts, pts[1:] + pts[:1]):
            s += x0 * y1 - x1 * y0
        return s / 2


def overlap_fraction(a: Cell, b: Cell) -> Fraction:
    """Exact area of ``a & b`` relative to the reference triangle.

    Uses ``1[a] * 1[b] = sum c_P c_Q 1[P & Q]`` on the piece expansions.
    """
    total = Fraction(0)
    for pb, pc in a.pieces:
        for qb, qc in b.pieces:
            s = bounds_scale(intersect_bounds(pb, qb))
            if s > 0:
                total += pc * qc * s * s
    return total


def _union_pieces(items: Iterable[Bounds]) -> dict[Bounds, int]:
    """Inclusion-exclusion coefficients for the union of homothetic triangles.

    Intersections depend only on the componentwise maximum of the bounds, so
    the signed subset sum is accumulated per distinct maximum; degenerate
    intersections are dropped as soon as they appear.
    """
    union: dict[Bounds, int] = {}
    for item in items:
        if bounds_scale(item) <= 0:
            continue
        new = dict(union)
        new[item] = new.get(item, 0) + 1
        for b, c in union.items():
            m = intersect_bounds(b, item)
            if bounds_scale(m) > 0:
                new[m] = new.get(m, 0) - c
        union = {b: c for b, c in new.items() if c}
    return union


def _staircase_polygon(base: Bounds, cuts: Sequence[Bounds]) -> list[tuple[Fraction, Fraction]]:
    """Boundary, counterclockwise in the ``(l1, l2)`` plane, of
    ``triangle(base)`` minus the union of ``triangle(c)`` for ``c in cuts``.

    Every cut is already intersected with the base and has ``l0``-bound equal
    to the base's, so the remainder is a staircase under ``l2 = f(l1)``.
    """
    a, b = base[1], base[2]
    top = 1 - base[0]
    steps = [(c[1], c[2]) for c in cuts]

    def h(x, strict=False):
        ys = [y for (xj, y) in steps if (xj < x if strict else xj <= x)]
        return min(ys) if ys else None

    def f(x, left=False):
        hv = h(x, strict=left)
        line = top - x
        return line if hv is None else min(hv, line)

    x_end = top - b
    for xj, yj in steps:
        if yj <= b:
            x_end = min(x_end, xj)
    breaks = {a, x_end}
    for xj, yj in steps:
        for x in (xj, top - yj):
            if a < x < x_end:
                breaks.add(x)
    xs = sorted(breaks)
    upper: list[tuple[Fraction, Fraction]] = [(a, f(a))]
    for x in xs[1:-1]:
        fl, fr = f(x, left=True), f(x)
        upper.append((x, fl))
        if fr != fl:
            upper.append((x, fr))
    upper.append((x_end, f(x_end, left=True)))
    loop = [(a, b), (x_end, b)] + upper[::-1]
    return _simplify_loop(loop)


def _simplify_loop(loop: list) -> list:
    pts = []
    for p in loop:
        if not pts or pts[-1] != p:
            pts.append(p)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) > 3:
        changed = False
        for i in range(len(pts)):
            p, q, s = pts[i - 1], pts[i], pts[(i + 1) % len(pts)]
            cross = (q[0] - p[0]) * (s[1] - p[1]) - (q[1] - p[1]) * (s[0] - p[0])
            if cross == 0:
                del pts[i]
                changed = True
                break
    return pts


def make_cell(tri: Triangle, base: Bounds, cuts: Sequence[Bounds], anchor: BaryPoint | None = None,
              subtracted: Sequence[BaryPoint] = ()) -> Cell:
    """Closure of ``triangle(base)`` minus the union of ``triangle(c)``."""
    clipped = [intersect_bounds(base, c) for c in cuts]
    clipped = [c for c in clipped if bounds_scale(c) > 0]
    pieces: dict[Bounds, int] = {base: 1}
    for b, c in _union_pieces(clipped).items():
        pieces[b] = pieces.get(b, 0) - c
    pieces = {b: c for b, c in pieces.items() if c}
    loop = _staircase_polygon(base, clipped) if clipped else None
    if loop is None:
        poly = list(bounds_vertices(base))
    else:
        poly = [BaryPoint((1 - x - y, x, y)) for x, y in loop]
    if tri.orientation < 0:
        poly = poly[::-1]
    return Cell(2, tuple(poly), tuple(sorted(pieces.items())), anchor, tuple(subtracted))


def build_cells(tri: Triangle, r: int, gamma: GammaSet | Sequence[BaryPoint] | None = None) -> list[Cell]:
    """The 2-cells ``closure(tau_{xi_i}(T) minus U{tau_xi(T) : l0(xi) < l0(xi_i)})``."""
    if r < 2:
        raise ValueError("cells are defined for r >= 2")
    pts = list(gamma if gamma is not None else gamma_set(r))
    cells = []
    for i, xi in enumerate(pts):
        if xi[0] <= 0:
            raise CellConstructionError(f"cell {i}: l0({xi}) <= 0 makes tau degenerate")
        sub = [p for p in pts if p[0] < xi[0]]
        cell = make_cell(tri, tau_bounds(xi), [tau_bounds(p) for p in sub], xi, sub)
        if cell.area_fraction <= 0:
            raise CellConstructionError(f"cell {i} anchored at {xi} has zero area")
        cells.append(cell)
    return cells


def _edge_key(p: BaryPoint, q: BaryPoint) -> tuple[BaryPoint, BaryPoint]:
    return (p, q) if p.lambdas < q.lambdas else (q, p)


def small_simplices(tri: Triangle, r: int, k: int) -> list[Cell]:
    """Sub-simplices of dimension `k` of the small triangles ``z_alpha(T)``.

    Edges are oriented from the lexicographically smaller endpoint and the
    list is sorted; duplicates are merged on exact vertex equality.
    """
    if r < 1:
        raise ValueError("r must be positive")
    if k == 0:
        return [Cell(0, (p,)) for p in principal_lattice(tri, r)]
    tris = [tuple(Fraction(a, r) for a in alpha) for alpha in multi_indices(r - 1)]
    if k == 2:
        out = []
        for b in tris:
            poly = list(bounds_vertices(b))
            if tri.orientation < 0:
                poly = poly[::-1]
            out.append(Cell(2, tuple(poly), ((b, 1),)))
        return out
    if k == 1:
        edges = set()
        for b in tris:
            v = bounds_vertices(b)
            for i, j in ((0, 1), (1, 2), (0, 2)):
                edges.add(_edge_key(v[i], v[j]))
        return [Cell(1, e) for e in sorted(edges, key=lambda e: (e[0].lambdas, e[1].lambdas))]
    raise ValueError("k must be 0, 1 or 2")


def _unit_pieces(u: BaryPoint, v: BaryPoint, r: int) -> list[tuple[BaryPoint, BaryPoint]] | None:
    """Split the side ``u -> v`` into consecutive lattice steps of length 1/r."""
    diff = [v[i] - u[i] for i in range(3)]
    n = max(abs(d) for d in diff) * r
    if n.denominator != 1 or n == 0:
        return None
    n = int(n)
    pts = [BaryPoint(tuple(u[i] + diff[i] * Fraction(t, n) for i in range(3))) for t in range(n + 1)]
    return list(zip(pts, pts[1:]))


# ---------------------------------------------------------------------------
# The complex of weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DofComplex:
    """Cells ``F0, F1, F2`` with their incidence matrices.

    ``boundary1`` has shape ``(|F0|, |F1|)``, ``boundary2`` has shape
    ``(|F1|, |F2|)``; both are integer arrays built on first access.
    """

    tri: Triangle
    r: int
    F0: tuple[BaryPoint, ...]
    F1: tuple[Cell, ...]
    F2: tuple[Cell, ...]

    @cached_property
    def _vertex_index(self) -> dict[BaryPoint, int]:
        return {p: i for i, p in enumerate(self.F0)}

    @cached_property
    def _edge_index(self) -> dict[tuple[BaryPoint, BaryPoint], int]:
        return {_edge_key(*e.points): i for i, e in enumerate(self.F1)}

    @property
    def counts(self) -> tuple[int, int, int]:
        return len(self.F0), len(self.F1), len(self.F2)

    @property
    def euler(self) -> int:
        n0, n1, n2 = self.counts
        return n0 - n1 + n2

    def cells(self, k: int) -> list:
        if k == 0:
            return [Cell(0, (p,)) for p in self.F0]
        return list(self.F1 if k == 1 else self.F2)

    def cellular_violations(self) -> list[str]:
        """Reasons the union of cells fails to be a cellular complex."""
        out = []
        vi = self._vertex_index
        for j, e in enumerate(self.F1):
            for p in e.points:
                if p not in vi:
                    out.append(f"edge {j}: endpoint {p} not in F0")
        for c, cell in enumerate(self.F2):
            try:
                self._cell_boundary(c, cell)
            except CellularComplexError as exc:
                out.append(str(exc))
        return out

    def is_cellular(self) -> bool:
        return not self.cellular_violations()

    def _cell_boundary(self, c: int, cell: Cell) -> dict[int, int]:
        idx = self._edge_index
        col: dict[int, int] = {}
        poly = cell.polygon
        for u, v in zip(poly, poly[1:] + poly[:1]):
            pieces = _unit_pieces(u, v, self.r)
            if pieces is None:
                raise CellularComplexError(c, f"side {u} -> {v} is not on the lattice")
            for p, q in pieces:
                key = _edge_key(p, q)
                if key not in idx:
                    raise CellularComplexError(c, f"boundary segment {p} -> {q} is not in F1")
                sign = 1 if key == (p, q) else -1
                col[idx[key]] = col.get(idx[key], 0) + sign
        return col

    @cached_property
    def boundary1(self) -> np.ndarray:
        vi = self._vertex_index
        out = np.zeros((len(self.F0), len(self.F1)), dtype=np.int64)
        for j, e in enumerate(self.F1):
            a, b = e.points
            out[vi[a], j] -= 1
            out[vi[b], j] += 1
        return out

    @cached_property
    def boundary2(self) -> np.ndarray:
        out = np.zeros((len(self.F1), len(self.F2)), dtype=np.int64)
        for c, cell in enumerate(self.F2):
            for j, s in self._cell_boundary(c, cell).items():
                out[j, c] = s
        return out

    def coboundary(self, k: int) -> np.ndarray:
        """``delta_k = boundary_{k+1}^T``."""
        return (self.boundary1 if k == 0 else self.boundary2).T

    def without_edge(self, j: int) -> DofComplex:
        """Copy with the j-th 1-cell removed (negative control)."""
        f1 = self.F1[:j] + self.F1[j + 1:]
        return DofComplex(self.tri, self.r, self.F0, f1, self.F2)

    def paving_defect(self) -> Fraction:
        """``Area(T) - sum(area of 2-cells)``, relative to ``Area(T)``."""
        return 1 - sum((c.area_fraction for c in self.F2), Fraction(0))

    def max_overlap(self) -> Fraction:
        worst = Fraction(0)
        for i, a in enumerate(self.F2):
            for b in self.F2[i + 1:]:
                worst = max(worst, overlap_fraction(a, b))
        return worst


def build_complex(tri: Triangle, r: int, gamma: GammaSet | Sequence[BaryPoint] | None = None) -> DofComplex:
    """``F0 = L_r``, ``F2`` from Gamma_r, ``F1`` = small edges on 2-cell boundaries."""
    cells = build_cells(tri, r, gamma)
    on_boundary = set()
    for c, cell in enumerate(cells):
        poly = cell.polygon
        for u, v in zip(poly, poly[1:] + poly[:1]):
            pieces = _unit_pieces(u, v, r)
            if pieces is None:
                raise CellularComplexError(c, f"side {u} -> {v} is not on the lattice")
            on_boundary.update(_edge_key(p, q) for p, q in pieces)
    edges = [e for e in small_simplices(tri, r, 1) if _edge_key(*e.points) in on_boundary]
    cx = DofComplex(tri, r, tuple(principal_lattice(tri, r)), tuple(edges), tuple(cells))
    cx.boundary2  # raises CellularComplexError naming the offending cell
    log.debug("built complex r=%d counts=%s", r, cx.counts)
    return cx
