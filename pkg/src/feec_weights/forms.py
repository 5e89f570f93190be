"""Polynomial differential forms on a triangle and the exterior derivative."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .barypoly import BaryPolynomial, multi_indices
from .geometry import UNIT_TRIANGLE, Triangle

_NCOMP = {0: 1, 1: 2, 2: 1}


def space_dim(r: int, k: int) -> int:
    """Dimension of ``P_{r-k} Lambda^k`` on a triangle."""
    if k not in (0, 1, 2):
        raise ValueError("k must be 0, 1 or 2")
    if r - k < 0:
        raise ValueError(f"polynomial degree r - k = {r - k} is negative")
    return comb(r - k + 2, 2) * comb(2, k)


@dataclass(frozen=True)
class SpaceDescriptor:
    r: int
    k: int

    @property
    def degree(self) -> int:
        return self.r - self.k

    @property
    def dim(self) -> int:
        return space_dim(self.r, self.k)


@dataclass(frozen=True, eq=False)
class PolyForm:
    """A k-form with polynomial coefficients in Cartesian frame components.

    ``components`` holds one polynomial for k = 0 and k = 2 (the coefficient
    of ``dx^dy``) and two for k = 1 (coefficients of ``dx`` and ``dy``).
    """

    k: int
    components: tuple[BaryPolynomial, ...]
    tri: Triangle = UNIT_TRIANGLE
    label: str = ""

    def __post_init__(self) -> None:
        if self.k not in _NCOMP:
            raise ValueError("k must be 0, 1 or 2")
        if len(self.components) != _NCOMP[self.k]:
            raise ValueError(f"a {self.k}-form needs {_NCOMP[self.k]} components")

    @classmethod
    def zero(cls, k: int, tri: Triangle = UNIT_TRIANGLE) -> PolyForm:
        return cls(k, tuple(BaryPolynomial() for _ in range(_NCOMP[k])), tri)

    @property
    def degree(self) -> int:
        return max(c.degree for c in self.components)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self.k == other.k and all(a == b for a, b in zip(self.components, other.components))

    def __hash__(self) -> int:
        return hash((self.k,) + tuple(hash(c) for c in self.components))

    def _check(self, other: PolyForm) -> None:
        if self.k != other.k:
            raise ValueError("forms of different degree")

    def __add__(self, other: PolyForm) -> PolyForm:
        self._check(other)
        return PolyForm(self.k, tuple(a + b for a, b in zip(self.components, other.components)), self.tri)

    def __sub__(self, other: PolyForm) -> PolyForm:
        self._check(other)
        return PolyForm(self.k, tuple(a - b for a, b in zip(self.components, other.components)), self.tri)

    def __neg__(self) -> PolyForm:
        return PolyForm(self.k, tuple(-a for a in self.components), self.tri)

    def __mul__(self, c) -> PolyForm:
        c = Fraction(c)
        return PolyForm(self.k, tuple(a * c for a in self.components), self.tri)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __repr__(self) -> str:
        return self.label or f"PolyForm(k={self.k}, {self.components})"


def linear_combination(coeffs: Sequence, forms: Sequence[PolyForm]) -> PolyForm:
    if not forms:
        raise ValueError("empty basis")
    k, tri = forms[0].k, forms[0].tri
    comps = [dict() for _ in range(_NCOMP[k])]
    for c, f in zip(coeffs, forms):
        c = Fraction(c)
        if not c:
            continue
        for acc, p in zip(comps, f.components):
            for a, v in p.items():
                acc[a] = acc.get(a, Fraction(0)) + c * v
    return PolyForm(k, tuple(BaryPolynomial(t) for t in comps), tri)


def _label(alpha) -> str:
    return "".join(f"l{i}^{a}" for i, a in enumerate(alpha) if a) or "1"


def monomial_basis(degree: int, k: int, tri: Triangle = UNIT_TRIANGLE) -> list[PolyForm]:
    """Barycentric monomial basis of ``P_degree Lambda^k``.

    k = 0: ``l**a``; k = 1: ``l**a dx`` then ``l**a dy``; k = 2: ``l**a dx^dy``;
    always ``|a| = degree`` with lexicographic ``a`` inside each block.
    """
    if degree < 0:
        raise ValueError("negative polynomial degree")
    alphas = multi_indices(degree)
    zero = BaryPolynomial(degree=degree)
    if k == 0:
        return [PolyForm(0, (BaryPolynomial.monomial(a),), tri, _label(a)) for a in alphas]
    if k == 1:
        dx = [PolyForm(1, (BaryPolynomial.monomial(a), zero), tri, _label(a) + " dx") for a in alphas]
        dy = [PolyForm(1, (zero, BaryPolynomial.monomial(a)), tri, _label(a) + " dy") for a in alphas]
        return dx + dy
    if k == 2:
        return [PolyForm(2, (BaryPolynomial.monomial(a),), tri, _label(a) + " dx^dy") for a in alphas]
    raise ValueError("k must be 0, 1 or 2")


def cartesian_basis(degree: int, k: int, tri: Triangle = UNIT_TRIANGLE) -> list[PolyForm]:
    """Basis ``x**i * y**j`` (``i + j <= degree``) of ``P_degree Lambda^k``.

    Ordered by total degree, then by decreasing power of x.  This is the
    basis whose Vandermonde conditioning is tabulated for the unit triangle.
    """
    X, Y = tri.coordinate_polys
    xpow = [BaryPolynomial.constant(1)]
    ypow = [BaryPolynomial.constant(1)]
    for _ in range(degree):
        xpow.append(xpow[-1] * X)
        ypow.append(ypow[-1] * Y)
    monos = []
    for d in range(degree + 1):
        for i in range(d, -1, -1):
            monos.append(((xpow[i] * ypow[d - i]).with_degree(degree), f"x^{i}y^{d - i}"))
    zero = BaryPolynomial(degree=degree)
    if k == 0:
        return [PolyForm(0, (p,), tri, s) for p, s in monos]
    if k == 1:
        return ([PolyForm(1, (p, zero), tri, s + " dx") for p, s in monos]
                + [PolyForm(1, (zero, p), tri, s + " dy") for p, s in monos])
    if k == 2:
        return [PolyForm(2, (p,), tri, s + " dx^dy") for p, s in monos]
    raise ValueError("k must be 0, 1 or 2")


def basis(r: int, k: int, tri: Triangle = UNIT_TRIANGLE, kind: str = "barycentric") -> list[PolyForm]:
    """Basis of ``P_{r-k} Lambda^k`` (the k-th space of the degree-r sequence)."""
    if kind == "barycentric":
        return monomial_basis(r - k, k, tri)
    if kind == "cartesian":
        return cartesian_basis(r - k, k, tri)
    raise ValueError(f"unknown basis kind {kind!r}")


def _d(p: BaryPolynomial, tri: Triangle, axis: int) -> BaryPolynomial:
    g = tri.grad_lambda
    out = BaryPolynomial(degree=max(p.degree - 1, 0))
    for i in range(3):
        if g[i][axis]:
            out = out + p.partial(i) * g[i][axis]
    return out.with_degree(max(p.degree - 1, 0))


def exterior_derivative(omega: PolyForm) -> PolyForm:
    """``d`` of a 0- or 1-form; partials use the exact gradients of ``l_i``."""
    tri = omega.tri
    if omega.k == 0:
        (p,) = omega.components
        return PolyForm(1, (_d(p, tri, 0), _d(p, tri, 1)), tri)
    if omega.k == 1:
        px, py = omega.components
        return PolyForm(2, (_d(py, tri, 0) - _d(px, tri, 1),), tri)
    raise ValueError("the exterior derivative of a 2-form on a triangle is not defined here")


def coordinates(omega: PolyForm, degree: int) -> list[Fraction]:
    """Coefficients of `omega` against :func:`monomial_basis` ``(degree, k)``."""
    alphas = multi_indices(degree)
    out = []
    for comp in omega.components:
        h = comp.homogeneous_coordinates(degree)
        out.extend(h.get(a, Fraction(0)) for a in alphas)
    return out


def derivative_matrix(r: int, k: int, tri: Triangle = UNIT_TRIANGLE) -> list[list[Fraction]]:
    """Matrix of ``d: P_{r-k} Lambda^k -> P_{r-k-1} Lambda^{k+1}`` in monomial bases."""
    src = monomial_basis(r - k, k, tri)
    cols = [coordinates(exterior_derivative(f), r - k - 1) for f in src]
    return [[cols[j][i] for j in range(len(cols))] for i in range(len(cols[0]))]


def random_form(degree: int, k: int, rng, tri: Triangle = UNIT_TRIANGLE, bound: int = 9) -> PolyForm:
    """A form in ``P_degree Lambda^k`` with random small rational coefficients.

    `rng` is a :class:`random.Random`; numerators lie in ``[-bound, bound]``
    and denominators in ``[1, bound]``.
    """
    forms = monomial_basis(degree, k, tri)
    coeffs = [Fraction(rng.randint(-bound, bound), rng.randint(1, bound)) for _ in forms]
    return linear_combination(coeffs, forms)
