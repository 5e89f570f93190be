"""Exact polynomials in the barycentric coordinates of a triangle.

A :class:`BaryPolynomial` is a finite sum ``c * l0**a0 * l1**a1 * l2**a2`` with
:class:`fractions.Fraction` coefficients.  Because ``l0 + l1 + l2 = 1`` on the
plane, many formal polynomials describe the same function; equality and hashing
go through :meth:`BaryPolynomial.canonical`, which eliminates ``l0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import factorial
from typing import TYPE_CHECKING, Iterator, Mapping, Sequence

import numpy as np

if TYPE_CHECKING:
    from .geometry import AffineMap, Triangle

Rational = Fraction | int


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted in exact arithmetic; use Fraction")
    return Fraction(value)


@dataclass(frozen=True, order=True)
class MultiIndex:
    """Exponent triple ``(a0, a1, a2)`` of a barycentric monomial."""

    alpha: tuple[int, int, int]

    def __post_init__(self) -> None:
        if len(self.alpha) != 3 or any(a < 0 for a in self.alpha):
            raise ValueError(f"invalid multi-index {self.alpha!r}")
        object.__setattr__(self, "alpha", tuple(int(a) for a in self.alpha))

    @property
    def degree(self) -> int:
        return sum(self.alpha)

    def __iter__(self) -> Iterator[int]:
        return iter(self.alpha)

    def __getitem__(self, i: int) -> int:
        return self.alpha[i]


def multi_indices(degree: int, nvars: int = 3) -> list[tuple[int, ...]]:
    """All exponent tuples of length `nvars` summing to `degree`, lexicographic."""
    if degree < 0:
        return []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree + 1):
        for rest in multi_indices(degree - first, nvars - 1):
            out.append((first,) + rest)
    return out


@dataclass(frozen=True)
class BaryPoint:
    """A point of the plane in barycentric coordinates of the reference triangle."""

    lambdas: tuple[Fraction, Fraction, Fraction]

    def __post_init__(self) -> None:
        lam = tuple(_frac(v) for v in self.lambdas)
        if len(lam) != 3:
            raise ValueError("a barycentric point needs three coordinates")
        if sum(lam) != 1:
            raise ValueError(f"barycentric coordinates must sum to 1, got {lam}")
        object.__setattr__(self, "lambdas", lam)

    @classmethod
    def of(cls, *values) -> BaryPoint:
        return cls(tuple(_frac(v) for v in values))

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.lambdas)

    def __getitem__(self, i: int) -> Fraction:
        return self.lambdas[i]

    def __lt__(self, other: BaryPoint) -> bool:
        return self.lambdas < other.lambdas

    def inside(self) -> bool:
        return all(v >= 0 for v in self.lambdas)

    def __str__(self) -> str:
        return "(" + ", ".join(str(v) for v in self.lambdas) + ")"


class BaryPolynomial:
    """Polynomial in ``(l0, l1, l2)`` with exact rational coefficients.

    Parameters
    ----------
    terms : mapping
        Exponent triple (tuple or :class:`MultiIndex`) to coefficient.  Zero
        coefficients are dropped.
    degree : int, optional
        Declared degree bound; defaults to the largest total degree present.
    """

    __slots__ = ("_terms", "_degree", "_canon")

    def __init__(self, terms: Mapping | None = None, degree: int | None = None):
        clean: dict[tuple[int, int, int], Fraction] = {}
        for key, coeff in (terms or {}).items():
            alpha = key.alpha if isinstance(key, MultiIndex) else tuple(key)
            if len(alpha) != 3 or any(a < 0 for a in alpha):
                raise ValueError(f"invalid exponent {alpha!r}")
            c = _frac(coeff)
            if c:
                alpha = (int(alpha[0]), int(alpha[1]), int(alpha[2]))
                clean[alpha] = clean.get(alpha, Fraction(0)) + c
                if not clean[alpha]:
                    del clean[alpha]
        top = max((sum(a) for a in clean), default=0)
        if degree is None:
            degree = top
        elif degree < top:
            raise ValueError(f"declared degree {degree} below actual degree {top}")
        self._terms = clean
        self._degree = int(degree)
        self._canon = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def constant(cls, c: Rational) -> BaryPolynomial:
        return cls({(0, 0, 0): c})

    @classmethod
    def coordinate(cls, i: int) -> BaryPolynomial:
        alpha = [0, 0, 0]
        alpha[i] = 1
        return cls({tuple(alpha): 1})

    @classmethod
    def monomial(cls, alpha: Sequence[int], coeff: Rational = 1) -> BaryPolynomial:
        return cls({tuple(alpha): coeff})

    @classmethod
    def linear(cls, coeffs: Sequence[Rational]) -> BaryPolynomial:
        """``c0*l0 + c1*l1 + c2*l2``."""
        return cls({(1, 0, 0): coeffs[0], (0, 1, 0): coeffs[1], (0, 0, 1): coeffs[2]})

    # -- basic accessors ------------------------------------------------------

    @property
    def terms(self) -> dict[tuple[int, int, int], Fraction]:
        return dict(self._terms)

    @property
    def degree(self) -> int:
        return self._degree

    @property
    def actual_degree(self) -> int:
        return max((sum(a) for a in self._terms), default=0)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self.canonical()

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        if not self._terms:
            return "BaryPolynomial(0)"
        parts = []
        for alpha in sorted(self._terms):
            c = self._terms[alpha]
            mono = "*".join(
                f"l{i}" if a == 1 else f"l{i}^{a}" for i, a in enumerate(alpha) if a
            )
            parts.append(f"{c}" + (f"*{mono}" if mono else ""))
        return "BaryPolynomial(" + " + ".join(parts) + ")"

    # -- normal forms -----------------------------------------------------------

    def canonical(self) -> dict[tuple[int, int], Fraction]:
        """Coefficients in ``(l1, l2)`` after substituting ``l0 = 1 - l1 - l2``.

        Two polynomials define the same function on the plane iff their
        canonical forms agree.
        """
        if self._canon is None:
            out: dict[tuple[int, int], Fraction] = {}
            for (a0, a1, a2), c in self._terms.items():
                # (1 - l1 - l2)^a0 expanded by the multinomial theorem
                for i in range(a0 + 1):
                    for j in range(a0 - i + 1):
                        k = a0 - i - j
                        coef = _multinomial(a0, (i, j, k))
                        sign = -1 if (j + k) % 2 else 1
                        key = (a1 + j, a2 + k)
                        out[key] = out.get(key, Fraction(0)) + sign * coef * c
            self._canon = {k: v for k, v in out.items() if v}
        return dict(self._canon)

    def homogenize(self, degree: int | None = None) -> BaryPolynomial:
        """Equivalent polynomial whose terms all have total degree `degree`.

        Lower-degree terms are multiplied by ``(l0 + l1 + l2)**m``, which is
        the identity on the plane.
        """
        if degree is None:
            degree = self._degree
        if degree < self.actual_degree:
            raise ValueError("cannot homogenize below the actual degree")
        out: dict[tuple[int, int, int], Fraction] = {}
        for alpha, c in self._terms.items():
            m = degree - sum(alpha)
            for beta in multi_indices(m):
                coef = c * _multinomial(m, beta)
                key = (alpha[0] + beta[0], alpha[1] + beta[1], alpha[2] + beta[2])
                out[key] = out.get(key, Fraction(0)) + coef
        return BaryPolynomial(out, degree)

    def dehomogenize(self) -> BaryPolynomial:
        """Equivalent polynomial in ``l1, l2`` only (the canonical form)."""
        return BaryPolynomial(
            {(0, a1, a2): c for (a1, a2), c in self.canonical().items()}, self._degree
        )

    def homogeneous_coordinates(self, degree: int) -> dict[tuple[int, int, int], Fraction]:
        """Coefficients against the monomials ``l**alpha`` with ``|alpha| = degree``."""
        return self.homogenize(degree).terms

    # -- ring operations ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = BaryPolynomial.constant(other)
        if not isinstance(other, BaryPolynomial):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self) -> int:
        return hash(frozenset(self.canonical().items()))

    def __add__(self, other) -> BaryPolynomial:
        if isinstance(other, (int, Fraction)):
            other = BaryPolynomial.constant(other)
        if not isinstance(other, BaryPolynomial):
            return NotImplemented
        out = dict(self._terms)
        for alpha, c in other._terms.items():
            out[alpha] = out.get(alpha, Fraction(0)) + c
        return BaryPolynomial(out, max(self._degree, other._degree))

    __radd__ = __add__

    def __neg__(self) -> BaryPolynomial:
        return BaryPolynomial({a: -c for a, c in self._terms.items()}, self._degree)

    def __sub__(self, other) -> BaryPolynomial:
        return self + (-other)

    def __rsub__(self, other) -> BaryPolynomial:
        return (-self) + other

    def __mul__(self, other) -> BaryPolynomial:
        if isinstance(other, (int, Fraction)):
            c = _frac(other)
            return BaryPolynomial({a: c * v for a, v in self._terms.items()}, self._degree)
        if not isinstance(other, BaryPolynomial):
            return NotImplemented
        out: dict[tuple[int, int, int], Fraction] = {}
        for a, c in self._terms.items():
            for b, d in other._terms.items():
                key = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
                out[key] = out.get(key, Fraction(0)) + c * d
        return BaryPolynomial(out, self._degree + other._degree)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> BaryPolynomial:
        if n < 0:
            raise ValueError("negative powers are not polynomials")
        result = BaryPolynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: Rational) -> BaryPolynomial:
        return self * _frac(c)

    def with_degree(self, degree: int) -> BaryPolynomial:
        return BaryPolynomial(self._terms, degree)

    # -- calculus -------------------------------------------------------------

    def partial(self, i: int) -> BaryPolynomial:
        """Formal derivative with respect to ``l_i``."""
        out: dict[tuple[int, int, int], Fraction] = {}
        for alpha, c in self._terms.items():
            if alpha[i]:
                beta = list(alpha)
                beta[i] -= 1
                out[tuple(beta)] = out.get(tuple(beta), Fraction(0)) + c * alpha[i]
        return BaryPolynomial(out, max(self._degree - 1, 0))

    # -- evaluation -----------------------------------------------------------

    def __call__(self, pt) -> Fraction:
        return evaluate(self, pt)

    def substitute(self, columns: Sequence[Sequence[Rational]]) -> dict[tuple[int, ...], Fraction]:
        """Substitute ``l_i = sum_j columns[i][j] * mu_j``.

        Returns the expanded polynomial in the new variables ``mu`` as a
        dict of exponent tuples (length ``len(columns[0])``).
        """
        nnew = len(columns[0])
        lin = [{_unit(j, nnew): _frac(columns[i][j]) for j in range(nnew) if columns[i][j]}
               for i in range(3)]
        powers: list[list[dict]] = [[{(0,) * nnew: Fraction(1)}] for _ in range(3)]
        out: dict[tuple[int, ...], Fraction] = {}
        for alpha, c in self._terms.items():
            acc = {(0,) * nnew: c}
            for i, a in enumerate(alpha):
                if not a:
                    continue
                while len(powers[i]) <= a:
                    powers[i].append(_dict_mul(powers[i][-1], lin[i]))
                acc = _dict_mul(acc, powers[i][a])
            for key, v in acc.items():
                out[key] = out.get(key, Fraction(0)) + v
        return {k: v for k, v in out.items() if v}

    def numeric(self) -> tuple[np.ndarray, np.ndarray]:
        """Exponent array (n, 3) and float coefficient array (n,)."""
        if not self._terms:
            return np.zeros((1, 3), dtype=np.int64), np.zeros(1)
        keys = sorted(self._terms)
        return (np.array(keys, dtype=np.int64),
                np.array([float(self._terms[k]) for k in keys]))


def _unit(j: int, n: int) -> tuple[int, ...]:
    e = [0] * n
    e[j] = 1
    return tuple(e)


def _dict_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ka, va in a.items():
        for kb, vb in b.items():
            key = tuple(x + y for x, y in zip(ka, kb))
            out[key] = out.get(key, Fraction(0)) + va * vb
    return out


@lru_cache(maxsize=None)
def _multinomial(n: int, parts: tuple[int, ...]) -> int:
    out = factorial(n)
    for p in parts:
        out //= factorial(p)
    return out


def evaluate(p: BaryPolynomial, pt) -> Fraction:
    """Exact value of `p` at a :class:`BaryPoint` (or any triple summing to 1)."""
    lam = tuple(pt.lambdas) if isinstance(pt, BaryPoint) else tuple(_frac(v) for v in pt)
    if sum(lam) != 1:
        raise ValueError("evaluation point must satisfy l0 + l1 + l2 = 1")
    pw = [[Fraction(1)] for _ in range(3)]
    total = Fraction(0)
    for alpha, c in p.items():
        term = c
        for i, a in enumerate(alpha):
            while len(pw[i]) <= a:
                pw[i].append(pw[i][-1] * lam[i])
            term *= pw[i][a]
        total += term
    return total


def evaluate_many(p: BaryPolynomial, lambdas: np.ndarray) -> np.ndarray:
    """Float values of `p` at an ``(n, 3)`` array of barycentric coordinates."""
    exps, coeffs = p.numeric()
    lam = np.asarray(lambdas, dtype=float)
    return np.prod(lam[:, None, :] ** exps[None, :, :], axis=2) @ coeffs


def simplex_monomial_integral(beta: Sequence[int]) -> Fraction:
    """Integral of ``mu**beta`` over a d-simplex divided by ``d! * volume``.

    With ``d = len(beta) - 1`` this is ``prod(beta_i!) / (|beta| + d)!``.
    """
    d = len(beta) - 1
    num = 1
    for b in beta:
        num *= factorial(b)
    return Fraction(num, factorial(sum(beta) + d))


def integrate_over_simplex(p: BaryPolynomial, vertices: Sequence[BaryPoint | Sequence],
                           measure: Rational) -> Fraction:
    """Exact integral of `p` over the simplex spanned by `vertices`.

    `vertices` are given in barycentric coordinates of the reference triangle
    and `measure` is the simplex's length (d = 1) or area (d = 2).  For d = 1
    with ``measure = 1`` the result is the integral against the unit-speed
    parameter ``t`` in ``[0, 1]``, which is what line integrals of forms need.
    """
    d = len(vertices) - 1
    cols = [[_frac(v[i]) for v in vertices] for i in range(3)]
    expanded = p.substitute(cols)
    total = Fraction(0)
    for beta, c in expanded.items():
        total += c * simplex_monomial_integral(beta)
    return total * factorial(d) * _frac(measure)


def integrate_monomial_over_triangle(alpha, tri: Triangle, ambient: Triangle | None = None) -> Fraction:
    """Exact ``\\int_tri l**alpha dA``.

    The barycentric coordinates ``l`` belong to `ambient` (default: `tri`
    itself); `tri` is any non-degenerate triangle of the plane.
    """
    ambient = ambient or tri
    area = abs(tri.signed_area)
    if area == 0:
        raise ValueError("zero-area domain")
    alpha = alpha.alpha if isinstance(alpha, MultiIndex) else tuple(alpha)
    verts = [ambient.to_bary(v) for v in tri.vertices]
    return integrate_over_simplex(BaryPolynomial.monomial(alpha), verts, area)


def affine_pullback(p: BaryPolynomial, amap: AffineMap) -> BaryPolynomial:
    """The polynomial ``p o amap`` expressed again in barycentric coordinates.

    If ``l(amap(x)) = M l(x)`` then the pullback substitutes ``l_i -> (M l)_i``;
    total degree is preserved.
    """
    M = amap.bary_matrix()
    expanded = p.substitute(M)
    return BaryPolynomial(expanded, p.degree)


def all_exponents(max_degree: int) -> list[tuple[int, int, int]]:
    """Exponents with ``|alpha| <= max_degree`` (handy for random polynomials)."""
    return [a for a in product(range(max_degree + 1), repeat=3) if sum(a) <= max_degree]
