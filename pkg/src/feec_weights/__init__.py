"""Weights on triangles: cells from poised sets, generalized Vandermonde
matrices, weight interpolation and the commuting de Rham diagram."""

from ._kernels import BACKEND
from .barypoly import BaryPoint, BaryPolynomial, evaluate, integrate_over_simplex, multi_indices
from .forms import PolyForm, basis, exterior_derivative, monomial_basis, random_form, space_dim
from .geometry import (UNIT_TRIANGLE, AffineMap, Cell, CellConstructionError, CellularComplexError,
                       DofComplex, GammaSet, Triangle, build_cells, build_complex, certify_poised,
                       gamma_set, principal_lattice, small_simplices)
from .interp import (Interpolant, NormEstimate, check_commuting, convergence_experiment, interpolate,
                     verify_all, zero_norm)
from .linalg import SingularMatrixError, cond2, rank, solve
from .weights import WeightMatrix, de_rham_matrix, vandermonde, weight, weight_numeric

__all__ = [
    "BACKEND", "BaryPoint", "BaryPolynomial", "evaluate", "integrate_over_simplex", "multi_indices",
    "PolyForm", "basis", "exterior_derivative", "monomial_basis", "random_form", "space_dim",
    "UNIT_TRIANGLE", "AffineMap", "Cell", "CellConstructionError", "CellularComplexError", "DofComplex",
    "GammaSet", "Triangle", "build_cells", "build_complex", "certify_poised", "gamma_set",
    "principal_lattice", "small_simplices", "Interpolant", "NormEstimate", "check_commuting",
    "convergence_experiment", "interpolate", "verify_all", "zero_norm", "SingularMatrixError", "cond2",
    "rank", "solve", "WeightMatrix", "de_rham_matrix", "vandermonde", "weight", "weight_numeric",
]
