"""Minimax rational approximation with denominator bounds, applied to matrix functions."""

from ratmin.cheb import Domain, cheb_nodes, chebyshev_grid, equidistant_grid
from ratmin.rational import BoundSpec, RationalApproximant, denominator_change, uniform_error, verify_bounds
from ratmin.lp import LinearProgram, LpOutcome, solve_lp
from ratmin.minimax import FitProblem, FitReport, fit
from ratmin.matfun import (
    MatApplyReport,
    SpectrumSpec,
    cond_check,
    frobenius_rel_error,
    make_normal_matrix,
    matrix_cheb_poly,
    matrix_cheb_poly_vec,
    rational_apply,
    rational_apply_vec,
)

__version__ = "0.1.0"

__all__ = [
    "BoundSpec",
    "Domain",
    "FitProblem",
    "FitReport",
    "LinearProgram",
    "LpOutcome",
    "MatApplyReport",
    "RationalApproximant",
    "SpectrumSpec",
    "cheb_nodes",
    "chebyshev_grid",
    "cond_check",
    "denominator_change",
    "equidistant_grid",
    "fit",
    "frobenius_rel_error",
    "make_normal_matrix",
    "matrix_cheb_poly",
    "matrix_cheb_poly_vec",
    "rational_apply",
    "rational_apply_vec",
    "solve_lp",
    "uniform_error",
    "verify_bounds",
]
