"""Spectral multipliers of invariant Toeplitz operators on the unit ball and Siegel domain."""

__version__ = "0.1.0"

from .errors import (
    DegenerateInputError,
    DivergenceError,
    DomainError,
    MMToeplitzError,
    NearBoundaryWarning,
    SymbolArityError,
    SymbolBoundError,
    SymbolError,
    SymbolEvalError,
    SymbolSyntaxError,
)
from .quadrature import QuadratureSpec, integrate_ball, integrate_h_weighted, integrate_rr
from .special import MultiIndex, c_lambda, dirichlet_integral, multi_indices, pochhammer, romanovski_total
from .spectra import (
    GammaTable,
    gamma_hyperbolic,
    gamma_qe,
    gamma_qh,
    gamma_qh_h0,
    gamma_table,
)
from .symbols import SymbolSpec, parse

__all__ = [
    "DegenerateInputError",
    "DivergenceError",
    "DomainError",
    "GammaTable",
    "MMToeplitzError",
    "MultiIndex",
    "NearBoundaryWarning",
    "QuadratureSpec",
    "SymbolArityError",
    "SymbolBoundError",
    "SymbolError",
    "SymbolEvalError",
    "SymbolSpec",
    "SymbolSyntaxError",
    "c_lambda",
    "dirichlet_integral",
    "gamma_hyperbolic",
    "gamma_qe",
    "gamma_qh",
    "gamma_qh_h0",
    "gamma_table",
    "integrate_ball",
    "integrate_h_weighted",
    "integrate_rr",
    "multi_indices",
    "parse",
    "pochhammer",
    "romanovski_total",
]
