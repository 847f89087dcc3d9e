"""Uniform asymptotic evaluation of Laguerre polynomials of large degree.

The package evaluates L_n^(alpha)(uz) and U(n+alpha+1, alpha+1, uz e^(-+pi i)),
u = n + 1/2, by Liouville-Green and Airy-type expansions, and ships a
direct-summation oracle to check them.
"""

from .numeric import PrecisionContext, ScaledComplex, default_bits, scaled_exp
from .liouville import ShapeParams, make_params, region_check
from .coefficients import CoefficientTable
from .airy import airy
from .expansions import (
    CauchyContour,
    EvalOptions,
    ExpansionResult,
    TruncationOrders,
    evaluate,
    evaluate_u,
)
from .estimator import LaguerreExpansion

__all__ = [
    "CauchyContour",
    "CoefficientTable",
    "EvalOptions",
    "ExpansionResult",
    "LaguerreExpansion",
    "PrecisionContext",
    "ScaledComplex",
    "ShapeParams",
    "TruncationOrders",
    "airy",
    "default_bits",
    "evaluate",
    "evaluate_u",
    "make_params",
    "region_check",
    "scaled_exp",
]

__version__ = "0.1.0"
