"""
Exact construction and verification of Gauss generators for the quantum
groups SL_q(n), GL_{p,q}(2) and the dual sl*(2) realisation.

Arithmetic is exact throughout: Laurent polynomials over the integers for
coefficients, a normal-form engine for the operator algebra, and zero
tolerance in every relation check.
"""

from .jimbo import assemble_T, build_dual_sl2, build_glpq2, closed_form, ladder_reconstruct
from .opmatrix import OpMatrix, qdet, rtt_residual
from .ring import LaurentPoly, VarSet
from .rmatrix import RMatrix, rpq, standard_r
from .verify import build_construction, run_checks

__all__ = [
    "LaurentPoly",
    "VarSet",
    "RMatrix",
    "OpMatrix",
    "standard_r",
    "rpq",
    "closed_form",
    "ladder_reconstruct",
    "assemble_T",
    "build_glpq2",
    "build_dual_sl2",
    "rtt_residual",
    "qdet",
    "build_construction",
    "run_checks",
]

__version__ = "0.1.0"
