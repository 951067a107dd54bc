"""
Laurent Jet Module

Truncated Laurent expansions about s = 1, Stieltjes constants, the zeta and
zeta^3 jets, polynomials in log(x/q) read off residues, and a numeric
contour oracle for cross-checking residues.
"""

from .contour import ContourConvergenceError, contour_residue_oracle
from .laurent import (
    DEFAULT_ORDER,
    JetCenter,
    JetError,
    LaurentJet,
    coefficientwise_deviation,
    exp_linear_jet,
    geometric_jet,
    jet_add,
    jet_mul,
    jet_product,
    jet_scale,
    jet_sum,
    power_jet,
    residue_of,
)
from .log_polynomial import LogPolynomial
from .precision import Precision
from .stieltjes import (
    StieltjesConvergenceError,
    StieltjesReferenceMismatch,
    stieltjes,
    stieltjes_table,
)
from .zeta import zeta_cubed_jet, zeta_jet

__all__ = [
    "ContourConvergenceError",
    "DEFAULT_ORDER",
    "JetCenter",
    "JetError",
    "LaurentJet",
    "LogPolynomial",
    "Precision",
    "StieltjesConvergenceError",
    "StieltjesReferenceMismatch",
    "coefficientwise_deviation",
    "contour_residue_oracle",
    "exp_linear_jet",
    "geometric_jet",
    "jet_add",
    "jet_mul",
    "jet_product",
    "jet_scale",
    "jet_sum",
    "power_jet",
    "residue_of",
    "stieltjes",
    "stieltjes_table",
    "zeta_cubed_jet",
    "zeta_jet",
]
