"""
Local Factors Module

Euler-product local factors g, G and H, the principal-character series
F_{k,q*} as Laurent jets, and definition-following oracles for all of them.
"""

from .euler import (
    G_kd_jet,
    H_jet,
    LocalFactorKey,
    MultiplicativityCheck,
    clear_memo,
    g_jet,
    h_multiplicativity_check,
    local_euler_factor,
    local_polynomial,
    max_relative_deviation,
)
from .oracles import (
    G_value,
    TruncationEstimate,
    dirichlet_truncation_oracle,
    f_principal_value,
    g_value,
    h_value,
    p_contour_value,
)
from .principal import f_principal_factor_jet, f_principal_jet

__all__ = [
    "G_kd_jet",
    "G_value",
    "H_jet",
    "LocalFactorKey",
    "MultiplicativityCheck",
    "TruncationEstimate",
    "clear_memo",
    "dirichlet_truncation_oracle",
    "f_principal_factor_jet",
    "f_principal_jet",
    "f_principal_value",
    "g_jet",
    "g_value",
    "h_multiplicativity_check",
    "h_value",
    "local_euler_factor",
    "local_polynomial",
    "max_relative_deviation",
    "p_contour_value",
]
