"""
Singular Series Module

P(x,q) and its dual P*(x,q) as polynomials in log(x/q), the singular series
S(x,h), its closed-form integral over [N, 2N] and the first-moment main terms.
"""

from src.jets import LogPolynomial

from .polynomials import p_polynomial, p_star_polynomial
from .series import (
    MainTermEngine,
    PolynomialTable,
    SeriesOptions,
    SeriesSaturationError,
    SingularValue,
    deterministic_fsum,
    first_moment_main,
    first_moment_split,
    main_term_integral,
    p_decade_sup,
    shared_table,
    singular_series,
)

__all__ = [
    "LogPolynomial",
    "MainTermEngine",
    "PolynomialTable",
    "SeriesOptions",
    "SeriesSaturationError",
    "SingularValue",
    "deterministic_fsum",
    "first_moment_main",
    "first_moment_split",
    "main_term_integral",
    "p_decade_sup",
    "p_polynomial",
    "p_star_polynomial",
    "shared_table",
    "singular_series",
]
