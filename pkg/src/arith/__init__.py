"""
Arithmetic Functions Module

Exact factorisation, Mobius, totient, Ramanujan sums and divisor-function
values on prime powers.
"""

from .factorization import FactoredInteger, IntLike, as_factored, factorize
from .functions import (
    DkOverflowError,
    divisor_count,
    dk_prime_power,
    dk_table,
    dk_value,
    mobius,
    mobius_table,
    ramanujan_prefix_sum,
    ramanujan_sum,
    sigma_minus_one,
    totient,
)

__all__ = [
    "DkOverflowError",
    "FactoredInteger",
    "IntLike",
    "as_factored",
    "divisor_count",
    "dk_prime_power",
    "dk_table",
    "dk_value",
    "factorize",
    "mobius",
    "mobius_table",
    "ramanujan_prefix_sum",
    "ramanujan_sum",
    "sigma_minus_one",
    "totient",
]
