"""
Sieve Module

Exact segmented sieving of d_k(n), partial sums of d_3 and the Voronoi main
term they are compared against.
"""

from .segments import (
    SegmentBudgetError,
    SieveConfig,
    SieveSegment,
    base_primes,
    d3_partial_sum,
    dk_segment,
    iter_segments,
)
from .voronoi import voronoi_main, voronoi_polynomial

__all__ = [
    "SegmentBudgetError",
    "SieveConfig",
    "SieveSegment",
    "base_primes",
    "d3_partial_sum",
    "dk_segment",
    "iter_segments",
    "voronoi_main",
    "voronoi_polynomial",
]
