"""
Shifted Convolution Module

Exact shifted convolution sums of d_k, all-shift correlation through
number-theoretic transforms, Delta(N,h), the first- and second-moment
reports, the Ingham check and trend fitting.
"""

from .moments import DeltaRecord, MomentReport, moment_report
from .ntt import CorrelationOverflowError, exact_correlation
from .shifted import delta, dk_shifted_sum, ingham_ratio, shifted_sums_all
from .trends import TrendFit, fit_exponent, strictly_decreasing, trend_frame

__all__ = [
    "CorrelationOverflowError",
    "DeltaRecord",
    "MomentReport",
    "TrendFit",
    "delta",
    "dk_shifted_sum",
    "exact_correlation",
    "fit_exponent",
    "ingham_ratio",
    "moment_report",
    "shifted_sums_all",
    "strictly_decreasing",
    "trend_frame",
]
