"""
CLI Module

Command-line front end: subcommands for sieving, shifted sums, P-polynomials,
singular series, Delta and its moments, the Ingham check and the
verification suites. Output is CSV.
"""

from .main import build_parser, render_csv, run
from .suites import SUITES, SuiteResult, run_suite

__all__ = [
    "SUITES",
    "SuiteResult",
    "build_parser",
    "render_csv",
    "run",
    "run_suite",
]
