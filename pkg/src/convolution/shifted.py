"""
Shifted convolution sums D_k(N,h) = sum_{N < n <= 2N} d_k(n) d_k(n+h), the
discrepancy Delta(N,h) against the singular-series main term, and the
Ingham ratio for k = 2.
"""

import logging
from math import isqrt
from typing import Optional

import mpmath
import numpy as np
from mpmath import mpf

from src.arith import sigma_minus_one
from src.jets import Precision
from src.jets.precision import resolve
from src.sieve import SieveConfig, dk_segment, iter_segments
from src.sieve.segments import MAX_SIEVE
from src.singular import SeriesOptions, main_term_integral

from .ntt import exact_correlation

logger = logging.getLogger(__name__)

MAX_CORRELATION_N = 10**8


def dk_shifted_sum(k: int, N: int, h: int, cfg: Optional[SieveConfig] = None) -> int:
    """
    Exact D_k(N,h), streamed over sieve segments covering (N, 2N+h].

    Each segment (lo, hi] of (N, 2N] is sieved together with its h-entry
    overhang so that d_k(n+h) is available for every n in the segment.

    Args:
        k: 1, 2 or 3
        N: Range start, N >= 1
        h: Shift, h >= 1
        cfg: Sieve configuration

    Returns:
        Exact integer
    """
    if k not in (1, 2, 3):
        raise ValueError(f"dk_shifted_sum supports k in {{1, 2, 3}}, got {k}")
    if N < 1 or h < 1:
        raise ValueError(f"N and h must be positive, got N={N}, h={h}")
    if 2 * N + h > MAX_SIEVE:
        raise ValueError(f"2N + h = {2 * N + h} exceeds the sieve range")
    cfg = cfg or SieveConfig()
    size = max(1, cfg.segment_size - h)

    total = 0
    for lo in range(N, 2 * N, size):
        hi = min(lo + size, 2 * N)
        values = dk_segment(k, lo, hi + h, cfg).values
        width = hi - lo
        total += int(np.dot(values[:width], values[h:h + width]))
    return total


def shifted_sums_all(N: int, H: int, cfg: Optional[SieveConfig] = None) -> np.ndarray:
    """
    D(N,h) for h = 1..H by exact NTT correlation of d_3 on (N, 2N] against
    d_3 on (N, 2N+H].

    Args:
        N: Range start, 1 <= N <= 10^8
        H: Largest shift, 1 <= H <= N
        cfg: Sieve configuration (workers also drive the NTT blocks)

    Returns:
        int64 array; entry h - 1 holds D(N,h)
    """
    if not 1 <= N <= MAX_CORRELATION_N:
        raise ValueError(f"shifted_sums_all requires 1 <= N <= 10^8, got {N}")
    if not 1 <= H <= N:
        raise ValueError(f"shifted_sums_all requires 1 <= H <= N, got H={H}")
    cfg = cfg or SieveConfig()
    logger.info(f"Sieving d_3 on ({N}, {2 * N + H}] for {H} shifts")
    b = np.concatenate([s.values for s in iter_segments(3, N, 2 * N + H, cfg)])
    a = b[:N]
    return exact_correlation(a, b, H, min_lag=1, workers=cfg.workers)


def delta(N: int, h: int, opts: Optional[SeriesOptions] = None,
          cfg: Optional[SieveConfig] = None, allow_large_shift: bool = False) -> mpf:
    """
    Delta(N,h) = D(N,h) - int_N^{2N} S(x,h) dx.

    Args:
        N: Range start
        h: Shift, h <= sqrt(N) unless allow_large_shift
        opts: Series options for the main term
        cfg: Sieve configuration
        allow_large_shift: Accept h > sqrt(N)

    Returns:
        High-precision real
    """
    if h > isqrt(N) and not allow_large_shift:
        raise ValueError(f"h={h} exceeds sqrt(N)={isqrt(N)}; pass allow_large_shift to override")
    opts = opts or SeriesOptions()
    exact = dk_shifted_sum(3, N, h, cfg)
    main = main_term_integral(N, h, opts)
    with opts.precision.context():
        return mpf(exact) - main


def ingham_ratio(N: int, h: int, cfg: Optional[SieveConfig] = None,
                 prec: Optional[Precision] = None) -> mpf:
    """
    D_2(N,h) / ((6/pi^2) sigma_{-1}(h) N log^2 N).

    Args:
        N: Range start, N >= 10^3
        h: Shift, h >= 1

    Returns:
        High-precision real; tends to 1 as N grows
    """
    if N < 10**3:
        raise ValueError(f"ingham_ratio requires N >= 1000, got {N}")
    if h < 1:
        raise ValueError(f"ingham_ratio requires h >= 1, got {h}")
    prec = resolve(prec)
    exact = dk_shifted_sum(2, N, h, cfg)
    sigma = sigma_minus_one(h)
    with prec.context():
        expected = 6 / mpmath.pi ** 2 * mpf(sigma.numerator) / sigma.denominator \
            * N * mpmath.log(N) ** 2
        ratio = mpf(exact) / expected
    logger.debug(f"Ingham ratio at N={N}, h={h}: {mpmath.nstr(ratio, 8)}")
    return ratio
