"""
First- and second-moment experiments over the shifts h <= H.

For each h the exact D(N,h) comes from the NTT correlation and the main term
from a shared MainTermEngine at one common truncation q_max, so the whole
sweep costs one P-polynomial table and one sieve.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional

import mpmath
import numpy as np
import pandas as pd
from mpmath import mpf

from src.sieve import SieveConfig
from src.singular import (
    MainTermEngine,
    SeriesOptions,
    SeriesSaturationError,
    deterministic_fsum,
    first_moment_main,
)

from .shifted import shifted_sums_all

logger = logging.getLogger(__name__)

EXCEPTIONAL_THRESHOLD = mpf("0.1")


@dataclass(frozen=True)
class DeltaRecord:
    h: int
    D: int
    main_term: mpf
    delta: mpf


@dataclass
class MomentReport:
    """
    Aggregates of Delta(N,h) over 1 <= h <= H.

    ratio1 = |sum Delta| / first_moment_main(N,H); ratio2 is the root mean
    square of Delta divided by the mean main term. sum_D and sum_main are the
    two averages G(N,H) and F(N,H) whose difference is sum Delta.
    """

    N: int
    H: int
    order: int
    q_max: int
    sum_delta: mpf
    sum_delta_sq: mpf
    ratio1: mpf
    ratio2: mpf
    sum_D: int
    sum_main: mpf
    first_moment: mpf
    exceptional_fraction: float
    saturated: bool
    precision_digits: int
    wall_ms: int
    per_h: List[DeltaRecord] = field(default_factory=list)

    def __post_init__(self):
        if self.sum_delta_sq < 0:
            raise ValueError("sum_delta_sq must be non-negative")

    def per_h_frame(self) -> pd.DataFrame:
        """Per-shift records as a DataFrame (values as 20-digit strings)."""
        return pd.DataFrame([
            {
                "h": r.h,
                "D": r.D,
                "main_term": mpmath.nstr(r.main_term, 20),
                "delta": mpmath.nstr(r.delta, 20),
            }
            for r in self.per_h
        ])


def moment_report(N: int, H: int, order: int = 1, opts: Optional[SeriesOptions] = None,
                  cfg: Optional[SieveConfig] = None, keep_per_h: bool = False) -> MomentReport:
    """
    Compute all Delta(N,h), h <= H, and their first and second moments.

    Args:
        N: Range start
        H: Number of shifts, 1 <= H <= N
        order: 1 or 2; selects the range check logged for the experiment
        opts: Series options (q_max None picks a common auto truncation)
        cfg: Sieve configuration
        keep_per_h: Retain the per-h records

    Returns:
        MomentReport
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    if not 1 <= H <= N:
        raise ValueError(f"moment_report requires 1 <= H <= N, got N={N}, H={H}")
    if order == 2 and not N ** (1 / 3) < H < N:
        logger.warning(f"H={H} lies outside the second-moment range N^(1/3) < H < N for N={N}")

    opts = opts or SeriesOptions()
    start = time.perf_counter()

    D = shifted_sums_all(N, H, cfg)

    engine = MainTermEngine(N, opts)
    saturated = False
    try:
        q_max = engine.choose_q_max(range(1, H + 1))
    except SeriesSaturationError as e:
        logger.warning(f"{e}; continuing at q_max={e.partial.q_max}")
        q_max = e.partial.q_max
        saturated = True
    logger.info(f"Main terms for N={N}, H={H} at q_max={q_max}")

    with opts.precision.context():
        mains = [engine.main_value(h, q_max) for h in range(1, H + 1)]
        deltas = [mpf(int(D[h - 1])) - mains[h - 1] for h in range(1, H + 1)]
        sum_delta = deterministic_fsum(deltas)
        sum_delta_sq = deterministic_fsum(d * d for d in deltas)
        sum_main = deterministic_fsum(mains)
        first = first_moment_main(N, H, opts.precision)
        ratio1 = abs(sum_delta) / first
        ratio2 = mpmath.sqrt(sum_delta_sq / H) / (sum_main / H)
        exceptional = sum(1 for d, m in zip(deltas, mains) if abs(d) > EXCEPTIONAL_THRESHOLD * m)

    records = []
    if keep_per_h:
        records = [DeltaRecord(h, int(D[h - 1]), mains[h - 1], deltas[h - 1]) for h in range(1, H + 1)]

    wall_ms = int(round(1000 * (time.perf_counter() - start)))
    report = MomentReport(
        N=N,
        H=H,
        order=order,
        q_max=q_max,
        sum_delta=sum_delta,
        sum_delta_sq=sum_delta_sq,
        ratio1=ratio1,
        ratio2=ratio2,
        sum_D=int(np.sum(D, dtype=np.int64)),
        sum_main=sum_main,
        first_moment=first,
        exceptional_fraction=exceptional / H,
        saturated=saturated,
        precision_digits=opts.precision.decimal_digits,
        wall_ms=wall_ms,
        per_h=records,
    )
    logger.info(
        f"N={N} H={H}: ratio1={mpmath.nstr(ratio1, 6)} ratio2={mpmath.nstr(ratio2, 6)} "
        f"exceptional={report.exceptional_fraction:.4f} ({wall_ms} ms)"
    )
    return report
