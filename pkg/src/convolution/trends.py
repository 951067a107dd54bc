"""
Empirical trend exponents for the moment and Ingham experiments.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd
from scipy import stats


@dataclass(frozen=True)
class TrendFit:
    """Least-squares fit of log(ratio) = slope * log(N) + intercept."""

    slope: float
    intercept: float
    r_value: float
    stderr: float


def fit_exponent(Ns: Sequence[float], ratios: Sequence[float]) -> TrendFit:
    """
    Fit ratio ~ C * N^slope.

    Args:
        Ns: Sample points (at least two, positive)
        ratios: Positive ratios at those points

    Returns:
        TrendFit
    """
    x = np.log(np.asarray(Ns, dtype=np.float64))
    y = np.log(np.asarray(ratios, dtype=np.float64))
    if len(x) < 2 or len(x) != len(y):
        raise ValueError("fit_exponent needs at least two paired samples")
    if not np.all(np.isfinite(y)):
        raise ValueError("fit_exponent needs positive ratios")
    result = stats.linregress(x, y)
    return TrendFit(
        slope=float(result.slope),
        intercept=float(result.intercept),
        r_value=float(result.rvalue),
        stderr=float(result.stderr),
    )


def strictly_decreasing(values: Sequence[float]) -> bool:
    return all(b < a for a, b in zip(values, values[1:]))


def trend_frame(Ns: Sequence[int], ratios: Sequence[float], label: str) -> pd.DataFrame:
    """One row per N with the ratio and its successive log-log slope."""
    frame = pd.DataFrame({"N": list(Ns), label: [float(r) for r in ratios]})
    log_ratio = np.log(frame[label])
    frame["local_slope"] = log_ratio.diff() / np.log(frame["N"].astype(float)).diff()
    return frame
