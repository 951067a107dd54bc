"""
Numeric residue oracle: trapezoidal rule on a circle.

Only used to cross-check the jet algebra; no production path calls it.
"""

import logging
from typing import Callable

import mpmath
from mpmath import mpc, mpf

logger = logging.getLogger(__name__)

MIN_SAMPLES = 64
MAX_SAMPLES = 2**14


class ContourConvergenceError(ArithmeticError):
    """Doubling the sample count kept changing the estimate beyond tolerance."""


def _trapezoid(f: Callable, center, radius, M: int, offset: int = 0, stride: int = 1) -> mpc:
    total = []
    for k in range(offset, M, stride):
        z = radius * mpmath.expjpi(mpf(2 * k) / M)
        total.append(f(center + z) * z)
    return mpmath.fsum(total)


def contour_residue_oracle(f: Callable, center, radius, M: int = MIN_SAMPLES,
                           tol=mpf("1e-20"), max_samples: int = MAX_SAMPLES) -> mpc:
    """
    Approximate (1 / 2 pi i) times the integral of f over |s - center| = radius.

    With s_k = center + r e^{i theta_k} the sum is (1/M) sum_k f(s_k) r e^{i theta_k}.
    M doubles (reusing the previous samples) until two successive estimates
    agree to tol, relative to max(1, |estimate|).

    Args:
        f: Callable taking an mpc and returning an mpc/mpf
        center: Circle center
        radius: Circle radius (> 0)
        M: Initial sample count (>= 64)
        tol: Agreement tolerance between successive doublings
        max_samples: Largest sample count before giving up

    Returns:
        Complex estimate of the enclosed residue sum
    """
    if M < MIN_SAMPLES:
        raise ValueError(f"contour oracle needs at least {MIN_SAMPLES} samples, got {M}")
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if max_samples <= M:
        raise ValueError(f"max_samples ({max_samples}) must exceed M ({M})")

    center = mpmath.mpmathify(center)
    radius = mpf(radius)
    raw = _trapezoid(f, center, radius, M)
    estimate = raw / M
    while M < max_samples:
        # odd samples of the doubled grid are the new points
        raw = raw + _trapezoid(f, center, radius, 2 * M, offset=1, stride=2)
        M *= 2
        refined = raw / M
        change = abs(refined - estimate)
        estimate = refined
        if change <= tol * max(1, abs(refined)):
            logger.debug(f"contour oracle converged with M={M}")
            return estimate

    raise ContourConvergenceError(
        f"contour estimate still moving by {mpmath.nstr(change, 5)} at M={M}"
    )
