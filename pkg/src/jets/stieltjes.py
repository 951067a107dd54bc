"""
Stieltjes constants by Euler-Maclaurin summation.

zeta(s) = 1/(s-1) + sum_n (-1)^n gamma_n (s-1)^n / n!, and

    gamma_n = lim_{M->oo} ( sum_{k<=M} (log k)^n / k - (log M)^{n+1} / (n+1) ).

The tail from N onwards is replaced by the Euler-Maclaurin expansion of
f(x) = (log x)^n / x, whose derivatives are f^{(m)}(x) = x^{-1-m} P_m(log x)
with P_0(t) = t^n and P_{m+1} = -(1+m) P_m + P_m'.
"""

import logging
import threading
from typing import Dict, List, Optional, Tuple

import mpmath
from mpmath import mpf

from .precision import Precision, resolve

logger = logging.getLogger(__name__)

MAX_INDEX = 8
MAX_BERNOULLI_TERMS = 80

# 31+ significant digits, used to cross-check the summation at start-up
REFERENCE_VALUES = {
    0: "0.5772156649015328606065120900824",
    1: "-0.07281584548367672486058637587490",
    2: "-0.009690363192872318484530386035213",
    3: "0.002053834420303345866160046542754",
}
REFERENCE_TOLERANCE = mpf("1e-28")

_cache: Dict[Tuple[int, int], mpf] = {}
_lock = threading.Lock()


class StieltjesConvergenceError(ArithmeticError):
    """The Euler-Maclaurin remainder did not fall below the precision target."""


class StieltjesReferenceMismatch(RuntimeError):
    """A computed constant disagrees with its embedded reference value."""


def _poly_derivative(coeffs: List[mpf]) -> List[mpf]:
    return [i * c for i, c in enumerate(coeffs)][1:] or [mpf(0)]


def _poly_eval(coeffs: List[mpf], t: mpf) -> mpf:
    result = mpf(0)
    for c in reversed(coeffs):
        result = result * t + c
    return result


def _derivative_polynomials(n: int, count: int) -> List[List[mpf]]:
    """P_0 .. P_{count-1} as coefficient lists in t = log x."""
    current = [mpf(0)] * n + [mpf(1)]
    polys = [current]
    for m in range(count - 1):
        deriv = _poly_derivative(current)
        size = max(len(current), len(deriv))
        nxt = [-(1 + m) * (current[i] if i < len(current) else 0)
               + (deriv[i] if i < len(deriv) else 0) for i in range(size)]
        polys.append(nxt)
        current = nxt
    return polys


def _cutoff(prec: Precision) -> int:
    return max(64, 3 * prec.working_dps)


def _euler_maclaurin(n: int, prec: Precision) -> mpf:
    N = _cutoff(prec)
    eps = mpf(10) ** (-prec.working_dps)
    polys = _derivative_polynomials(n, 2 * MAX_BERNOULLI_TERMS)

    head = mpmath.fsum(mpmath.log(k) ** n / k for k in range(2, N)) if n else \
        mpmath.fsum(mpf(1) / k for k in range(1, N))
    logN = mpmath.log(N)
    terms = [head, -logN ** (n + 1) / (n + 1), logN ** n / (2 * N)]

    for j in range(1, MAX_BERNOULLI_TERMS + 1):
        m = 2 * j - 1
        deriv = mpf(N) ** (-1 - m) * _poly_eval(polys[m], logN)
        term = -mpmath.bernoulli(2 * j) / mpmath.factorial(2 * j) * deriv
        terms.append(term)
        if abs(term) < eps:
            return mpmath.fsum(terms)

    raise StieltjesConvergenceError(
        f"gamma_{n}: Euler-Maclaurin remainder {mpmath.nstr(abs(terms[-1]), 5)} "
        f"did not reach {mpmath.nstr(eps, 5)} with N={N}"
    )


def stieltjes(n: int, prec: Optional[Precision] = None) -> mpf:
    """
    Stieltjes constant gamma_n at the requested precision.

    Args:
        n: Index, 0 <= n <= 8 (indices up to 3 are cross-checked against
            reference values)
        prec: Working precision; defaults from configuration

    Returns:
        gamma_n as an mpf at the working precision
    """
    if not 0 <= n <= MAX_INDEX:
        raise ValueError(f"Stieltjes index must lie in 0..{MAX_INDEX}, got {n}")
    prec = resolve(prec)
    key = (n, prec.working_dps)
    with _lock:
        if key in _cache:
            return _cache[key]

    with prec.context():
        value = _euler_maclaurin(n, prec)
        if n in REFERENCE_VALUES:
            deviation = abs(value - mpf(REFERENCE_VALUES[n]))
            if deviation > REFERENCE_TOLERANCE:
                raise StieltjesReferenceMismatch(
                    f"gamma_{n} = {mpmath.nstr(value, 30)} deviates from the reference "
                    f"by {mpmath.nstr(deviation, 5)}"
                )
        logger.debug(f"gamma_{n} computed at {prec.working_dps} digits")

    with _lock:
        _cache[key] = value
    return value


def stieltjes_table(count: int, prec: Optional[Precision] = None) -> List[mpf]:
    """[gamma_0, ..., gamma_{count-1}]."""
    return [stieltjes(n, prec) for n in range(count)]
