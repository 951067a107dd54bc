"""
Laurent jets of zeta(s) and zeta(s)^3 about s = 1.
"""

from typing import List, Optional

import mpmath
from mpmath import mpf

from .laurent import DEFAULT_ORDER, JetCenter, LaurentJet
from .precision import Precision, resolve
from .stieltjes import MAX_INDEX, stieltjes


def _zeta_regular_part(count: int, prec: Precision) -> List[mpf]:
    """Taylor coefficients (-1)^n gamma_n / n! of zeta(1+w) - 1/w, n < count."""
    if count - 1 > MAX_INDEX:
        raise ValueError(f"zeta jet needs gamma_{count - 1}; only up to gamma_{MAX_INDEX} available")
    return [(-1) ** n * stieltjes(n, prec) / mpmath.factorial(n) for n in range(count)]


def zeta_jet(order: int = DEFAULT_ORDER, center: JetCenter = JetCenter.ONE,
             prec: Optional[Precision] = None) -> LaurentJet:
    """Jet of zeta(s) at s = 1: 1/w + sum_n (-1)^n gamma_n w^n / n!, n <= order."""
    prec = resolve(prec)
    with prec.context():
        coeffs = [mpf(1)] + _zeta_regular_part(order + 1, prec)
    return LaurentJet(tuple(coeffs), 1, center)


def zeta_cubed_jet(order: int = DEFAULT_ORDER, center: JetCenter = JetCenter.ONE,
                   prec: Optional[Precision] = None) -> LaurentJet:
    """
    Jet of zeta(s)^3 at s = 1 with pole order 3 and truncation order K.

    Writes zeta(1+w) = w^{-1} (1 + u(w)) and cubes the analytic factor
    1 + u as a power series, so c_{-3} = 1, c_{-2} = 3 gamma_0 and
    c_{-1} = 3 gamma_0^2 - 3 gamma_1.

    Args:
        order: Truncation order K (K + 2 Stieltjes constants are used)
        center: Expansion tag
        prec: Working precision

    Returns:
        LaurentJet with pole_order 3
    """
    if order < 0:
        raise ValueError(f"Truncation order must be non-negative, got {order}")
    prec = resolve(prec)
    length = order + 4
    with prec.context():
        # a_0 = 1, a_{n+1} = (-1)^n gamma_n / n!
        a = [mpf(1)] + _zeta_regular_part(length - 1, prec)
        square = [mpmath.fsum(a[i] * a[j - i] for i in range(j + 1)) for j in range(length)]
        cube = [mpmath.fsum(square[i] * a[j - i] for i in range(j + 1)) for j in range(length)]
    return LaurentJet(tuple(cube), 3, center)
