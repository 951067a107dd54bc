"""
Voronoi main term for sum_{n <= t} d_3(n).

Res_{s=1} zeta(s)^3 t^s / s = t * (a_2 log^2 t + a_1 log t + a_0) with
a_2 = 1/2, a_1 = 3 gamma_0 - 1, a_0 = 3 gamma_0^2 - 3 gamma_1 - 3 gamma_0 + 1.
"""

import threading
from typing import Dict, Optional

from mpmath import mpf

from src.jets import LogPolynomial, Precision, geometric_jet, jet_mul, zeta_cubed_jet
from src.jets.precision import resolve

_memo: Dict[int, LogPolynomial] = {}
_lock = threading.Lock()


def voronoi_polynomial(prec: Optional[Precision] = None) -> LogPolynomial:
    """(a_0, a_1, a_2) as a LogPolynomial in log t (scale 1)."""
    prec = resolve(prec)
    with _lock:
        if prec.working_dps in _memo:
            return _memo[prec.working_dps]
    with prec.context():
        jet = jet_mul(zeta_cubed_jet(prec=prec), geometric_jet())
        poly = LogPolynomial.from_residue(jet, 1)
    with _lock:
        _memo[prec.working_dps] = poly
    return poly


def voronoi_main(t, prec: Optional[Precision] = None) -> mpf:
    """
    Voronoi main term t * P_V(log t) for t >= 1.

    Args:
        t: Real point (t = 1 gives a_0)
        prec: Working precision

    Returns:
        High-precision real
    """
    if t < 1:
        raise ValueError(f"voronoi_main requires t >= 1, got {t}")
    prec = resolve(prec)
    poly = voronoi_polynomial(prec)
    with prec.context():
        return mpf(t) * poly.evaluate(t)
