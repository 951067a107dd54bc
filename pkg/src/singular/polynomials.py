"""
P(x,q) and its dual P*(x,q) as polynomials in log(x/q).

    P(x,q)  = Res_{s=0} zeta(s+1)^3 H(s+1,q) (x/q)^s
    P*(x,q) = sum_{d | q} mu(d) d/phi(d) Res_{s=1} y^{s-1} F_{q/d,d}(s),  y = xd/q

Both are degree-2 polynomials in log(x/q) because the pole is triple; the two
constructions share no code beyond the zeta^3 jet and must agree.
"""

import logging
import threading
from typing import Dict, Optional, Tuple

from mpmath import mpf

from src.arith import as_factored, totient
from src.jets import JetCenter, LogPolynomial, Precision, jet_mul, zeta_cubed_jet
from src.jets.precision import resolve
from src.localfactors import H_jet, f_principal_jet

logger = logging.getLogger(__name__)

_memo: Dict[Tuple[int, int], LogPolynomial] = {}
_lock = threading.Lock()


def _compute_p(q: int, prec: Precision) -> LogPolynomial:
    with prec.context():
        zeta3 = zeta_cubed_jet(prec=prec).recentered(JetCenter.ZERO)
        h = H_jet(q, prec=prec).recentered(JetCenter.ZERO)
        return LogPolynomial.from_residue(jet_mul(zeta3, h), q)


def p_polynomial(q: int, prec: Optional[Precision] = None) -> LogPolynomial:
    """
    P(x,q) via the residue of zeta^3 H (x/q)^s at s = 0.

    Memoised per (q, working precision) in a lock-protected table.

    Args:
        q: Modulus, q >= 1
        prec: Working precision

    Returns:
        Degree-2 LogPolynomial with scale q
    """
    if q < 1:
        raise ValueError(f"p_polynomial requires q >= 1, got {q}")
    prec = resolve(prec)
    key = (q, prec.working_dps)
    with _lock:
        cached = _memo.get(key)
    if cached is not None:
        return cached
    poly = _compute_p(q, prec)
    store(q, prec, poly)
    return poly


def store(q: int, prec: Precision, poly: LogPolynomial) -> None:
    """Insert a polynomial computed elsewhere (e.g. in a worker process)."""
    with _lock:
        _memo.setdefault((q, prec.working_dps), poly)


def p_star_polynomial(q: int, prec: Optional[Precision] = None) -> LogPolynomial:
    """
    P*(x,q): weighted residues of the principal-character series F_{q/d,d}.

    Each term is a polynomial in log y with y = x/(q/d); re-expanding about
    log(x/q) shifts its argument by log d.
    """
    if q < 1:
        raise ValueError(f"p_star_polynomial requires q >= 1, got {q}")
    prec = resolve(prec)
    with prec.context():
        total = LogPolynomial(q, (mpf(0),))
        for d, mu in as_factored(q).squarefree_divisors():
            k = q // d
            term = LogPolynomial.from_residue(f_principal_jet(k, d, prec=prec), k)
            weight = mpf(mu) * d / totient(d)
            total = total + term.rescale(q).scaled(weight)
    return total


def clear_memo() -> None:
    with _lock:
        _memo.clear()
