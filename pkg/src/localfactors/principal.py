"""
Principal-character Dirichlet series

    F_{k,q*}(s) = sum_{(n, q*) = 1} d_3(nk) n^{-s}
                = prod_{p | kq*} E_p(s) * zeta(s)^3,

where, with a = v_p(k) and x = p^{-s}, E_p = d_3(p^a) (1 - x)^3 when p | q*
(the character kills every j >= 1) and E_p is the closed-form local sum
otherwise. Each prime of kq* contributes exactly one (1 - x)^3.
"""

from typing import Optional

from src.arith import as_factored, dk_prime_power
from src.jets import (
    DEFAULT_ORDER,
    JetCenter,
    LaurentJet,
    Precision,
    jet_mul,
    jet_product,
    jet_scale,
    zeta_cubed_jet,
)
from src.jets.precision import resolve

from .euler import LocalFactorKey, cube_factor_jet, local_euler_factor


def _prime_support(k: int, qstar: int):
    return sorted(set(as_factored(k).primes) | set(as_factored(qstar).primes))


def f_principal_factor_jet(k: int, qstar: int, center: JetCenter = JetCenter.ONE,
                           order: int = DEFAULT_ORDER) -> LaurentJet:
    """
    Analytic jet of F_{k,q*}(s) / zeta(s)^3 at the ambient precision.

    For q* = d and k = q/d this is the quantity matched against G_{k,d}.
    """
    if k < 1 or qstar < 1:
        raise ValueError(f"f_principal_factor_jet requires k, q* >= 1, got k={k}, q*={qstar}")
    kf = as_factored(k)
    factors = []
    for p in _prime_support(k, qstar):
        a = kf.valuation(p)
        if qstar % p == 0:
            factors.append(jet_scale(cube_factor_jet(p, center, order), dk_prime_power(3, a)))
        else:
            factors.append(local_euler_factor(LocalFactorKey(p, a), center, order))
    return jet_product(factors, order, center)


def f_principal_jet(k: int, qstar: int, center: JetCenter = JetCenter.ONE,
                    order: int = DEFAULT_ORDER, prec: Optional[Precision] = None) -> LaurentJet:
    """
    Jet of F_{k,q*}(s) at s = 1, pole order 3.

    The analytic factor is built to order K + 3 so that the product with
    zeta^3 keeps truncation order K.

    Args:
        k: Multiplier inside d_3(nk)
        qstar: Modulus of the principal character
        center: Expansion tag
        order: Truncation order K of the result
        prec: Working precision

    Returns:
        LaurentJet with pole_order 3
    """
    prec = resolve(prec)
    with prec.context():
        factor = f_principal_factor_jet(k, qstar, JetCenter.ONE, order + 3)
        jet = jet_mul(zeta_cubed_jet(order, JetCenter.ONE, prec), factor)
    return jet.recentered(center)
