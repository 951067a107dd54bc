"""
Euler-product local factors g(s,q), G_{k,d}(s) and H(s,q) as jets at s = 1.

Every local sum is closed-form: with x = p^{-s},

    (1 - x)^3 sum_{j>=0} d_3(p^{j+a}) x^j = x^{-a} (1 - (1 - x)^3 sum_{m<a} d_3(p^m) x^m),

an integer polynomial of degree <= 2 in x.

g_jet and G_kd_jet work at the ambient mpmath precision; H_jet sets its own.
"""

import logging
import threading
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, Optional, Tuple

import mpmath
from mpmath import mpf
from sympy import isprime

from src.arith import FactoredInteger, IntLike, as_factored, dk_prime_power, totient
from src.jets import (
    DEFAULT_ORDER,
    JetCenter,
    LaurentJet,
    Precision,
    coefficientwise_deviation,
    exp_linear_jet,
    jet_mul,
    jet_product,
    jet_scale,
    jet_sum,
    power_jet,
)
from src.jets.precision import resolve

logger = logging.getLogger(__name__)

MAX_EXPONENT = 64

_h_memo: Dict[Tuple[int, int, int, JetCenter], LaurentJet] = {}
_h_lock = threading.Lock()


@dataclass(frozen=True)
class LocalFactorKey:
    """A prime p together with the exponent a = v_p(q)."""

    p: int
    a: int

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"LocalFactorKey requires a prime, got {self.p}")
        if not 0 <= self.a <= MAX_EXPONENT:
            raise ValueError(f"Exponent must lie in 0..{MAX_EXPONENT}, got {self.a}")


@lru_cache(maxsize=None)
def local_polynomial(a: int) -> Tuple[int, ...]:
    """
    Integer coefficients (c_0, c_1, c_2) of the closed-form local sum in x.

    Independent of p. a=0 gives (1,), a=1 gives (3, -3, 1), a=2 gives (6, -8, 3).
    """
    if a < 0:
        raise ValueError(f"Exponent must be non-negative, got {a}")
    if a == 0:
        return (1,)
    # T = (1 - x)^3 * sum_{m<a} d_3(p^m) x^m, then R = 1 - T
    partial = [dk_prime_power(3, m) for m in range(a)]
    cube = (1, -3, 3, -1)
    product = [0] * (a + 3)
    for i, c in enumerate(partial):
        for j, b in enumerate(cube):
            product[i + j] += c * b
    remainder = [-c for c in product]
    remainder[0] += 1
    if any(remainder[:a]):
        raise ArithmeticError(f"Local sum for a={a} is not divisible by x^{a}")
    return tuple(remainder[a:])


def x_polynomial_jet(p: int, coeffs: Tuple[int, ...], center: JetCenter = JetCenter.ONE,
                     order: int = DEFAULT_ORDER) -> LaurentJet:
    """Jet of sum_i c_i p^{-i s} at s = 1 + w."""
    log_p = mpmath.log(p)
    terms = []
    for i, c in enumerate(coeffs):
        if c:
            terms.append(jet_scale(exp_linear_jet(-i * log_p, center, order), mpf(c) / mpf(p) ** i))
    return jet_sum(terms, order, center)


def local_euler_factor(key: LocalFactorKey, center: JetCenter = JetCenter.ONE,
                       order: int = DEFAULT_ORDER) -> LaurentJet:
    """
    Analytic jet of (1 - p^{-s})^3 sum_j d_3(p^{j+a}) p^{-js}.

    Args:
        key: (p, a)
        center: Expansion tag
        order: Truncation order

    Returns:
        Analytic LaurentJet
    """
    return _local_factor_cached(key.p, key.a, center, order, mpmath.mp.dps)


@lru_cache(maxsize=65536)
def _local_factor_cached(p: int, a: int, center: JetCenter, order: int, dps: int) -> LaurentJet:
    return x_polynomial_jet(p, local_polynomial(a), center, order)


def cube_factor_jet(p: int, center: JetCenter = JetCenter.ONE,
                    order: int = DEFAULT_ORDER) -> LaurentJet:
    """Jet of (1 - p^{-s})^3."""
    return x_polynomial_jet(p, (1, -3, 3, -1), center, order)


def g_jet(q: IntLike, center: JetCenter = JetCenter.ONE,
          order: int = DEFAULT_ORDER) -> LaurentJet:
    """g(s,q) = product over p | q of the local factor with a = v_p(q)."""
    f = as_factored(q)
    return jet_product(
        (local_euler_factor(LocalFactorKey(p, a), center, order) for p, a in f.factors),
        order, center,
    )


def G_kd_jet(k: IntLike, d: IntLike, center: JetCenter = JetCenter.ONE,
             order: int = DEFAULT_ORDER) -> LaurentJet:
    """
    G_{k,d}(s) = sum_{e | d} mu(e) e^{-s} g(s, ek).

    Only squarefree e contribute.
    """
    k = int(k)
    terms = []
    for e, mu in as_factored(d).squarefree_divisors():
        term = g_jet(e * k, center, order)
        if e > 1:
            term = jet_mul(power_jet(e, -1, center, order), term)
        terms.append(jet_scale(term, mu))
    return jet_sum(terms, order, center)


def _h_jet_direct(f: FactoredInteger, center: JetCenter, order: int) -> LaurentJet:
    q = f.n
    terms = []
    for d, mu in f.squarefree_divisors():
        term = G_kd_jet(q // d, d, center, order)
        if d > 1:
            term = jet_mul(power_jet(d, 1, center, order), term)
        terms.append(jet_scale(term, mpf(mu) / totient(d)))
    return jet_sum(terms, order, center)


def H_jet(q: IntLike, center: JetCenter = JetCenter.ONE, order: int = DEFAULT_ORDER,
          prec: Optional[Precision] = None) -> LaurentJet:
    """
    H(s,q) = sum_{d | q} mu(d)/phi(d) d^s G_{q/d,d}(s) as an analytic jet.

    Results are memoised per (q, working precision, order, center) in a
    lock-protected table; the value does not depend on which thread fills it.

    Args:
        q: Modulus (int or FactoredInteger)
        center: Expansion tag
        order: Truncation order
        prec: Working precision

    Returns:
        Analytic LaurentJet
    """
    prec = resolve(prec)
    f = as_factored(q)
    key = (f.n, prec.working_dps, order, center)
    with _h_lock:
        cached = _h_memo.get(key)
    if cached is not None:
        return cached

    with prec.context():
        jet = _h_jet_direct(f, center, order)

    with _h_lock:
        _h_memo.setdefault(key, jet)
    return jet


def clear_memo() -> None:
    with _h_lock:
        _h_memo.clear()
    _local_factor_cached.cache_clear()


def max_relative_deviation(a: LaurentJet, b: LaurentJet) -> mpf:
    """Coefficient-wise relative deviation over the shared range of a and b."""
    m = max(a.pole_order, b.pole_order)
    order = min(a.order, b.order)
    pairs = ((a.coefficient(j), b.coefficient(j)) for j in range(-m, order + 1))
    return coefficientwise_deviation(pairs)


@dataclass(frozen=True)
class MultiplicativityCheck:
    """Outcome of comparing H(s, q1 q2) with H(s, q1) H(s, q2)."""

    q1: int
    q2: int
    max_deviation: mpf
    holds: bool


def h_multiplicativity_check(q1: int, q2: int, tolerance=mpf("1e-18"),
                             prec: Optional[Precision] = None) -> MultiplicativityCheck:
    """
    Record whether H_jet(q1 q2) equals H_jet(q1) * H_jet(q2) for coprime q1, q2.

    No production path assumes the outcome.
    """
    if gcd(q1, q2) != 1:
        raise ValueError(f"q1={q1} and q2={q2} must be coprime")
    prec = resolve(prec)
    with prec.context():
        joint = H_jet(q1 * q2, prec=prec)
        split = jet_mul(H_jet(q1, prec=prec), H_jet(q2, prec=prec))
        deviation = max_relative_deviation(joint, split)
    holds = deviation <= tolerance
    logger.debug(f"H multiplicativity ({q1}, {q2}): deviation {mpmath.nstr(deviation, 5)}")
    return MultiplicativityCheck(q1, q2, deviation, holds)
