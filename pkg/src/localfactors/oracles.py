"""
Definition-following evaluations used to cross-check the closed-form jets.

These sum the local Euler series term by term and evaluate zeta with
mpmath, so they share no code path with the jet algebra.
"""

from dataclasses import dataclass
from math import fsum
from typing import Optional

import mpmath
import numpy as np
from mpmath import mpf

from src.arith import as_factored, dk_prime_power, dk_value, totient
from src.jets import Precision, contour_residue_oracle
from src.jets.precision import resolve
from src.sieve import dk_segment

MAX_SERIES_TERMS = 4000
CONTOUR_RADIUS = mpf(1) / 8


def _local_series(p: int, a: int, s) -> mpmath.mpc:
    """sum_{j>=0} d_3(p^{j+a}) p^{-js}, summed until the terms are negligible."""
    x = mpmath.power(p, -s)
    eps = mpf(10) ** (-mpmath.mp.dps - 5)
    terms = []
    xj = mpf(1)
    for j in range(MAX_SERIES_TERMS):
        term = dk_prime_power(3, j + a) * xj
        terms.append(term)
        if j > 8 and abs(term) < eps:
            break
        xj *= x
    else:
        raise ArithmeticError(f"local series at p={p}, s={s} did not converge")
    return mpmath.fsum(terms)


def g_value(q: int, s) -> mpmath.mpc:
    """g(s,q) from its infinite-series definition."""
    result = mpf(1)
    for p, a in as_factored(q).factors:
        result *= (1 - mpmath.power(p, -s)) ** 3 * _local_series(p, a, s)
    return result


def G_value(k: int, d: int, s) -> mpmath.mpc:
    """G_{k,d}(s) = sum_{e | d} mu(e) e^{-s} g(s, ek)."""
    return mpmath.fsum(mu * mpmath.power(e, -s) * g_value(e * k, s)
                       for e, mu in as_factored(d).squarefree_divisors())


def h_value(q: int, s) -> mpmath.mpc:
    """H(s,q) = sum_{d | q} mu(d)/phi(d) d^s G_{q/d,d}(s)."""
    return mpmath.fsum(mpf(mu) / totient(d) * mpmath.power(d, s) * G_value(q // d, d, s)
                       for d, mu in as_factored(q).squarefree_divisors())


def f_principal_value(k: int, qstar: int, s) -> mpmath.mpc:
    """F_{k,q*}(s) from the Euler product, with zeta(s) evaluated by mpmath."""
    kf = as_factored(k)
    result = mpmath.zeta(s) ** 3
    for p in sorted(set(kf.primes) | set(as_factored(qstar).primes)):
        a = kf.valuation(p)
        cube = (1 - mpmath.power(p, -s)) ** 3
        if qstar % p == 0:
            result *= dk_prime_power(3, a) * cube
        else:
            result *= cube * _local_series(p, a, s)
    return result


def p_contour_value(x, q: int, radius=CONTOUR_RADIUS, prec: Optional[Precision] = None) -> mpf:
    """
    P(x,q) as the contour integral of zeta(s+1)^3 H(s+1,q) (x/q)^s over |s| = radius.
    """
    prec = resolve(prec)
    with prec.context():
        log_ratio = mpmath.log(mpf(x) / q)

        def integrand(s):
            return mpmath.zeta(s + 1) ** 3 * h_value(q, s + 1) * mpmath.exp(s * log_ratio)

        value = contour_residue_oracle(integrand, 0, radius, tol=mpf(10) ** (-prec.decimal_digits + 5))
    return value.real


@dataclass(frozen=True)
class TruncationEstimate:
    """Partial Dirichlet sum with a crude bound for the omitted tail."""

    value: float
    tail_bound: float


def dirichlet_truncation_oracle(k: int, qstar: int, s_real: float,
                                M: int = 10**6) -> TruncationEstimate:
    """
    sum_{n <= M, (n, q*) = 1} d_3(nk) n^{-s} from sieved d_3 values.

    The tail bound uses d_3(nk) <= d_3(n) d_3(k) and the average order
    (log t)^2 / 2 of d_3, doubled: d_3(k) M^{1-s} (log M)^2 / (s - 1).

    Args:
        k: Multiplier, k >= 1
        qstar: Character modulus, q* >= 1
        s_real: Real point, s >= 1.5
        M: Cutoff, M >= 10^4

    Returns:
        TruncationEstimate with the partial sum and tail bound
    """
    if s_real < 1.5:
        raise ValueError(f"dirichlet_truncation_oracle needs s >= 1.5, got {s_real}")
    if M < 10**4:
        raise ValueError(f"dirichlet_truncation_oracle needs M >= 10^4, got {M}")
    if k < 1 or qstar < 1:
        raise ValueError(f"k and q* must be positive, got k={k}, q*={qstar}")

    segment = dk_segment(3, 0, M * k)
    # values[i] holds d_3(i + 1); d_3(nk) sits at index nk - 1
    values = segment.values[k - 1::k][:M].astype(np.float64)
    n = np.arange(1, M + 1, dtype=np.int64)
    mask = np.gcd(n, qstar) == 1
    terms = values[mask] * np.power(n[mask].astype(np.float64), -s_real)
    partial = fsum(terms)

    tail = dk_value(3, k) * M ** (1 - s_real) * np.log(M) ** 2 / (s_real - 1)
    return TruncationEstimate(value=partial, tail_bound=float(tail))


__all__ = [
    "G_value",
    "TruncationEstimate",
    "dirichlet_truncation_oracle",
    "f_principal_value",
    "g_value",
    "h_value",
    "p_contour_value",
]
