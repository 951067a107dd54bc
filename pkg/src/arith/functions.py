"""
Elementary arithmetic functions: Mobius, totient, Ramanujan sums, d_k on
prime powers and sigma_{-1}.

All values are exact integers or rationals.
"""

from fractions import Fraction
from math import comb, gcd

import numpy as np

from .factorization import FactoredInteger, IntLike, as_factored, factorize

INT64_MAX = 2**63 - 1


class DkOverflowError(OverflowError):
    """d_k(p^j) does not fit in a signed 64-bit integer."""


def mobius(n: IntLike) -> int:
    """mu(n): 0 if n has a square factor, else (-1)^omega(n)."""
    f = as_factored(n)
    if not f.is_squarefree():
        return 0
    return -1 if f.omega % 2 else 1


def totient(n: IntLike) -> int:
    """Euler's phi(n) = n * prod_{p | n} (1 - 1/p)."""
    f = as_factored(n)
    result = 1
    for p, v in f.factors:
        result *= (p - 1) * p ** (v - 1)
    return result


def ramanujan_sum(q: int, h: int) -> int:
    """
    Ramanujan sum c_q(h) = sum_{d | (q, h)} d * mu(q/d).

    Evaluated through gcd(|h|, q), so c_q(-h) = c_q(h) and c_q(0) = phi(q).

    Args:
        q: Modulus, q >= 1
        h: Any integer

    Returns:
        Exact integer value
    """
    if q < 1:
        raise ValueError(f"ramanujan_sum requires q >= 1, got {q}")
    g = gcd(abs(int(h)), q)
    total = 0
    for d in factorize(g).divisors():
        mu = mobius(q // d)
        if mu:
            total += d * mu
    return total


def ramanujan_prefix_sum(q: int, H: int) -> int:
    """Exact sum_{h=1}^{H} c_q(h) = sum_{d | q} d * mu(q/d) * floor(H/d)."""
    if q < 1:
        raise ValueError(f"ramanujan_prefix_sum requires q >= 1, got {q}")
    if H <= 0:
        return 0
    total = 0
    for d in factorize(q).divisors():
        mu = mobius(q // d)
        if mu:
            total += d * mu * (H // d)
    return total


def dk_prime_power(k: int, j: int) -> int:
    """
    d_k(p^j) = binomial(j + k - 1, k - 1), the number of ordered k-tuples
    of prime-power exponents summing to j.
    """
    if k < 1 or j < 0:
        raise ValueError(f"dk_prime_power requires k >= 1 and j >= 0, got k={k}, j={j}")
    value = comb(j + k - 1, k - 1)
    if value > INT64_MAX:
        raise DkOverflowError(f"d_{k}(p^{j}) = {value} exceeds the 64-bit range")
    return value


def dk_table(k: int, max_exponent: int = 64) -> np.ndarray:
    """int64 array t with t[j] = d_k(p^j) for 0 <= j <= max_exponent."""
    return np.array([dk_prime_power(k, j) for j in range(max_exponent + 1)], dtype=np.int64)


def dk_value(k: int, n: IntLike) -> int:
    """d_k(n) assembled from the factorisation of n."""
    result = 1
    for _, v in as_factored(n).factors:
        result *= dk_prime_power(k, v)
    return result


def sigma_minus_one(h: IntLike) -> Fraction:
    """Exact sigma_{-1}(h) = sum_{j | h} 1/j."""
    f = as_factored(h)
    result = Fraction(1)
    for p, v in f.factors:
        result *= sum(Fraction(1, p**i) for i in range(v + 1))
    return result


def divisor_count(h: IntLike) -> int:
    """sigma_0(h)."""
    result = 1
    for _, v in as_factored(h).factors:
        result *= v + 1
    return result


def mobius_table(n: int) -> np.ndarray:
    """int8 array mu[0..n] with mu[0] = 0, computed by a linear sieve pass per prime."""
    mu = np.ones(n + 1, dtype=np.int8)
    mu[0] = 0
    if n < 2:
        return mu
    is_prime = np.ones(n + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, n + 1):
        if not is_prime[p]:
            continue
        is_prime[p * p::p] = False
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
    return mu


__all__ = [
    "DkOverflowError",
    "FactoredInteger",
    "divisor_count",
    "dk_prime_power",
    "dk_table",
    "dk_value",
    "mobius",
    "mobius_table",
    "ramanujan_prefix_sum",
    "ramanujan_sum",
    "sigma_minus_one",
    "totient",
]
