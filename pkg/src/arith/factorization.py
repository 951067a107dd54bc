"""
Integer factorisation for the small moduli used throughout the package.

Trial division against a cached prime table up to 10^6; a cofactor left over
after the table is exhausted is certified with sympy's deterministic 64-bit
primality test.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, List, Tuple, Union

import numpy as np
from sympy import factorint, isprime

TRIAL_LIMIT = 10**6
MAX_INPUT = 2**63


@dataclass(frozen=True)
class FactoredInteger:
    """A positive integer together with its canonical factorisation."""

    n: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        value = 1
        previous = 1
        for p, v in self.factors:
            if p <= previous or v < 1:
                raise ValueError(f"Non-canonical factorisation of {self.n}: {self.factors}")
            previous = p
            value *= p**v
        if value != self.n:
            raise ValueError(f"Factors {self.factors} do not multiply to {self.n}")

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        """Number of distinct prime factors."""
        return len(self.factors)

    def valuation(self, p: int) -> int:
        for prime, v in self.factors:
            if prime == p:
                return v
        return 0

    def is_squarefree(self) -> bool:
        return all(v == 1 for _, v in self.factors)

    def divisors(self) -> List[int]:
        """All positive divisors in increasing order."""
        divs = [1]
        for p, v in self.factors:
            divs = [d * p**j for d in divs for j in range(v + 1)]
        return sorted(divs)

    def squarefree_divisors(self) -> Iterator[Tuple[int, int]]:
        """Yield (d, mu(d)) for the squarefree divisors d of n."""
        for mask in product((0, 1), repeat=len(self.factors)):
            d = 1
            sign = 1
            for bit, (p, _) in zip(mask, self.factors):
                if bit:
                    d *= p
                    sign = -sign
            yield d, sign

    def __int__(self) -> int:
        return self.n


IntLike = Union[int, FactoredInteger]


@lru_cache(maxsize=1)
def _trial_primes() -> np.ndarray:
    is_prime = np.ones(TRIAL_LIMIT + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, int(TRIAL_LIMIT**0.5) + 1):
        if is_prime[i]:
            is_prime[i * i::i] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


@lru_cache(maxsize=65536)
def factorize(n: int) -> FactoredInteger:
    """
    Canonical factorisation of 1 <= n < 2^63.

    Args:
        n: Positive integer

    Returns:
        FactoredInteger with primes in increasing order
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"factorize requires a positive integer, got {n}")
    if n >= MAX_INPUT:
        raise ValueError(f"factorize supports n < 2^63, got {n}")

    factors: List[Tuple[int, int]] = []
    m = n
    for p in _trial_primes():
        p = int(p)
        if p * p > m:
            break
        if m % p == 0:
            v = 0
            while m % p == 0:
                m //= p
                v += 1
            factors.append((p, v))

    if m > 1:
        if m <= TRIAL_LIMIT * TRIAL_LIMIT or isprime(m):
            factors.append((m, 1))
        else:
            # every prime factor exceeds 10^6, so at most three remain
            factors.extend(sorted(factorint(m).items()))

    return FactoredInteger(n=n, factors=tuple(factors))


def as_factored(n: IntLike) -> FactoredInteger:
    if isinstance(n, FactoredInteger):
        return n
    return factorize(n)
