"""
Exact integer correlation through number-theoretic transforms.

Residues are kept in uint64 (products of two residues below 2^31 fit), each
block is transformed modulo two or three word-size NTT primes, and the lags
that are actually needed are recombined with the Chinese remainder theorem.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Sequence

import numpy as np

logger = logging.getLogger(__name__)

MIN_BLOCK = 2**16
LAG_WINDOW = 2**22


@dataclass(frozen=True)
class NTTPrime:
    """p = c * 2^e + 1 with a primitive root g."""

    modulus: int
    root: int
    max_log2: int


PRIMES = (
    NTTPrime(2013265921, 31, 27),
    NTTPrime(469762049, 3, 26),
    NTTPrime(167772161, 3, 25),
)
MAX_TRANSFORM = 2 ** min(p.max_log2 for p in PRIMES)


class CorrelationOverflowError(OverflowError):
    """The exact result may exceed the product of all available moduli."""


def next_pow2(n: int) -> int:
    return 1 << max(0, (n - 1).bit_length())


@lru_cache(maxsize=32)
def _bit_reversal(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n, dtype=np.int64)
    rev = np.zeros(n, dtype=np.int64)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx >>= 1
    return rev


@lru_cache(maxsize=256)
def _twiddles(modulus: int, root: int, length: int, invert: bool) -> np.ndarray:
    """w^0 .. w^{length/2 - 1} for a primitive length-th root w, built by doubling."""
    w = pow(root, (modulus - 1) // length, modulus)
    if invert:
        w = pow(w, modulus - 2, modulus)
    half = length // 2
    tw = np.ones(1, dtype=np.uint64)
    step = w
    p = np.uint64(modulus)
    while len(tw) < half:
        tw = np.concatenate([tw, tw * np.uint64(step) % p])
        step = step * step % modulus
    return tw[:half]


def ntt(values: np.ndarray, prime: NTTPrime, invert: bool = False) -> np.ndarray:
    """
    Iterative radix-2 Cooley-Tukey transform modulo prime.modulus.

    Args:
        values: uint64 residues, length a power of two <= 2^max_log2
        prime: Transform prime
        invert: Inverse transform (includes the 1/n scaling)

    Returns:
        New uint64 array
    """
    n = len(values)
    if n & (n - 1) or n > 2**prime.max_log2:
        raise ValueError(f"Transform length {n} must be a power of two <= 2^{prime.max_log2}")
    p = np.uint64(prime.modulus)
    a = values[_bit_reversal(n)].astype(np.uint64)
    length = 2
    while length <= n:
        half = length // 2
        tw = _twiddles(prime.modulus, prime.root, length, invert)
        view = a.reshape(-1, length)
        u = view[:, :half].copy()
        v = view[:, half:] * tw % p
        view[:, :half] = (u + v) % p
        view[:, half:] = (u + p - v) % p
        length *= 2
    if invert:
        a = a * np.uint64(pow(n, prime.modulus - 2, prime.modulus)) % p
    return a


def convolve_mod(a: np.ndarray, b: np.ndarray, prime: NTTPrime) -> np.ndarray:
    """Cyclic-free convolution of a and b modulo prime.modulus."""
    size = next_pow2(len(a) + len(b) - 1)
    fa = np.zeros(size, dtype=np.uint64)
    fb = np.zeros(size, dtype=np.uint64)
    p = np.uint64(prime.modulus)
    fa[:len(a)] = a.astype(np.uint64) % p
    fb[:len(b)] = b.astype(np.uint64) % p
    fa = ntt(fa, prime)
    fb = ntt(fb, prime)
    return ntt(fa * fb % p, prime, invert=True)[:len(a) + len(b) - 1]


def primes_for_bound(bound: int) -> List[NTTPrime]:
    """Fewest primes (at least two) whose product exceeds bound."""
    chosen = list(PRIMES[:2])
    product = chosen[0].modulus * chosen[1].modulus
    if bound >= product:
        chosen.append(PRIMES[2])
        product *= PRIMES[2].modulus
        logger.debug(f"Correlation bound {bound} needs a third NTT prime")
    if bound >= product:
        raise CorrelationOverflowError(
            f"Correlation values up to {bound} exceed the CRT modulus {product}"
        )
    return chosen


def crt(residues: Sequence[np.ndarray], primes: Sequence[NTTPrime]) -> List[int]:
    """Garner recombination to exact non-negative Python integers."""
    moduli = [p.modulus for p in primes]
    result = [int(r) for r in residues[0]]
    product = moduli[0]
    for r_arr, m in zip(residues[1:], moduli[1:]):
        inv = pow(product % m, m - 2, m)
        result = [x + product * (((int(r) - x) * inv) % m) for x, r in zip(result, r_arr)]
        product *= m
    return result


def _block_correlation(a_blk: np.ndarray, window: np.ndarray, lags: range,
                       primes: Sequence[NTTPrime]) -> List[int]:
    reversed_a = a_blk[::-1].astype(np.uint64)
    w = window.astype(np.uint64)
    # sum_i a[i] window[i + h] sits at index len(a_blk) - 1 + h of conv(rev(a), window)
    offset = len(a_blk) - 1
    positions = np.array([offset + h for h in lags], dtype=np.int64)
    residues = [convolve_mod(reversed_a, w, prime)[positions] for prime in primes]
    return crt(residues, primes)


def exact_correlation(a: np.ndarray, b: np.ndarray, max_lag: int, min_lag: int = 0,
                      workers: int = 1, block: int = 0) -> np.ndarray:
    """
    C(h) = sum_{0 <= i < len(a)} a[i] * b[i + h] for min_lag <= h <= max_lag.

    b must have at least len(a) + max_lag entries; all entries are
    non-negative integers. Lag ranges wider than LAG_WINDOW are split into
    windows of LAG_WINDOW lags that are correlated one after another. Within
    a window of width W, a is cut into blocks of B = max(2^16, 2^ceil(log2 W))
    entries; each block is correlated against its window of b, and block
    results are added in block order.

    Args:
        a: Left sequence
        b: Right sequence
        max_lag: Largest lag H
        min_lag: Smallest lag
        workers: Thread count for block transforms
        block: Override the block size (power of two)

    Returns:
        int64 array indexed by h - min_lag

    Raises:
        CorrelationOverflowError: no prime set covers the value bound
    """
    if min_lag < 0 or max_lag < min_lag:
        raise ValueError(f"Invalid lag range [{min_lag}, {max_lag}]")
    if len(b) < len(a) + max_lag:
        raise ValueError(f"b needs {len(a) + max_lag} entries, has {len(b)}")
    if len(a) and (a.min() < 0 or b.min() < 0):
        raise ValueError("exact_correlation expects non-negative integers")

    if max_lag - min_lag + 1 > LAG_WINDOW:
        bounds = [(lo, min(lo + LAG_WINDOW - 1, max_lag))
                  for lo in range(min_lag, max_lag + 1, LAG_WINDOW)]
        logger.info(f"Splitting lags [{min_lag}, {max_lag}] into {len(bounds)} windows")
        return np.concatenate([exact_correlation(a, b, hi, lo, workers, block)
                               for lo, hi in bounds])

    # lags are taken relative to min_lag, against b shifted by min_lag
    span = max_lag - min_lag
    B = block or max(MIN_BLOCK, next_pow2(span + 1))
    if next_pow2(2 * B + span) > MAX_TRANSFORM:
        raise ValueError(f"Block size {B} too large for the available NTT lengths")

    max_a = int(a.max()) if len(a) else 0
    max_b = int(b.max()) if len(b) else 0
    primes = primes_for_bound(min(B, len(a)) * max_a * max_b)
    if len(a) * max_a * max_b >= 2**63:
        raise CorrelationOverflowError("Total correlation may exceed the int64 range")

    lags = range(0, span + 1)
    starts = list(range(0, len(a), B))

    def run(i0: int) -> List[int]:
        a_blk = a[i0:i0 + B]
        window = b[i0 + min_lag:i0 + min_lag + len(a_blk) + span]
        return _block_correlation(a_blk, window, lags, primes)

    total = np.zeros(len(lags), dtype=np.int64)
    if workers > 1 and len(starts) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for partial in pool.map(run, starts):
                total += np.array(partial, dtype=np.int64)
    else:
        for i0 in starts:
            total += np.array(run(i0), dtype=np.int64)
    logger.debug(f"Correlated {len(a)} entries in {len(starts)} blocks of {B}")
    return total
