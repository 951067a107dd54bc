"""
Segmented sieve for d_k(n).

Every n in a chunk is factored by the primes p <= sqrt(hi): at the multiples
of p^j the running product swaps its d_k(p^{j-1}) factor for d_k(p^j) and the
cofactor loses one p. Whatever cofactor survives is a single prime above
sqrt(hi) and contributes d_k(p) = k.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import isqrt
from typing import Iterator, Optional

import numpy as np

from src import config
from src.arith import dk_table

from . import cache

logger = logging.getLogger(__name__)

MAX_SIEVE = 10**10


class SegmentBudgetError(MemoryError):
    """The requested interval exceeds segment_size * segment_count entries."""


@dataclass(frozen=True)
class SieveConfig:
    """Sieve memory budget, worker count and optional cache directory."""

    segment_size: int = field(default_factory=lambda: config.SEGMENT_SIZE)
    segment_count: int = field(default_factory=lambda: config.SEGMENT_COUNT)
    workers: int = field(default_factory=lambda: config.WORKERS)
    cache_dir: Optional[str] = field(default_factory=lambda: config.CACHE_DIR)

    def __post_init__(self):
        if self.segment_size < 1 or self.segment_count < 1:
            raise ValueError("segment_size and segment_count must be positive")
        if self.workers < 1:
            raise ValueError(f"workers must be positive, got {self.workers}")

    @property
    def budget(self) -> int:
        return self.segment_size * self.segment_count


@dataclass(frozen=True)
class SieveSegment:
    """Exact d_k(n) for n in (lo, hi]; values[i] = d_k(lo + 1 + i)."""

    k: int
    lo: int
    hi: int
    values: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.hi - self.lo:
            raise ValueError(f"Segment ({self.lo}, {self.hi}] needs {self.hi - self.lo} values")

    def __len__(self) -> int:
        return self.hi - self.lo

    def value_at(self, n: int) -> int:
        if not self.lo < n <= self.hi:
            raise IndexError(f"{n} outside ({self.lo}, {self.hi}]")
        return int(self.values[n - self.lo - 1])

    def total(self) -> int:
        """Exact sum of the segment's values."""
        return int(self.values.sum(dtype=np.int64))


@lru_cache(maxsize=8)
def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for i in range(2, isqrt(limit) + 1):
        if is_prime[i]:
            is_prime[i * i::i] = False
    return np.nonzero(is_prime)[0].astype(np.int64)


def _sieve_chunk(k: int, lo: int, hi: int, primes: np.ndarray, table: np.ndarray) -> np.ndarray:
    rest = np.arange(lo + 1, hi + 1, dtype=np.int64)
    values = np.ones(hi - lo, dtype=np.int64)
    for p in primes:
        p = int(p)
        pj = p
        j = 1
        while pj <= hi:
            first = (lo // pj + 1) * pj
            if first > hi:
                break
            idx = first - lo - 1
            values[idx::pj] = values[idx::pj] // table[j - 1] * table[j]
            rest[idx::pj] //= p
            pj *= p
            j += 1
    values[rest > 1] *= table[1]
    return values


def _validate_range(lo: int, hi: int) -> None:
    if not 0 <= lo < hi <= MAX_SIEVE:
        raise ValueError(f"Sieve range must satisfy 0 <= lo < hi <= 10^10, got ({lo}, {hi}]")


def _compute(k: int, lo: int, hi: int, cfg: SieveConfig) -> np.ndarray:
    primes = base_primes(isqrt(hi))
    table = dk_table(k, hi.bit_length())
    bounds = [(a, min(a + cfg.segment_size, hi)) for a in range(lo, hi, cfg.segment_size)]
    if cfg.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(lambda b: _sieve_chunk(k, b[0], b[1], primes, table), bounds))
    else:
        chunks = [_sieve_chunk(k, a, b, primes, table) for a, b in bounds]
    return chunks[0] if len(chunks) == 1 else np.concatenate(chunks)


def dk_segment(k: int, lo: int, hi: int, cfg: Optional[SieveConfig] = None) -> SieveSegment:
    """
    Exact d_k(n) for every n in (lo, hi].

    Args:
        k: Divisor-function index, k >= 1
        lo: Exclusive lower bound, lo >= 0
        hi: Inclusive upper bound, hi <= 10^10
        cfg: Sieve configuration (defaults from environment)

    Returns:
        SieveSegment

    Raises:
        SegmentBudgetError: hi - lo exceeds the configured budget
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    _validate_range(lo, hi)
    cfg = cfg or SieveConfig()
    if hi - lo > cfg.budget:
        raise SegmentBudgetError(
            f"Interval of {hi - lo} entries exceeds the budget of {cfg.budget} "
            f"({cfg.segment_count} segments of {cfg.segment_size})"
        )

    if cfg.cache_dir:
        cached = cache.load_values(cfg.cache_dir, k, lo, hi)
        if cached is not None:
            return SieveSegment(k, lo, hi, cached)

    values = _compute(k, lo, hi, cfg)
    if k == 3:
        assert values.max() < 2**32, "d_3 exceeded 32 bits"
    if cfg.cache_dir and values.max() <= np.iinfo(np.uint32).max:
        cache.store_values(cfg.cache_dir, k, lo, hi, values)
    return SieveSegment(k, lo, hi, values)


def iter_segments(k: int, lo: int, hi: int, cfg: Optional[SieveConfig] = None,
                  size: Optional[int] = None) -> Iterator[SieveSegment]:
    """Stream (lo, hi] as consecutive segments of at most `size` entries."""
    _validate_range(lo, hi)
    cfg = cfg or SieveConfig()
    size = size or cfg.segment_size
    for a in range(lo, hi, size):
        yield dk_segment(k, a, min(a + size, hi), cfg)


def d3_partial_sum(t: int, cfg: Optional[SieveConfig] = None,
                   limit: Optional[int] = None) -> int:
    """
    Exact sum_{n <= t} d_3(n), streamed over segments.

    Args:
        t: Upper limit, 1 <= t <= limit
        cfg: Sieve configuration
        limit: Largest accepted t (defaults to D3_PARTIAL_SUM_LIMIT)

    Returns:
        Exact integer
    """
    limit = limit if limit is not None else config.PARTIAL_SUM_LIMIT
    if not 1 <= t <= limit:
        raise ValueError(f"d3_partial_sum requires 1 <= t <= {limit}, got {t}")
    total = 0
    for segment in iter_segments(3, 0, t, cfg):
        total += segment.total()
    logger.debug(f"sum_(n<={t}) d_3(n) = {total}")
    return total
