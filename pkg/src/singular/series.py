"""
Singular series S(x,h) = sum_q c_q(h)/q^2 P(x,q)^2 and its integral main terms.

Truncation follows one rule throughout: after summing q <= Q the tail is
estimated as sigma_0(h) * S * 2/Q, where S is the largest observed |P|^2
(or |int P^2|, for integrated sums) over the top decade (Q/10, Q]. In auto
mode Q doubles from max(1000, 4h) until the estimate drops below
rel_tol * |value|.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import mpmath
import numpy as np
import pandas as pd
from mpmath import mpf
from tqdm import tqdm

from src import config
from src.arith import divisor_count, factorize, mobius_table, ramanujan_prefix_sum, ramanujan_sum
from src.jets import LogPolynomial, Precision
from src.jets.precision import resolve

from .polynomials import p_polynomial, store

logger = logging.getLogger(__name__)

FSUM_CHUNK = 1024
AUTO_Q_START = 1000
AUTO_Q_LIMIT = 2**20
TABLE_CHUNK = 256


class SeriesSaturationError(RuntimeError):
    """Auto mode needed q_max beyond 2^20; carries the last partial value."""

    def __init__(self, message: str, partial: "SingularValue"):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class SingularValue:
    """Partial sum over q <= q_max with its heuristic tail estimate."""

    value: mpf
    q_max: int
    tail_estimate: mpf
    terms_used: int


@dataclass(frozen=True)
class SeriesOptions:
    """
    Truncation and execution options for series evaluations.

    Attributes:
        q_max: Fixed truncation point, or None for auto mode
        rel_tol: Auto-mode target for tail_estimate / |value|
        workers: Process count for filling the P-polynomial table
        precision: Working precision
        progress: Show a tqdm bar while filling tables
    """

    q_max: Optional[int] = None
    rel_tol: float = 1e-3
    workers: int = field(default_factory=lambda: config.WORKERS)
    precision: Precision = field(default_factory=Precision.default)
    progress: bool = False

    def __post_init__(self):
        if self.q_max is not None and self.q_max < 1:
            raise ValueError(f"q_max must be positive, got {self.q_max}")
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")


def deterministic_fsum(values: Iterable) -> mpf:
    """
    Sum in fixed chunks of 1024 with mpmath.fsum, then fsum the chunk partials.

    The grouping depends only on the order of values, never on how they were
    produced.
    """
    partials = []
    chunk: List = []
    for v in values:
        chunk.append(v)
        if len(chunk) == FSUM_CHUNK:
            partials.append(mpmath.fsum(chunk))
            chunk = []
    if chunk:
        partials.append(mpmath.fsum(chunk))
    return mpmath.fsum(partials)


# ============================================
# P-polynomial table
# ============================================

def _init_worker(digits: int) -> None:
    mpmath.mp.dps = Precision(digits).working_dps


def _compute_range(lo: int, hi: int, digits: int) -> List[LogPolynomial]:
    prec = Precision(digits)
    return [p_polynomial(q, prec) for q in range(lo, hi)]


class PolynomialTable:
    """
    P(x,q) for q = 1..Q, filled in order and extended on demand.

    With workers > 1 the fill runs in a process pool over fixed q-ranges;
    ranges are collected in submission order so the table is the same for
    any worker count.
    """

    def __init__(self, prec: Optional[Precision] = None, workers: int = 1, progress: bool = False):
        self.prec = resolve(prec)
        self.workers = max(1, workers)
        self.progress = progress
        self._polys: List[Optional[LogPolynomial]] = [None]

    @property
    def size(self) -> int:
        return len(self._polys) - 1

    def ensure(self, Q: int) -> None:
        start = self.size + 1
        if Q < start:
            return
        logger.info(f"Filling P-polynomial table for q in [{start}, {Q}]")
        ranges = [(a, min(a + TABLE_CHUNK, Q + 1)) for a in range(start, Q + 1, TABLE_CHUNK)]
        digits = self.prec.decimal_digits

        if self.workers > 1 and len(ranges) > 1:
            with ProcessPoolExecutor(max_workers=self.workers, initializer=_init_worker,
                                     initargs=(digits,)) as pool:
                futures = [pool.submit(_compute_range, a, b, digits) for a, b in ranges]
                results: Iterable = (f.result() for f in futures)
                for (a, _), polys in tqdm(zip(ranges, results), total=len(ranges),
                                          disable=not self.progress, desc="P table"):
                    for offset, poly in enumerate(polys):
                        store(a + offset, self.prec, poly)
                    self._polys.extend(polys)
        else:
            for a, b in tqdm(ranges, disable=not self.progress, desc="P table"):
                self._polys.extend(_compute_range(a, b, digits))

    def __getitem__(self, q: int) -> LogPolynomial:
        self.ensure(q)
        return self._polys[q]


_tables: Dict[int, PolynomialTable] = {}


def shared_table(opts: SeriesOptions) -> PolynomialTable:
    """One table per working precision, reused across calls."""
    key = opts.precision.working_dps
    table = _tables.get(key)
    if table is None:
        table = _tables[key] = PolynomialTable(opts.precision, opts.workers, opts.progress)
    table.workers = max(1, opts.workers)
    table.progress = opts.progress
    return table


# ============================================
# Truncated sums with doubling
# ============================================

def _tail(h: int, sup, Q: int) -> mpf:
    return divisor_count(h) * sup * 2 / mpf(Q)


class _RunningSum:
    """
    c_q(h) P(x,q)^2 / q^2 accumulated in q order, for one x.

    Extending to a larger Q only visits the new q; the value is re-summed
    over the kept terms with deterministic_fsum, so it equals a fresh sum
    truncated at the same Q.
    """

    def __init__(self, h: int, p_of: Callable[[int], mpf]):
        self.h = h
        self.p_of = p_of
        self.terms: List[mpf] = []
        self.sups: List[Tuple[int, mpf]] = []
        self.last = 0

    def extend(self, Q: int) -> SingularValue:
        if Q < self.last:
            raise ValueError(f"Cannot shrink a running sum from q_max={self.last} to {Q}")
        for q in range(self.last + 1, Q + 1):
            c = ramanujan_sum(q, self.h)
            if c == 0:
                continue
            p = self.p_of(q)
            self.terms.append(c * p ** 2 / (mpf(q) ** 2))
            if 10 * q > Q:
                self.sups.append((q, abs(p) ** 2))
        self.last = Q
        # Q never shrinks, so entries at or below Q/10 stay out of every later top decade
        self.sups = [(q, s) for q, s in self.sups if 10 * q > Q]
        top = max((s for _, s in self.sups), default=mpf(0))
        return SingularValue(deterministic_fsum(self.terms), Q, _tail(self.h, top, Q),
                             len(self.terms))


def _auto(h: int, evaluate: Callable[[int], SingularValue], opts: SeriesOptions) -> SingularValue:
    if opts.q_max is not None:
        return evaluate(opts.q_max)
    Q = max(AUTO_Q_START, 4 * h)
    while True:
        result = evaluate(Q)
        if result.tail_estimate < opts.rel_tol * abs(result.value):
            return result
        if 2 * Q > AUTO_Q_LIMIT:
            raise SeriesSaturationError(
                f"Auto q_max exceeded {AUTO_Q_LIMIT} for h={h}: "
                f"tail {mpmath.nstr(result.tail_estimate, 5)} "
                f"vs value {mpmath.nstr(result.value, 5)}",
                result,
            )
        Q *= 2
        logger.info(f"Doubling q_max to {Q} for h={h}")


def singular_series(x, h: int, opts: Optional[SeriesOptions] = None) -> SingularValue:
    """
    Truncated singular series at x.

    Args:
        x: Real point, x > 1
        h: Shift, h >= 1
        opts: Truncation options (q_max None selects auto mode)

    Returns:
        SingularValue

    Raises:
        SeriesSaturationError: auto mode needed q_max > 2^20
    """
    if x <= 1:
        raise ValueError(f"singular_series requires x > 1, got {x}")
    if h < 1:
        raise ValueError(f"singular_series requires h >= 1, got {h}")
    opts = opts or SeriesOptions()
    table = shared_table(opts)

    running = _RunningSum(h, lambda q: table[q].evaluate(x))

    def evaluate(Q: int) -> SingularValue:
        table.ensure(Q)
        with opts.precision.context():
            return running.extend(Q)

    return _auto(h, evaluate, opts)


# ============================================
# Integrated main terms
# ============================================

class MainTermEngine:
    """
    Integrals I_q = int_N^{2N} P(x,q)^2 dx for a fixed N, and the main terms
    M(h) = sum_{q <= Q} c_q(h)/q^2 I_q built from them.

    c_q(h) = sum_{d | (q,h)} d mu(q/d) turns the sum into
    M(h) = sum_{d | h} d W(d) with W(d) = sum_{m <= Q/d} mu(m) I_{dm} / (dm)^2,
    so one table of W serves every h.
    """

    def __init__(self, N: int, opts: Optional[SeriesOptions] = None):
        if N < 1:
            raise ValueError(f"N must be positive, got {N}")
        self.N = N
        self.opts = opts or SeriesOptions()
        self.table = shared_table(self.opts)
        self._integrals: List[mpf] = [mpf(0)]
        self._weights: Dict[Tuple[int, int], mpf] = {}
        self._mobius: Dict[int, np.ndarray] = {}
        self._tops: Dict[int, mpf] = {}

    def integral(self, q: int) -> mpf:
        """int_N^{2N} P(x,q)^2 dx in closed form."""
        self._ensure_integrals(q)
        return self._integrals[q]

    def _ensure_integrals(self, Q: int) -> None:
        if Q < len(self._integrals):
            return
        self.table.ensure(Q)
        with self.opts.precision.context():
            for q in range(len(self._integrals), Q + 1):
                self._integrals.append(self.table[q].square().integrate(self.N, 2 * self.N))

    def _top(self, Q: int) -> mpf:
        """Largest |I_q| over the top decade (Q/10, Q]."""
        if Q not in self._tops:
            self._ensure_integrals(Q)
            self._tops[Q] = max(abs(self._integrals[q]) for q in range(Q // 10 + 1, Q + 1))
        return self._tops[Q]

    def weight(self, d: int, Q: int) -> mpf:
        """W(d) at truncation Q."""
        key = (d, Q)
        if key not in self._weights:
            self._ensure_integrals(Q)
            if Q not in self._mobius:
                self._mobius[Q] = mobius_table(Q)
            mu = self._mobius[Q]
            with self.opts.precision.context():
                self._weights[key] = deterministic_fsum(
                    int(mu[m]) * self._integrals[d * m] / mpf(d * m) ** 2
                    for m in range(1, Q // d + 1) if mu[m]
                )
        return self._weights[key]

    def main_value(self, h: int, Q: int) -> mpf:
        """M(h) truncated at Q."""
        with self.opts.precision.context():
            return deterministic_fsum(d * self.weight(d, Q)
                                      for d in factorize(h).divisors() if d <= Q)

    def tail(self, h: int, Q: int) -> mpf:
        return _tail(h, self._top(Q), Q)

    def main_at(self, h: int, Q: int) -> SingularValue:
        """M(h) truncated at Q, with its tail estimate and count of nonzero c_q(h)."""
        value = self.main_value(h, Q)
        used = sum(1 for q in range(1, Q + 1) if ramanujan_sum(q, h))
        return SingularValue(value, Q, self.tail(h, Q), used)

    def main_term(self, h: int) -> SingularValue:
        return _auto(h, lambda Q: self.main_at(h, Q), self.opts)

    def choose_q_max(self, hs: Sequence[int]) -> int:
        """
        Common truncation for a sweep over hs: the fixed q_max, or the
        smallest doubling that meets rel_tol for every h in hs.
        """
        if self.opts.q_max is not None:
            return self.opts.q_max
        hs = list(hs)
        Q = max(AUTO_Q_START, 4 * max(hs))
        while True:
            with self.opts.precision.context():
                worst = max(self.tail(h, Q) / abs(self.main_value(h, Q)) for h in hs)
            if worst < self.opts.rel_tol:
                return Q
            if 2 * Q > AUTO_Q_LIMIT:
                raise SeriesSaturationError(
                    f"Auto q_max exceeded {AUTO_Q_LIMIT} at N={self.N}: worst relative tail "
                    f"{mpmath.nstr(worst, 5)}",
                    self.main_at(hs[-1], Q),
                )
            Q *= 2
            logger.info(f"Doubling common q_max to {Q} at N={self.N}")

    def prefix_sum(self, H: int, Q: int) -> mpf:
        """sum_{q <= Q} (sum_{h <= H} c_q(h)) / q^2 I_q."""
        self._ensure_integrals(Q)
        with self.opts.precision.context():
            return deterministic_fsum(
                ramanujan_prefix_sum(q, H) * self._integrals[q] / mpf(q) ** 2
                for q in range(1, Q + 1)
            )


def main_term_integral(N: int, h: int, opts: Optional[SeriesOptions] = None) -> mpf:
    """
    int_N^{2N} S(x,h) dx = sum_q c_q(h)/q^2 int_N^{2N} P(x,q)^2 dx, in closed form.

    Args:
        N: Range start, N >= 1
        h: Shift, h >= 1
        opts: Truncation options

    Returns:
        High-precision real

    Raises:
        SeriesSaturationError: auto mode needed q_max > 2^20
    """
    if h < 1:
        raise ValueError(f"main_term_integral requires h >= 1, got {h}")
    return MainTermEngine(N, opts).main_term(h).value


def first_moment_main(N: int, H: int, prec: Optional[Precision] = None) -> mpf:
    """H * int_N^{2N} P(t,1)^2 dt, the q = 1 part of the first moment."""
    if H < 0:
        raise ValueError(f"H must be non-negative, got {H}")
    if H == 0:
        return mpf(0)
    prec = resolve(prec)
    with prec.context():
        return H * p_polynomial(1, prec).square().integrate(N, 2 * N)


def first_moment_split(N: int, H: int, opts: Optional[SeriesOptions] = None) -> mpf:
    """
    F(N,H) = sum_{h <= H} int_N^{2N} S(x,h) dx through the exact prefix sums
    sum_{h <= H} c_q(h), at the common truncation chosen for h = 1..H.
    """
    if H < 1:
        return mpf(0)
    engine = MainTermEngine(N, opts)
    Q = engine.choose_q_max(range(1, H + 1))
    return engine.prefix_sum(H, Q)


def p_decade_sup(x, q_max: int, opts: Optional[SeriesOptions] = None) -> pd.DataFrame:
    """
    Observed sup |P(x,q)| on each decade [10^j, 10^{j+1}) of q <= q_max.

    Returns:
        DataFrame with columns decade_start, decade_end, sup_abs_p, argmax_q
    """
    opts = opts or SeriesOptions()
    table = shared_table(opts)
    table.ensure(q_max)
    rows = []
    start = 1
    with opts.precision.context():
        while start <= q_max:
            end = min(10 * start - 1, q_max)
            best_q, best = start, mpf(-1)
            for q in range(start, end + 1):
                value = abs(table[q].evaluate(x))
                if value > best:
                    best_q, best = q, value
            rows.append({
                "decade_start": start,
                "decade_end": end,
                "sup_abs_p": float(best),
                "argmax_q": best_q,
            })
            start *= 10
    return pd.DataFrame(rows)
