"""
Verification suites run by `verify --suite NAME`.

Each suite returns a table for the CSV writer and a pass flag; the two
experiment suites (h-multiplicativity, p-sup) record data and always pass.
"""

import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Dict, List, Sequence

import mpmath
import numpy as np
from mpmath import mpf
from sympy import primerange

from src.arith import ramanujan_prefix_sum
from src.convolution import dk_shifted_sum, ingham_ratio, moment_report, shifted_sums_all
from src.jets import JetCenter
from src.localfactors import (
    G_kd_jet,
    f_principal_factor_jet,
    h_multiplicativity_check,
    max_relative_deviation,
    p_contour_value,
)
from src.sieve import SieveConfig, iter_segments, voronoi_main
from src.singular import SeriesOptions, p_decade_sup, p_polynomial, p_star_polynomial
from src.validation import RunConfig, VerifySuite

logger = logging.getLogger(__name__)

DIGITS = 20
JET_TOLERANCE = mpf("1e-18")
CONTOUR_TOLERANCE = mpf("1e-10")
CONTOUR_SAMPLES = 100
VORONOI_POINTS = (10**3, 10**4, 10**5, 10**6, 10**7)
VORONOI_SAMPLES = 50
INGHAM_BAND = (mpf("0.5"), mpf("1.5"))


@dataclass
class SuiteResult:
    name: str
    header: List[str]
    rows: List[list] = field(default_factory=list)
    passed: bool = True


def fmt(value, digits: int = DIGITS) -> str:
    return mpmath.nstr(value, digits)


# ============================================
# Identity and oracle suites
# ============================================

def dual_identity(cfg: RunConfig) -> SuiteResult:
    """P(x,q) = P*(x,q) coefficient-wise for q <= q_max (default 2000)."""
    q_max = cfg.q_max or 2000
    prec = cfg.precision()
    result = SuiteResult("dual-identity", ["q", "max_rel_deviation"])
    with prec.context():
        for q in range(1, q_max + 1):
            deviation = p_polynomial(q, prec).max_relative_deviation(p_star_polynomial(q, prec))
            result.rows.append([q, fmt(deviation, 5)])
            if deviation > JET_TOLERANCE:
                logger.error(f"P and P* differ at q={q}: {fmt(deviation, 5)}")
                result.passed = False
            if q % 500 == 0:
                logger.info(f"dual-identity checked q <= {q}")
    return result


def prime_powers(cfg: RunConfig) -> SuiteResult:
    """F_{q/d,d} / zeta^3 against G_{q/d,d} for q = p^alpha, p <= 50, alpha <= 5."""
    prec = cfg.precision()
    result = SuiteResult("prime-powers", ["p", "alpha", "beta", "max_rel_deviation"])
    with prec.context():
        for p in primerange(2, 51):
            p = int(p)
            for alpha in range(1, 6):
                for beta in range(alpha + 1):
                    k, d = p ** (alpha - beta), p ** beta
                    deviation = max_relative_deviation(
                        f_principal_factor_jet(k, d, JetCenter.ONE),
                        G_kd_jet(k, d, JetCenter.ONE),
                    )
                    result.rows.append([p, alpha, beta, fmt(deviation, 5)])
                    if deviation > JET_TOLERANCE:
                        result.passed = False
    return result


def carmichael(cfg: RunConfig) -> SuiteResult:
    """sum_{h=1}^{q} c_q(h) = 0 for 2 <= q <= 10^4."""
    q_max = cfg.q_max or 10**4
    failures = [q for q in range(2, q_max + 1) if ramanujan_prefix_sum(q, q) != 0]
    return SuiteResult("carmichael", ["q_from", "q_to", "failures"],
                       [[2, q_max, len(failures)]], passed=not failures)


def contour(cfg: RunConfig) -> SuiteResult:
    """
    P(x,q) from the residue engine against the numeric contour integral on
    |s| = 1/8 at random (x, q). Deviations are relative to the larger of |P|
    and its largest coefficient.
    """
    rng = np.random.default_rng(cfg.seed)
    prec = cfg.precision()
    result = SuiteResult("contour", ["x", "q", "jet_value", "contour_value", "rel_deviation"])
    for _ in range(CONTOUR_SAMPLES):
        q = int(rng.integers(1, 51))
        x = float(10 ** rng.uniform(3, 7))
        with prec.context():
            poly = p_polynomial(q, prec)
            jet_value = poly.evaluate(x)
            oracle = p_contour_value(x, q, prec=prec)
            scale = max(abs(jet_value), max(abs(c) for c in poly.coeffs))
            deviation = abs(jet_value - oracle) / scale
        result.rows.append([fmt(mpf(x)), q, fmt(jet_value), fmt(oracle), fmt(deviation, 5)])
        if deviation > CONTOUR_TOLERANCE:
            result.passed = False
    return result


# ============================================
# Sieve and correlation suites
# ============================================

def partial_sums_at(points: Sequence[int], cfg: RunConfig) -> Dict[int, int]:
    """sum_{n <= t} d_3(n) for every t in points from a single sieve sweep."""
    targets = sorted(set(points))
    sums: Dict[int, int] = {}
    running = 0
    i = 0
    for segment in iter_segments(3, 0, targets[-1], cfg.sieve_config()):
        prefix = np.cumsum(segment.values, dtype=np.int64)
        while i < len(targets) and targets[i] <= segment.hi:
            sums[targets[i]] = running + int(prefix[targets[i] - segment.lo - 1])
            i += 1
        running += int(prefix[-1])
    return sums


def voronoi(cfg: RunConfig) -> SuiteResult:
    """|sum_{n<=t} d_3(n) - voronoi_main(t)| <= 10 t^(2/3)."""
    rng = np.random.default_rng(cfg.seed)
    sampled = [int(t) for t in rng.integers(10**3, 10**7 + 1, size=VORONOI_SAMPLES)]
    points = list(VORONOI_POINTS) + sampled
    sums = partial_sums_at(points, cfg)
    prec = cfg.precision()
    result = SuiteResult("voronoi", ["t", "partial_sum", "main_term", "error", "bound"])
    for t in points:
        main = voronoi_main(t, prec)
        with prec.context():
            error = sums[t] - main
            bound = 10 * mpf(t) ** (mpf(2) / 3)
        result.rows.append([t, sums[t], fmt(main), fmt(error), fmt(bound)])
        if abs(error) > bound:
            logger.error(f"Voronoi envelope exceeded at t={t}")
            result.passed = False
    return result


def correlation(cfg: RunConfig) -> SuiteResult:
    """NTT correlation against per-h streamed sums, integer equality."""
    N, H = cfg.N or 2000, cfg.H or 200
    sc = cfg.sieve_config()
    fast = shifted_sums_all(N, H, sc)
    result = SuiteResult("correlation", ["N", "h", "ntt", "direct"])
    for h in range(1, H + 1):
        direct = dk_shifted_sum(3, N, h, sc)
        result.rows.append([N, h, int(fast[h - 1]), direct])
        if int(fast[h - 1]) != direct:
            result.passed = False
    return result


def ingham(cfg: RunConfig) -> SuiteResult:
    """Ingham ratios for h <= 8 at N = 10^5, and h = 1 at N = 10^7."""
    sc, prec = cfg.sieve_config(), cfg.precision()
    result = SuiteResult("ingham", ["N", "h", "ratio"])
    low, high = INGHAM_BAND
    ratios = {}
    for h in range(1, 9):
        ratios[(10**5, h)] = ingham_ratio(10**5, h, sc, prec)
    ratios[(10**7, 1)] = ingham_ratio(10**7, 1, sc, prec)
    for (N, h), r in ratios.items():
        result.rows.append([N, h, fmt(r)])
    in_band = all(low < r < high for (N, _), r in ratios.items() if N == 10**5)
    improving = abs(ratios[(10**7, 1)] - 1) < abs(ratios[(10**5, 1)] - 1)
    result.passed = in_band and improving
    return result


def determinism(cfg: RunConfig) -> SuiteResult:
    """moment_report at worker counts 1 and 4 must agree in every reported digit."""
    N, H = cfg.N or 10**5, cfg.H or 316
    prec = cfg.precision()
    result = SuiteResult("determinism", ["workers", "q_max", "sum_delta", "sum_delta_sq",
                                         "ratio1", "ratio2"])
    rows = []
    for workers in (1, 4):
        opts = SeriesOptions(q_max=cfg.q_max, rel_tol=cfg.rel_tol, workers=workers, precision=prec)
        sc = SieveConfig(workers=workers, cache_dir=cfg.cache_dir)
        report = moment_report(N, H, 1, opts, sc)
        rows.append([report.q_max, fmt(report.sum_delta), fmt(report.sum_delta_sq),
                     fmt(report.ratio1), fmt(report.ratio2)])
        result.rows.append([workers] + rows[-1])
    result.passed = rows[0] == rows[1]
    return result


# ============================================
# Recorded experiments
# ============================================

def h_multiplicativity(cfg: RunConfig) -> SuiteResult:
    """Whether H(s, q1 q2) = H(s, q1) H(s, q2) for coprime q1 < q2 <= 12."""
    prec = cfg.precision()
    result = SuiteResult("h-multiplicativity", ["q1", "q2", "max_deviation", "holds"])
    for q1 in range(2, 13):
        for q2 in range(q1 + 1, 13):
            if gcd(q1, q2) != 1:
                continue
            check = h_multiplicativity_check(q1, q2, prec=prec)
            result.rows.append([q1, q2, fmt(check.max_deviation, 5), int(check.holds)])
    return result


def p_sup(cfg: RunConfig) -> SuiteResult:
    """Observed sup |P(x,q)| per decade of q at x (default 10^6)."""
    x = cfg.x or 1e6
    frame = p_decade_sup(x, cfg.q_max or 10**4, cfg.series_options())
    result = SuiteResult("p-sup", ["x", "decade_start", "decade_end", "sup_abs_p", "argmax_q"])
    for row in frame.itertuples(index=False):
        result.rows.append([fmt(mpf(x)), int(row.decade_start), int(row.decade_end),
                            fmt(mpf(row.sup_abs_p)), int(row.argmax_q)])
    return result


SUITES: Dict[VerifySuite, Callable[[RunConfig], SuiteResult]] = {
    VerifySuite.DUAL_IDENTITY: dual_identity,
    VerifySuite.PRIME_POWERS: prime_powers,
    VerifySuite.CARMICHAEL: carmichael,
    VerifySuite.CONTOUR: contour,
    VerifySuite.VORONOI: voronoi,
    VerifySuite.CORRELATION: correlation,
    VerifySuite.INGHAM: ingham,
    VerifySuite.DETERMINISM: determinism,
    VerifySuite.H_MULTIPLICATIVITY: h_multiplicativity,
    VerifySuite.P_SUP: p_sup,
}


def run_suite(cfg: RunConfig) -> SuiteResult:
    logger.info(f"Running verify suite {cfg.suite.value}")
    result = SUITES[cfg.suite](cfg)
    logger.info(f"Suite {result.name}: {'passed' if result.passed else 'FAILED'} "
                f"({len(result.rows)} rows)")
    return result
