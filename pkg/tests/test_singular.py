"""Tests for P(x,q), its dual, the singular series and the integrated main terms."""

import mpmath
import pytest
from mpmath import mpf

from src.arith import ramanujan_prefix_sum, ramanujan_sum
from src.jets import Precision
from src.localfactors import p_contour_value
from src.singular import series
from src.singular import (
    MainTermEngine,
    PolynomialTable,
    SeriesOptions,
    SeriesSaturationError,
    SingularValue,
    deterministic_fsum,
    first_moment_main,
    first_moment_split,
    main_term_integral,
    p_decade_sup,
    p_polynomial,
    p_star_polynomial,
    singular_series,
)

PREC = Precision(30)


def fixed(q_max):
    return SeriesOptions(q_max=q_max, workers=1, precision=PREC)


def rel_close(a, b, rel):
    return abs(a - b) <= rel * abs(b)


# ============================================
# P(x,q) and P*(x,q)
# ============================================

def test_p_of_one_is_zeta_cubed_residue():
    poly = p_polynomial(1, PREC)
    with PREC.context():
        g0, g1 = mpmath.euler, mpmath.stieltjes(1)
        expected = [3 * g0 ** 2 - 3 * g1, 3 * g0, mpf(1) / 2]
        assert poly.q == 1
        for got, want in zip(poly.coeffs, expected):
            assert abs(got - want) < mpf("1e-25")


@pytest.mark.parametrize("q", list(range(1, 61)) + [64, 210, 360, 997, 1024])
def test_dual_identity(q):
    deviation = p_polynomial(q, PREC).max_relative_deviation(p_star_polynomial(q, PREC))
    assert deviation <= mpf("1e-18")


@pytest.mark.parametrize("x,q", [(1000, 1), (12345.5, 6), (10**6, 30), (5 * 10**4, 49)])
def test_p_polynomial_matches_contour_integral(x, q):
    poly = p_polynomial(q, PREC)
    numeric = p_contour_value(x, q, prec=PREC)
    with PREC.context():
        value = poly.evaluate(x)
        scale = max(abs(value), max(abs(c) for c in poly.coeffs))
        assert abs(value - numeric) <= mpf("1e-10") * scale


def test_p_polynomial_is_memoised_and_validated():
    assert p_polynomial(12, PREC) is p_polynomial(12, PREC)
    with pytest.raises(ValueError):
        p_polynomial(0)
    with pytest.raises(ValueError):
        p_star_polynomial(0)


# ============================================
# Summation helpers and options
# ============================================

def test_deterministic_fsum_ignores_producer():
    with PREC.context():
        values = [mpf(1) / k for k in range(1, 3001)]
        assert deterministic_fsum(values) == deterministic_fsum(iter(values))
        assert abs(deterministic_fsum(values) - mpmath.fsum(values)) < mpf("1e-35")
        assert deterministic_fsum([]) == 0


def test_series_options_validation():
    with pytest.raises(ValueError):
        SeriesOptions(q_max=0)
    with pytest.raises(ValueError):
        SeriesOptions(rel_tol=1.0)


def test_saturation_error_carries_partial():
    partial = SingularValue(mpf(1), 2**20, mpf("0.5"), 10)
    err = SeriesSaturationError("saturated", partial)
    assert err.partial.q_max == 2**20
    assert isinstance(err, RuntimeError)


# ============================================
# Singular series
# ============================================

@pytest.mark.parametrize("h", [1, 2, 6])
def test_singular_series_fixed_truncation_matches_direct_sum(h):
    x, Q = 10**5, 50
    result = singular_series(x, h, fixed(Q))
    with PREC.context():
        direct = mpmath.fsum(ramanujan_sum(q, h) / mpf(q) ** 2 * p_polynomial(q, PREC).evaluate(x) ** 2
                             for q in range(1, Q + 1))
        assert rel_close(result.value, direct, mpf("1e-25"))
    assert result.q_max == Q
    assert result.terms_used == sum(1 for q in range(1, Q + 1) if ramanujan_sum(q, h))
    assert result.tail_estimate >= 0


def test_singular_series_arguments():
    with pytest.raises(ValueError):
        singular_series(1, 1, fixed(10))
    with pytest.raises(ValueError):
        singular_series(100, 0, fixed(10))


@pytest.mark.parametrize("x", [10**3, 10**5, 10**7, 10**9])
def test_singular_series_positive_at_shift_one(x):
    assert singular_series(x, 1, fixed(200)).value > 0


def test_auto_mode_meets_relative_tolerance(monkeypatch):
    monkeypatch.setattr(series, "AUTO_Q_START", 16)
    opts = SeriesOptions(rel_tol=0.2, workers=1, precision=PREC)
    result = singular_series(10**5, 1, opts)
    assert result.q_max >= 16
    assert (result.q_max // 16) & (result.q_max // 16 - 1) == 0
    assert result.tail_estimate < mpf("0.2") * abs(result.value)


def test_auto_mode_saturation_visits_each_q_once(monkeypatch):
    monkeypatch.setattr(series, "AUTO_Q_START", 50)
    monkeypatch.setattr(series, "AUTO_Q_LIMIT", 400)
    calls = []

    def counting_ramanujan_sum(q, h):
        calls.append(q)
        return ramanujan_sum(q, h)

    monkeypatch.setattr(series, "ramanujan_sum", counting_ramanujan_sum)
    opts = SeriesOptions(rel_tol=1e-12, workers=1, precision=PREC)
    with pytest.raises(SeriesSaturationError) as excinfo:
        singular_series(10**4, 1, opts)
    partial = excinfo.value.partial
    assert partial.q_max == 400
    # doublings 50 -> 100 -> 200 -> 400 extend the same running sum
    assert calls == list(range(1, 401))

    fresh = singular_series(10**4, 1, fixed(400))
    assert fresh.value == partial.value
    assert fresh.tail_estimate == partial.tail_estimate
    assert fresh.terms_used == partial.terms_used


@pytest.mark.slow
def test_doubling_q_max_changes_less_than_tail():
    coarse = singular_series(10**6, 1, fixed(2**14))
    fine = singular_series(10**6, 1, fixed(2**15))
    with PREC.context():
        assert abs(fine.value - coarse.value) < coarse.tail_estimate


def test_polynomial_ranges_match_memoised_polynomials():
    polys = series._compute_range(1, 4, PREC.decimal_digits)
    assert [p.q for p in polys] == [1, 2, 3]
    for q, poly in zip(range(1, 4), polys):
        assert poly.coeffs == p_polynomial(q, PREC).coeffs


# ============================================
# Integrated main terms
# ============================================

@pytest.mark.parametrize("h", [1, 4, 6, 12])
def test_main_value_matches_direct_sum(h):
    N, Q = 10**4, 60
    engine = MainTermEngine(N, fixed(Q))
    with PREC.context():
        direct = mpmath.fsum(
            ramanujan_sum(q, h) / mpf(q) ** 2 * p_polynomial(q, PREC).square().integrate(N, 2 * N)
            for q in range(1, Q + 1)
        )
        assert rel_close(engine.main_value(h, Q), direct, mpf("1e-22"))


def test_main_term_integral_with_fixed_truncation():
    N, Q, h = 10**4, 60, 2
    value = main_term_integral(N, h, fixed(Q))
    engine = MainTermEngine(N, fixed(Q))
    with PREC.context():
        assert rel_close(value, engine.main_value(h, Q), mpf("1e-28"))
    with pytest.raises(ValueError):
        main_term_integral(N, 0, fixed(Q))


def test_main_term_integral_matches_quadrature():
    N, h, opts = 10**5, 3, fixed(100)
    closed = main_term_integral(N, h, opts)
    with PREC.context():
        numeric = mpmath.quad(lambda x: singular_series(x, h, opts).value, [N, 2 * N])
        assert rel_close(closed, numeric, mpf("1e-10"))


def test_main_term_integral_positive_at_shift_one():
    assert main_term_integral(10**5, 1, fixed(100)) > 0


def test_prefix_sum_matches_sum_over_shifts():
    N, Q, H = 10**4, 60, 10
    engine = MainTermEngine(N, fixed(Q))
    with PREC.context():
        by_shift = mpmath.fsum(engine.main_value(h, Q) for h in range(1, H + 1))
        assert rel_close(engine.prefix_sum(H, Q), by_shift, mpf("1e-22"))
        assert rel_close(first_moment_split(N, H, fixed(Q)), by_shift, mpf("1e-22"))


def test_prefix_sum_uses_carmichael_cancellation():
    # every q > 1 with q | H contributes nothing to the first moment
    N, Q = 10**4, 12
    engine = MainTermEngine(N, fixed(Q))
    H = 27720  # lcm(1..12)
    with PREC.context():
        expected = H * engine.integral(1)
        for q in range(2, Q + 1):
            assert ramanujan_prefix_sum(q, H) == 0
        assert rel_close(engine.prefix_sum(H, Q), expected, mpf("1e-28"))


def test_first_moment_main():
    N, H = 10**4, 100
    value = first_moment_main(N, H, PREC)
    with PREC.context():
        expected = H * p_polynomial(1, PREC).square().integrate(N, 2 * N)
        assert rel_close(value, expected, mpf("1e-30"))
        assert value > 0
    assert first_moment_main(N, 0, PREC) == 0
    with pytest.raises(ValueError):
        first_moment_main(N, -1, PREC)


def test_choose_q_max_respects_fixed_truncation():
    engine = MainTermEngine(10**4, fixed(40))
    assert engine.choose_q_max(range(1, 50)) == 40


def test_main_term_engine_requires_positive_n():
    with pytest.raises(ValueError):
        MainTermEngine(0, fixed(10))


@pytest.mark.slow
def test_main_term_auto_mode_meets_tolerance():
    opts = SeriesOptions(rel_tol=1e-3, workers=1, precision=PREC)
    result = MainTermEngine(10**5, opts).main_term(1)
    assert result.q_max >= 1000
    assert result.tail_estimate < mpf("1e-3") * abs(result.value)


# ============================================
# Tables and observed sizes
# ============================================

def test_p_decade_sup_frame():
    frame = p_decade_sup(10**5, 120, fixed(120))
    assert list(frame.columns) == ["decade_start", "decade_end", "sup_abs_p", "argmax_q"]
    assert list(frame["decade_start"]) == [1, 10, 100]
    assert list(frame["decade_end"]) == [9, 99, 120]
    for row in frame.itertuples(index=False):
        assert row.decade_start <= row.argmax_q <= row.decade_end
        assert row.sup_abs_p >= 0


@pytest.mark.slow
def test_polynomial_table_is_worker_independent():
    serial = PolynomialTable(PREC, workers=1)
    parallel = PolynomialTable(PREC, workers=2)
    serial.ensure(600)
    parallel.ensure(600)
    for q in (1, 255, 256, 257, 599, 600):
        assert serial[q].coeffs == parallel[q].coeffs
