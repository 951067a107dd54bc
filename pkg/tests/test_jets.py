"""Tests for Laurent jets, Stieltjes constants, zeta jets, log-polynomials and the contour oracle."""

import random

import mpmath
import pytest
from mpmath import mpf

from src.jets import (
    ContourConvergenceError,
    JetCenter,
    JetError,
    LaurentJet,
    LogPolynomial,
    Precision,
    StieltjesReferenceMismatch,
    coefficientwise_deviation,
    contour_residue_oracle,
    exp_linear_jet,
    geometric_jet,
    jet_add,
    jet_mul,
    jet_product,
    jet_sum,
    power_jet,
    residue_of,
    stieltjes,
    stieltjes_table,
    zeta_cubed_jet,
    zeta_jet,
)
from src.jets.stieltjes import REFERENCE_TOLERANCE, REFERENCE_VALUES

PREC = Precision(30)
TIGHT = mpf("1e-25")


# ============================================
# Precision
# ============================================

def test_precision_bounds_and_context():
    assert PREC.working_dps == 40
    with pytest.raises(ValueError):
        Precision(29)
    before = mpmath.mp.dps
    with Precision(50).context():
        assert mpmath.mp.dps == 60
    assert mpmath.mp.dps == before


# ============================================
# Jet algebra
# ============================================

def test_from_terms_and_coefficient_access():
    jet = LaurentJet.from_terms({-2: 1, 0: 5, 1: 7}, order=2)
    assert jet.pole_order == 2 and jet.order == 2
    assert jet.coefficient(-2) == 1
    assert jet.coefficient(-1) == 0
    assert jet.coefficient(-5) == 0
    assert jet.coefficient(1) == 7
    with pytest.raises(JetError):
        jet.coefficient(3)


def test_invalid_jets():
    with pytest.raises(JetError):
        LaurentJet((1, 2, 3, 4, 5), pole_order=4)
    with pytest.raises(JetError):
        LaurentJet((1, 2), pole_order=2)
    with pytest.raises(JetError):
        LaurentJet.analytic([1, 2, 3]).truncated(5)


def test_normalized_drops_zero_leading_terms():
    jet = LaurentJet((0, 0, 3, 4), pole_order=2).normalized()
    assert jet.pole_order == 0
    assert jet.coeffs == (3, 4)
    assert LaurentJet((0, 1, 2), pole_order=1).is_analytic()


def test_mixed_centers_rejected():
    a = LaurentJet.analytic([1, 1], JetCenter.ONE)
    b = LaurentJet.analytic([1, 1], JetCenter.ZERO)
    with pytest.raises(JetError):
        a + b
    with pytest.raises(JetError):
        jet_mul(a, b)


def test_product_truncation_order():
    with PREC.context():
        zeta3 = zeta_cubed_jet(3, prec=PREC)
        analytic = LaurentJet.analytic([1, 2, 3, 4])
        product = jet_mul(zeta3, analytic)
    assert product.pole_order == 3
    assert product.order == 0


def test_pole_order_overflow():
    with PREC.context():
        with pytest.raises(JetError):
            jet_mul(zeta_jet(prec=PREC), zeta_cubed_jet(prec=PREC))


def test_product_needs_enough_terms():
    polar = LaurentJet.from_terms({-2: 1}, order=0)
    with pytest.raises(JetError):
        jet_mul(polar, LaurentJet.analytic([1]))


def test_arithmetic_operators():
    a = LaurentJet.analytic([1, 2, 3])
    assert (a + 1).coeffs == (2, 2, 3)
    assert (a - a).coeffs == (0, 0, 0)
    assert (2 * a).coeffs == (2, 4, 6)
    assert (a * a).coeffs == (1, 4, 10)


def test_jet_add_aligns_poles_and_truncates():
    polar = LaurentJet.from_terms({-2: 1, 0: 5, 1: 7}, order=3)
    short = LaurentJet.from_terms({-1: 2, 0: 1}, order=1)
    total = jet_add(polar, short)
    assert total.pole_order == 2 and total.order == 1
    assert [total.coefficient(j) for j in range(-2, 2)] == [1, 2, 6, 7]
    with pytest.raises(JetError):
        jet_add(polar, LaurentJet.analytic([1], center=JetCenter.ZERO))


def random_jet(rng, pole_order, order=6):
    terms = {j: mpf(rng.uniform(-2, 2)) for j in range(-pole_order, order + 1)}
    return LaurentJet.from_terms(terms, order)


def assert_same_coefficients(x, y, tol=mpf("1e-30")):
    assert x.pole_order == y.pole_order and x.order == y.order
    for j in range(-x.pole_order, x.order + 1):
        assert abs(x.coefficient(j) - y.coefficient(j)) < tol, j


@pytest.mark.parametrize("seed", range(5))
def test_product_is_associative_and_distributive(seed):
    rng = random.Random(seed)
    with PREC.context():
        a, b, c = (random_jet(rng, 1) for _ in range(3))
        assert_same_coefficients(jet_mul(jet_mul(a, b), c), jet_mul(a, jet_mul(b, c)))
        distributed = jet_add(jet_mul(a, b), jet_mul(a, c))
        assert_same_coefficients(jet_mul(a, jet_add(b, c)), distributed)
        assert_same_coefficients(jet_mul(a, b), jet_mul(b, a))


@pytest.mark.parametrize("seed", range(5))
def test_residue_of_product_is_bilinear(seed):
    rng = random.Random(100 + seed)
    with PREC.context():
        a1, a2 = random_jet(rng, 2), random_jet(rng, 1)
        b = random_jet(rng, 1)
        alpha, beta = mpf(rng.uniform(-3, 3)), mpf(rng.uniform(-3, 3))
        combined = residue_of(jet_mul(jet_add(a1 * alpha, a2 * beta), b))
        split = alpha * residue_of(jet_mul(a1, b)) + beta * residue_of(jet_mul(a2, b))
        assert abs(combined - split) < mpf("1e-30")
        left = residue_of(jet_mul(b, jet_add(a1 * alpha, a2 * beta)))
        assert abs(left - split) < mpf("1e-30")


def test_pole_cancels_after_normalization():
    inverse = LaurentJet.from_terms({-1: 1}, order=3)
    linear = LaurentJet.from_terms({1: 1}, order=3)
    product = jet_mul(inverse, linear)
    assert product.pole_order == 1
    assert product.coefficient(-1) == 0
    assert product.is_analytic()
    one = product.normalized()
    assert one.pole_order == 0 and one.order == product.order
    assert [one.coefficient(j) for j in range(one.order + 1)] == [1, 0, 0]


def test_coefficientwise_deviation_is_per_coefficient():
    with PREC.context():
        a = LaurentJet.analytic([mpf(1), mpf("1e-10")])
        b = LaurentJet.analytic([mpf(1), mpf("2e-10")])
        pairs = [(a.coefficient(j), b.coefficient(j)) for j in range(2)]
        assert abs(coefficientwise_deviation(pairs) - mpf("0.5")) < TIGHT
        # below the floor the difference counts against the largest coefficient
        noise = [(mpf(1), mpf(1)), (mpf("1e-40"), mpf("-1e-40"))]
        assert coefficientwise_deviation(noise) == mpf("2e-40")
        assert coefficientwise_deviation([(mpf(0), mpf(0))]) == 0


def test_jet_sum_and_product_of_empty_inputs():
    assert jet_sum([]).coeffs == (0, 0, 0, 0)
    assert jet_product([]).coeffs == (1, 0, 0, 0)


def test_exp_power_and_geometric_jets():
    with PREC.context():
        e = exp_linear_jet(2, order=4)
        assert [float(c) for c in e.coeffs] == pytest.approx([1, 2, 2, 4 / 3, 2 / 3])
        p = power_jet(2, -1, order=3)
        log2 = mpmath.log(2)
        for j in range(4):
            expected = (-log2) ** j / mpmath.factorial(j) / 2
            assert abs(p.coefficient(j) - expected) < TIGHT
        assert power_jet(1).coeffs == (1, 0, 0, 0)
    assert geometric_jet(order=4).coeffs == (1, -1, 1, -1, 1)
    with pytest.raises(ValueError):
        power_jet(0)


# ============================================
# Stieltjes constants and zeta jets
# ============================================

@pytest.mark.parametrize("n", range(7))
def test_stieltjes_matches_mpmath(n):
    value = stieltjes(n, PREC)
    with PREC.context():
        assert abs(value - mpmath.stieltjes(n)) < mpf("1e-28")


@pytest.mark.parametrize("n", range(4))
def test_stieltjes_agrees_with_embedded_references(n):
    assert REFERENCE_TOLERANCE <= mpf("1e-28")
    value = stieltjes(n, PREC)
    with PREC.context():
        assert abs(value - mpf(REFERENCE_VALUES[n])) < mpf("1e-28")


def test_stieltjes_reference_mismatch_is_reported(monkeypatch):
    monkeypatch.setitem(REFERENCE_VALUES, 0, "0.5772156649015328606065121")
    with pytest.raises(StieltjesReferenceMismatch):
        stieltjes(0, Precision(33))


def test_stieltjes_index_range_and_table():
    with pytest.raises(ValueError):
        stieltjes(9)
    table = stieltjes_table(3, PREC)
    assert len(table) == 3
    assert table[0] == stieltjes(0, PREC)


def test_zeta_jet_matches_zeta_near_one():
    with PREC.context():
        jet = zeta_jet(order=6, prec=PREC)
        w = mpf("0.01")
        assert abs(jet.evaluate(w) - mpmath.zeta(1 + w)) < mpf("1e-14")
        assert residue_of(jet) == 1


def test_zeta_cubed_leading_coefficients():
    with PREC.context():
        jet = zeta_cubed_jet(3, prec=PREC)
        g0, g1 = mpmath.euler, mpmath.stieltjes(1)
        assert jet.pole_order == 3 and jet.order == 3
        assert jet.coefficient(-3) == 1
        assert abs(jet.coefficient(-2) - 3 * g0) < TIGHT
        assert abs(jet.coefficient(-1) - (3 * g0 ** 2 - 3 * g1)) < TIGHT


def test_zeta_cubed_evaluates_like_cube():
    with PREC.context():
        jet = zeta_cubed_jet(6, prec=PREC)
        w = mpf("0.01")
        assert abs(jet.evaluate(w) - mpmath.zeta(1 + w) ** 3) < mpf("1e-10")


# ============================================
# Log-polynomials
# ============================================

def test_log_polynomial_from_zeta_cubed_matches_contour():
    with PREC.context():
        poly = LogPolynomial.from_residue(zeta_cubed_jet(prec=PREC), 1)
        L = mpmath.log(10)
        numeric = contour_residue_oracle(
            lambda s: mpmath.zeta(s) ** 3 * mpmath.exp((s - 1) * L), 1, mpf(1) / 8
        )
        assert poly.degree == 2
        assert abs(poly.evaluate(10) - numeric.real) < mpf("1e-18")
        assert abs(numeric.imag) < mpf("1e-18")


def test_log_polynomial_integrate_matches_quadrature():
    with PREC.context():
        poly = LogPolynomial(7, (mpf(1), mpf(2), mpf(3)))
        exact = poly.integrate(10, 100)
        numeric = mpmath.quad(poly.evaluate, [10, 100])
        assert abs(exact - numeric) < mpf("1e-20") * abs(numeric)
        with pytest.raises(ValueError):
            poly.integrate(0, 1)


def test_log_polynomial_rescale_square_and_add():
    with PREC.context():
        poly = LogPolynomial(5, (mpf(1), mpf(-2), mpf("0.5")))
        x = mpf(123)
        assert abs(poly.rescale(3).evaluate(x) - poly.evaluate(x)) < TIGHT
        assert abs(poly.square().evaluate(x) - poly.evaluate(x) ** 2) < mpf("1e-22")
        other = LogPolynomial(2, (mpf(3), mpf(1)))
        assert abs((poly + other).evaluate(x) - poly.evaluate(x) - other.evaluate(x)) < TIGHT
        assert poly.max_relative_deviation(poly.rescale(11)) < TIGHT


def test_log_polynomial_degree_limits():
    with pytest.raises(ValueError):
        LogPolynomial(1, tuple(mpf(1) for _ in range(6)))
    with pytest.raises(ValueError):
        LogPolynomial(1, (1, 1, 1, 1)).square()
    with pytest.raises(ValueError):
        LogPolynomial(0, (1,))


def test_max_abs_on_finds_interior_extremum():
    with PREC.context():
        poly = LogPolynomial(1, (mpf(1), mpf(0), mpf(-1)))
        assert abs(poly.max_abs_on(mpmath.exp(-0.5), mpmath.exp(0.5)) - 1) < TIGHT
        assert abs(poly.max_abs_on(1, mpmath.e ** 2) - 3) < mpf("1e-20")


# ============================================
# Contour oracle
# ============================================

def test_contour_oracle_residue_of_zeta():
    with PREC.context():
        value = contour_residue_oracle(mpmath.zeta, 1, mpf(1) / 4)
        assert abs(value - 1) < mpf("1e-20")


@pytest.mark.parametrize("seed", range(4))
def test_contour_oracle_matches_jet_residues(seed):
    rng = random.Random(200 + seed)
    with PREC.context():
        polar = random_jet(rng, 3, order=3)
        L = mpf(rng.uniform(0.5, 3))
        symbolic = residue_of(jet_mul(polar, exp_linear_jet(L, order=6)))

        def f(s):
            w = s - 1
            return polar.evaluate(w) * mpmath.exp(L * w)

        numeric = contour_residue_oracle(f, 1, mpf(1) / 2)
        assert abs(numeric.real - symbolic) < mpf("1e-18") * max(1, abs(symbolic))
        assert abs(numeric.imag) < mpf("1e-18")


def test_contour_oracle_gives_up():
    with PREC.context():
        with pytest.raises(ContourConvergenceError):
            contour_residue_oracle(lambda s: mpmath.exp(20 * s) / s, 0, 1,
                                   tol=mpf("1e-40"), max_samples=128)


def test_contour_oracle_arguments():
    with pytest.raises(ValueError):
        contour_residue_oracle(mpmath.zeta, 1, 0.25, M=32)
    with pytest.raises(ValueError):
        contour_residue_oracle(mpmath.zeta, 1, 0)
