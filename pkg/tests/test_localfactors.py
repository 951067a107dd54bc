"""Tests for the local Euler factors, F_{k,q*} jets and their series oracles."""

import mpmath
import pytest
from mpmath import mpf

from src.jets import JetCenter, LaurentJet, Precision
from src.localfactors import (
    G_kd_jet,
    H_jet,
    G_value,
    LocalFactorKey,
    dirichlet_truncation_oracle,
    f_principal_factor_jet,
    f_principal_jet,
    f_principal_value,
    g_jet,
    g_value,
    h_multiplicativity_check,
    h_value,
    local_euler_factor,
    local_polynomial,
    max_relative_deviation,
)

PREC = Precision(30)
W = mpf("0.01")


def close(a, b, rel):
    return abs(a - b) <= rel * max(abs(b), 1)


# ============================================
# Local polynomials and factors
# ============================================

@pytest.mark.parametrize("a,expected", [(0, (1,)), (1, (3, -3, 1)), (2, (6, -8, 3)), (3, (10, -15, 6))])
def test_local_polynomial(a, expected):
    assert local_polynomial(a) == expected


def test_local_factor_key_validation():
    with pytest.raises(ValueError):
        LocalFactorKey(4, 1)
    with pytest.raises(ValueError):
        LocalFactorKey(3, 65)


@pytest.mark.parametrize("p,a", [(2, 0), (2, 3), (5, 1), (97, 2)])
def test_local_factor_at_one_is_polynomial_value(p, a):
    with PREC.context():
        jet = local_euler_factor(LocalFactorKey(p, a))
        c = local_polynomial(a)
        expected = mpmath.fsum(ci * mpf(p) ** (-i) for i, ci in enumerate(c))
        assert abs(jet.coefficient(0) - expected) < mpf("1e-30")


# ============================================
# Jets against series definitions
# ============================================

@pytest.mark.parametrize("q", [1, 2, 12, 30, 49, 360])
def test_g_jet_matches_series(q):
    with PREC.context():
        jet = g_jet(q, order=6)
        assert close(jet.evaluate(W), g_value(q, 1 + W), mpf("1e-10"))


@pytest.mark.parametrize("k,d", [(1, 6), (4, 3), (9, 10), (5, 1)])
def test_G_jet_matches_series(k, d):
    with PREC.context():
        jet = G_kd_jet(k, d, order=6)
        assert close(jet.evaluate(W), G_value(k, d, 1 + W), mpf("1e-10"))


@pytest.mark.parametrize("q", [2, 6, 12, 45, 210])
def test_H_jet_matches_series(q):
    jet = H_jet(q, order=6, prec=PREC)
    with PREC.context():
        assert close(jet.evaluate(W), h_value(q, 1 + W), mpf("1e-10"))


def test_H_jet_of_one_is_constant():
    jet = H_jet(1, prec=PREC)
    assert jet.is_analytic()
    assert jet.coefficient(0) == 1
    assert all(jet.coefficient(j) == 0 for j in range(1, jet.order + 1))


def test_H_jet_memo_is_per_center():
    one = H_jet(6, JetCenter.ONE, prec=PREC)
    zero = H_jet(6, JetCenter.ZERO, prec=PREC)
    assert one.center == JetCenter.ONE and zero.center == JetCenter.ZERO
    assert one.coeffs == zero.coeffs
    assert H_jet(6, prec=PREC) is one


@pytest.mark.parametrize("k,qstar", [(1, 1), (2, 3), (12, 5), (1, 30)])
def test_f_principal_jet_matches_series(k, qstar):
    jet = f_principal_jet(k, qstar, prec=PREC)
    assert jet.pole_order == 3 and jet.order == 3
    with PREC.context():
        assert close(jet.evaluate(W), f_principal_value(k, qstar, 1 + W), mpf("1e-10"))


@pytest.mark.parametrize("p", [2, 3, 5, 47])
def test_prime_power_factor_equals_G(p):
    with PREC.context():
        for alpha in range(1, 6):
            for beta in range(alpha + 1):
                k, d = p ** (alpha - beta), p ** beta
                deviation = max_relative_deviation(f_principal_factor_jet(k, d), G_kd_jet(k, d))
                assert deviation <= mpf("1e-18"), (alpha, beta)


# ============================================
# Multiplicativity check and Dirichlet oracle
# ============================================

@pytest.mark.parametrize("q1,q2", [(3, 4), (5, 12), (7, 30)])
def test_h_multiplicativity_check_on_coprime_pairs(q1, q2):
    check = h_multiplicativity_check(q1, q2, prec=PREC)
    assert check.holds
    assert check.max_deviation <= mpf("1e-18")


def test_h_multiplicativity_check_requires_coprime():
    with pytest.raises(ValueError):
        h_multiplicativity_check(2, 4)


@pytest.mark.parametrize("k,qstar", [(1, 1), (2, 3)])
def test_dirichlet_truncation_within_tail_bound(k, qstar):
    estimate = dirichlet_truncation_oracle(k, qstar, 2.0, M=10**5)
    with PREC.context():
        exact = f_principal_value(k, qstar, 2)
        assert estimate.value < exact
        assert float(exact) - estimate.value <= estimate.tail_bound


def test_dirichlet_truncation_arguments():
    with pytest.raises(ValueError):
        dirichlet_truncation_oracle(1, 1, 1.2)
    with pytest.raises(ValueError):
        dirichlet_truncation_oracle(1, 1, 2.0, M=100)


def test_dirichlet_truncation_at_three_gives_zeta_cubed():
    estimate = dirichlet_truncation_oracle(1, 1, 3.0)
    with PREC.context():
        exact = mpmath.zeta(3) ** 3
        assert abs(estimate.value - exact) <= mpf("1e-6") * exact
        assert float(exact) - estimate.value <= estimate.tail_bound


def test_dirichlet_truncation_coprime_to_six():
    estimate = dirichlet_truncation_oracle(1, 6, 2.0, M=10**5)
    with PREC.context():
        closed = (mpmath.zeta(2) * (1 - mpf(1) / 4) * (1 - mpf(1) / 9)) ** 3
        assert close(f_principal_value(1, 6, 2), closed, mpf("1e-20"))
        assert 0 < float(closed) - estimate.value <= estimate.tail_bound


def test_max_relative_deviation_compares_each_coefficient():
    with PREC.context():
        a = LaurentJet.from_terms({-1: 1, 0: mpf("1e-10")})
        b = LaurentJet.from_terms({-1: 1, 0: mpf("2e-10")})
        assert abs(max_relative_deviation(a, b) - mpf("0.5")) < mpf("1e-25")
        assert max_relative_deviation(a, a) == 0
