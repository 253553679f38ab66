import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, strategies as st

from kelattice.errors import ConvergenceError, IntegrabilityError
from kelattice.quadrature import (KIntegralSpec, check_integrability, integrate_01, integrate_k,
                                  k_integral, k_integral_detail, mellin_transform, mirror_spec)
from kelattice.specfun import theta_t

ZETA3 = float(mp.zeta(3))
G8 = math.gamma(0.25) ** 8


def test_simple_endpoint_singularities():
    assert integrate_01(lambda x: x ** -0.5).value == pytest.approx(2.0, abs=1e-12)
    assert integrate_01(lambda x: np.log(x)).value == pytest.approx(-1.0, abs=1e-12)


def test_log_form_integral():
    # 1/(sqrt(k) k'^(3/2) K)
    spec = KIntegralSpec(alpha=Fraction(-1, 2), beta=Fraction(-3, 2), gamma_K=-1)
    assert k_integral(spec) == pytest.approx(2 * math.log(1 + math.sqrt(2)), rel=1e-10)


@given(st.floats(-0.9, 3.0), st.floats(-0.9, 3.0))
def test_beta_integrals_error_estimate_is_conservative(a, b):
    res = integrate_01(lambda x, xc: x ** a * xc ** b)
    true = float(mp.beta(a + 1, b + 1))
    assert abs(res.value - true) <= res.error + 4 * np.finfo(float).eps * abs(true)
    assert res.value == pytest.approx(true, rel=1e-11)


@given(st.floats(-0.8, 2.0), st.integers(1, 4))
def test_log_power_integrals(a, n):
    # int x^a log(x)^n = (-1)^n n! / (a+1)^(n+1)
    res = integrate_01(lambda x: x ** a * np.log(x) ** n)
    true = (-1) ** n * math.factorial(n) / (a + 1) ** (n + 1)
    assert abs(res.value - true) <= res.error + 4 * np.finfo(float).eps * abs(true)


def test_k_integral_examples():
    assert k_integral(KIntegralSpec(1, 0, 2, 0)) == pytest.approx(7 * ZETA3 / 4, rel=1e-9)
    assert k_integral(KIntegralSpec(1, 0, 1, 1)) == pytest.approx(math.pi ** 3 / 16, rel=1e-9)
    assert k_integral(KIntegralSpec(0, 0, 0, 3)) == pytest.approx(G8 / (128 * math.pi ** 2), rel=1e-8)


def test_k_integral_against_mpmath_oracle():
    # int k^(1/3) k'^(-1/2) K^(1/2) K'^2 dk at 30 digits
    mp.mp.dps = 30
    third = mp.mpf(1) / 3

    def Kc(x):
        # K at the modulus complementary to x, by the AGM of (1, x)
        return mp.pi / (2 * mp.agm(1, x))

    def lower(k):
        return k ** third * (1 - k * k) ** (-mp.mpf(1) / 4) * mp.sqrt(mp.ellipk(k * k)) * Kc(k) ** 2

    def upper(u):
        # k = sqrt(1 - u^2) keeps full precision near k = 1
        k = mp.sqrt(1 - u * u)
        return k ** third * u ** -0.5 * mp.sqrt(Kc(u)) * mp.ellipk(u * u) ** 2 * u / k

    ref = mp.quad(lower, [0, mp.mpf("0.5")]) + mp.quad(upper, [0, mp.sqrt(mp.mpf(3)) / 2])
    spec = KIntegralSpec(Fraction(1, 3), Fraction(-1, 2), 0.5, 2)
    assert k_integral(spec) == pytest.approx(float(ref), rel=1e-10)


def test_poly_and_prefactor():
    spec = KIntegralSpec(1, 0, 2, 0, poly=(Fraction(2), Fraction(0), Fraction(-4)), prefactor=0.5)
    direct = 0.5 * (2 * k_integral(KIntegralSpec(1, 0, 2, 0)) - 4 * k_integral(KIntegralSpec(3, 0, 2, 0)))
    assert k_integral(spec) == pytest.approx(direct, rel=1e-12)


def test_named_factor_E():
    ref = integrate_k(lambda n: n.E * n.Kp).value
    assert k_integral(KIntegralSpec(0, 0, 0, 1, factors=(("E", 1),))) == pytest.approx(ref, rel=1e-12)


@given(st.fractions(Fraction(-1, 2), Fraction(2), max_denominator=6),
       st.fractions(Fraction(-1, 2), Fraction(2), max_denominator=6),
       st.floats(-1.0, 2.0), st.floats(-1.0, 2.0))
def test_mirror_symmetry(a, b, g, d):
    spec = KIntegralSpec(a, b, g, d)
    assert k_integral(spec) == pytest.approx(k_integral(mirror_spec(spec)), rel=1e-10)


def test_integrability_checks():
    with pytest.raises(IntegrabilityError):
        check_integrability(KIntegralSpec(-1, 0, 0, 0))
    with pytest.raises(IntegrabilityError):
        k_integral(KIntegralSpec(0, -2, 1, 0))
    # borderline cases that do converge
    check_integrability(KIntegralSpec(-1, 0, 0, -2))
    check_integrability(KIntegralSpec(0, -2, -2, 0))


def test_convergence_error_carries_levels():
    with pytest.raises(ConvergenceError) as info:
        integrate_01(lambda x: np.sin(1.0 / x) / x, tol=1e-14)
    assert info.value.args


def test_detail_reports_nodes():
    res = k_integral_detail(KIntegralSpec(1, 0, 2, 0))
    assert res.nodes > 0 and res.level >= 3 and res.error < 1e-10


def test_mellin_examples():
    assert mellin_transform(lambda t: np.exp(-3 * t), 2.0) == pytest.approx(1 / 9, abs=1e-12)
    for s in (0.5, 1.0, 2.5, 4.0):
        assert mellin_transform(lambda t: np.exp(-t), s) == pytest.approx(1.0, rel=1e-12)


def test_mellin_theta_product_matches_k_integral():
    # the half-shifted alternating sum at s = 1: M_1[theta2 theta4] = pi * (k-integral)
    m = mellin_transform(lambda t: theta_t(2, t) * theta_t(4, t), 1.0)
    k = k_integral(KIntegralSpec(Fraction(-1, 2), Fraction(-3, 2), -1, 0))
    assert m == pytest.approx(math.pi * k, rel=1e-10)
    assert k == pytest.approx(2 * math.log(1 + math.sqrt(2)), rel=1e-10)
