import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kelattice.errors import SymbolicError
from kelattice.specfun import nome
from kelattice.symbolic import (ONE_MINUS_K2, KEExpr, Poly, QSeries, base_identity, compute_f4p, compute_gp,
                                compute_pn, compute_Qn, derive_E_identity, divisor_sigma, eisenstein_as_E4E6,
                                eisenstein_k_form, eisenstein_qseries, f4p_poly, keexpr_to_qseries, q_ddq,
                                sqrt2_lattice_check, theta3_expr, theta_power_sum, theta_qseries)

F = Fraction


def P(*coeffs):
    return Poly.from_ascending(coeffs)


# ---------------------------------------------------------------- q-series

def test_theta_qseries():
    assert theta_qseries(3, 10).coeffs == (1, 2, 0, 0, 2, 0, 0, 0, 0, 2)
    assert theta_qseries(4, 10).coeffs == (1, -2, 0, 0, 2, 0, 0, 0, 0, -2)
    t2 = theta_qseries(2, 7)
    assert t2.offset == F(1, 4) and t2.items() == [(F(1, 4), 2), (F(9, 4), 2), (F(25, 4), 2)]


def test_triple_product_exact():
    order = 25
    lhs = theta_qseries(2, order) * theta_qseries(3, order) * theta_qseries(4, order)
    # sum over all integers n of 2n(-1)^n q^((n+1/2)^2)
    cs = {}
    for n in range(-10, 10):
        e = F(2 * n + 1, 2) ** 2
        if e < order:
            cs[e] = cs.get(e, 0) + 2 * n * (-1) ** n
    rhs = QSeries(F(1, 4), 1, tuple(cs.get(F(1, 4) + j, 0) for j in range(order)), order)
    assert lhs.equals(rhs, order)


def test_jacobi_quartic_exact():
    o = 40
    t2, t3, t4 = (theta_qseries(i, o) for i in (2, 3, 4))
    assert (t3 ** 4).equals(t2 ** 4 + t4 ** 4, o)


def test_eisenstein_qseries():
    assert eisenstein_qseries(4, 5).coeffs[:3] == (1, 240, 2160)
    assert eisenstein_qseries(6, 5).coeffs[:3] == (1, -504, -16632)
    for w in (4, 6, 8, 10, 12, 14):
        e = eisenstein_qseries(w, 12)
        assert e.coeffs[0] == 1
        ratio = e.coeffs[1]
        assert all(e.coeffs[m] == ratio * divisor_sigma(w - 1, m) for m in range(1, 12))
    with pytest.raises(SymbolicError):
        eisenstein_qseries(3, 5)


def test_weighted_polys():
    assert eisenstein_as_E4E6(4).as_dict() == {(1, 0): 1}
    assert eisenstein_as_E4E6(8).as_dict() == {(2, 0): 1}
    assert eisenstein_as_E4E6(12).as_dict() == {(3, 0): F(441, 691), (0, 2): F(250, 691)}


@pytest.mark.parametrize("w", [4, 6, 8, 10, 12, 14, 16])
def test_weighted_poly_reexpansion(w):
    o = 40
    e4, e6 = eisenstein_qseries(4, o), eisenstein_qseries(6, o)
    assert eisenstein_as_E4E6(w).substitute(e4, e6).equals(eisenstein_qseries(w, o), o)


@pytest.mark.parametrize("w", [4, 6, 8, 12])
@pytest.mark.parametrize("variant", ["q2", "q", "-q"])
def test_k_forms_against_q_expansions(w, variant):
    o = 16
    base = eisenstein_qseries(w, o)
    if variant == "q2":
        target = QSeries(0, 1, tuple(base.coeffs[j // 2] if j % 2 == 0 else 0 for j in range(o)), o)
    elif variant == "-q":
        target = QSeries(0, 1, tuple(c * (-1) ** j for j, c in enumerate(base.coeffs)), o)
    else:
        target = base
    assert keexpr_to_qseries(eisenstein_k_form(w, variant), o).equals(target, o)


def test_weight4_k_forms():
    expect = {"q2": P(1, 0, -1, 0, 1), "q": P(1, 0, 14, 0, 1), "-q": P(1, 0, -16, 0, 16)}
    for variant, poly in expect.items():
        assert eisenstein_k_form(4, variant) == KEExpr.monomial(16, c=4, f=-4, poly=poly)


# ---------------------------------------------------------------- even K powers

def test_Q2():
    assert compute_Qn(2) == P(0, 0, 240, 0, -240)


DISPLAYS = {
    3: (F(1, 2), P(1, 0, -2)),
    4: (F(1, 4), P(2, 0, -17, 0, 17)),
    5: (F(1, 32), P(1, 0, -2) * P(1, 0, -31, 0, 31)),
    6: (F(1, 64), P(2, 0, -259, 0, 1641, 0, -2764, 0, 1382)),
}


@pytest.mark.parametrize("n", sorted(DISPLAYS))
def test_pn_matches_displayed_polynomials(n):
    c, display = DISPLAYS[n]
    assert compute_pn(n) * c == display


@pytest.mark.parametrize("n", range(2, 9))
def test_pn_degree_bound(n):
    p = compute_pn(n)
    assert p.is_even() and p.degree() <= 2 * n - 4


@pytest.mark.parametrize("n", range(2, 9))
def test_pn_symmetric_under_complementary_modulus(n):
    # stated property p_n(k) = p_n(k'); the exact computation gives (-1)^n instead
    p = compute_pn(n)
    assert p.subs_k2(ONE_MINUS_K2) == p


@pytest.mark.parametrize("n", range(2, 9))
def test_pn_parity_under_complementary_modulus(n):
    p = compute_pn(n)
    assert p.subs_k2(ONE_MINUS_K2) == p * (-1) ** n


# ---------------------------------------------------------------- q d/dq

def test_theta_power_sums():
    o = 30
    assert theta_power_sum(0) == theta3_expr()
    for b, first in ((1, (2, 8, 18)), (2, (2, 32, 162))):
        series = keexpr_to_qseries(theta_power_sum(b), o)
        assert [series.coefficient(j * j) for j in (1, 2, 3)] == list(first)
        oracle = QSeries(0, 1, tuple(2 * math.isqrt(j) ** (2 * b) if math.isqrt(j) ** 2 == j and j else 0
                                     for j in range(o)), o)
        assert series.equals(oracle, o)


def test_q_ddq_on_theta2_square():
    o = 20
    t2sq = KEExpr.monomial(2, a=1, c=1, f=-1)
    series = theta_qseries(2, o) ** 2
    assert keexpr_to_qseries(q_ddq(t2sq), o).equals(series.D(), o)


def _random_expr(a, b, c, e):
    # rational q-expansion: net pi exponent zero
    return KEExpr.monomial(3, a=2 * a, b=2 * b, c=c, e=e, f=-(c + e))


_shapes = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 4), st.integers(0, 1))


@given(_shapes)
def test_q_ddq_against_qseries(shape):
    o = 14
    expr = _random_expr(*shape)
    assert keexpr_to_qseries(q_ddq(expr), o).equals(keexpr_to_qseries(expr, o).D(), o)


@given(_shapes, st.floats(0.2, 0.9))
def test_q_ddq_against_finite_differences(shape, k):
    expr = _random_expr(*shape)
    h = 1e-5
    fd = (float(expr.evaluate(k + h)) - float(expr.evaluate(k - h))) / (2 * h)
    nm = nome(k)
    expected = nm.q * fd / nm.dq_dk
    assert float(q_ddq(expr).evaluate(k)) == pytest.approx(expected, rel=1e-7, abs=1e-9)


@given(_shapes, st.floats(0.05, 0.5))
def test_keexpr_round_trip(shape, k):
    expr = q_ddq(_random_expr(*shape))
    series = keexpr_to_qseries(expr, 30)
    assert float(series.evaluate(nome(k).q)) == pytest.approx(float(expr.evaluate(k)), rel=1e-10, abs=1e-12)


# ---------------------------------------------------------------- odd K powers

GP_DISPLAYS = {
    1: (P(1), F(1, 640), 8, -2),
    2: (P(4, 0, 1, 0, -1), F(3, 2 ** 12 * 5), 16, -4),
    3: (P(16, 0, -92, 0, 93, 0, -2, 0, 1), F(189, 2 ** 15 * 65), 24, -6),
    4: (P(64, 0, 848, 0, -2136, 0, 2577, 0, -1291, 0, 3, 0, -1), F(43659, 2 ** 21 * 85), 32, -8),
}


@pytest.mark.parametrize("p", range(1, 5))
def test_gp_matches_displays(p):
    poly, rational, gpow, pipow = GP_DISPLAYS[p]
    g = compute_gp(p)
    assert g.P == poly
    assert (g.constant.rational, g.constant.gamma_power, g.constant.pi_power) == (rational, gpow, pipow)


def test_f8_display():
    assert f4p_poly(2) == P(0, 0, 32) * ONE_MINUS_K2 * P(4, 0, 1, 0, -1)


@pytest.mark.parametrize("p", range(1, 5))
def test_f4p_is_E_free_and_gp_odd(p):
    assert compute_f4p(p).is_E_free()
    assert compute_gp(p).g.is_odd()


def test_sqrt2_form_exact():
    assert sqrt2_lattice_check()


# ---------------------------------------------------------------- E identities

def test_derive_from_e4case():
    o = 20
    ident = derive_E_identity("e4case", 1, o)
    assert ident.check()
    two_E_minus_K = KEExpr.monomial(-8, a=2, b=2, c=5, e=1, f=-6) + KEExpr.monomial(4, a=2, b=2, c=6, f=-6)
    assert ident.expr == two_E_minus_K
    cs = [F(0)] * o
    for j in range(1, o):
        r = 0
        while j + 2 * j * r < o:
            cs[j + 2 * j * r] += j ** 4 * (-1) ** j * (2 * r + 1)
            r += 1
    assert ident.series.equals(QSeries(0, 1, tuple(cs), o), o)
    assert abs(ident.numeric_residual(0.3)) < 1e-12


def test_derive_from_theta2_fourth_and_constant():
    for times in (1, 2):
        assert derive_E_identity("theta2^4", times, 16).check()
        assert derive_E_identity("theta2^2", times, 16).check()
    c = derive_E_identity("constant", 1)
    assert c.series.is_zero() and c.expr.is_zero()
    with pytest.raises(SymbolicError):
        base_identity("nope")


# ---------------------------------------------------------------- polynomials

def test_poly_algebra():
    p = P(1, 2, 3)
    assert p * P(0, 1) == p.shift(1)
    q, r = (p * P(1, 1) + P(5)).divmod_poly(P(1, 1))
    assert q == p and r == P(5)
    with pytest.raises(SymbolicError):
        P(1, 0, 1).exact_div(P(1, 1))
    c, prim = P(F(2, 3), F(4, 3)).primitive()
    assert c == F(2, 3) and prim == P(1, 2)
    assert np.allclose(p(np.array([0.0, 1.0])), [1.0, 6.0])
