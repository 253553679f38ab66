"""Acceptance criteria 1 to 10.

Each test records one ``criterion N: PASS|FAIL`` line, echoed to stdout and
collected in the terminal summary. Run standalone with ``-s`` to see the lines
inline.
"""

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from kelattice.errors import IntegrabilityError, TailUnboundedError
from kelattice.lattice import (LatticeSumSpec, jacobi_linear_relation_check, lattice_direct, lattice_mellin,
                               lattice_mellin_dual, lattice_value, reflection_equivalent)
from kelattice.lseries import lvalue, regularized_product
from kelattice.quadrature import KIntegralSpec, k_integral
from kelattice.registry import FAIL, PASS, SKIPPED, load_registry, run_suite
from kelattice.specfun import (ellint_complementary, ellint_E, ellint_K, gamma_fn, modulus_from_nome, nome,
                               theta)
from kelattice.symbolic import (ONE_MINUS_K2, KEExpr, Poly, compute_gp, compute_pn, compute_Qn,
                                keexpr_to_qseries, q_ddq)

F = Fraction
G14 = gamma_fn(0.25)
N_RANDOM = 25


def record(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return ok


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.fixture(scope="module")
def registry():
    return load_registry()


def rows_within(report, tol):
    bad = [r for r in report.rows if r.status == FAIL or (r.status == PASS and r.rel_error > tol)]
    worst = max((r.rel_error for r in report.rows if r.status == PASS), default=float("nan"))
    return bad, worst


# ---------------------------------------------------------------- 1

def test_criterion_1_log_one_plus_sqrt2():
    v = k_integral(KIntegralSpec(F(-1, 2), F(-3, 2), -1, 0))
    e = rel(v, 2 * math.log(1 + math.sqrt(2)))
    assert record(1, e <= 1e-10, f"int dk/(sqrt(k) k'^(3/2) K) = 2 log(1+sqrt 2), rel err {e:.1e}")


# ---------------------------------------------------------------- 2

def test_criterion_2_cube_of_Kp():
    target = G14 ** 8 / (128 * math.pi ** 2)
    a = k_integral(KIntegralSpec(0, 0, 0, 3))
    b = 5 * k_integral(KIntegralSpec(1, 0, 0, 3))
    ea, eb = rel(a, target), rel(b, target)
    assert record(2, max(ea, eb) <= 1e-7,
                  f"int K'^3 and 5 int k K'^3 vs Gamma(1/4)^8/(128 pi^2), rel err {ea:.1e} and {eb:.1e}")


# ---------------------------------------------------------------- 3

def test_criterion_3_theta_table(registry):
    rep = run_suite(registry, "theta-table")
    ids = {r.id for r in rep.rows}
    c = rep.counts
    ok = c[FAIL] == 0 and len(ids) >= 38
    assert record(3, ok, f"{len(ids)} table rows, PASS {c[PASS]}, FAIL {c[FAIL]}, SKIPPED {c[SKIPPED]} "
                         "(skips are non-integrable grid points)"), [r.id for r in rep.failures()]


# ---------------------------------------------------------------- 4

PN_DISPLAYS = {
    3: (F(1, 2), Poly.from_ascending([1, 0, -2])),
    4: (F(1, 4), Poly.from_ascending([2, 0, -17, 0, 17])),
    5: (F(1, 32), Poly.from_ascending([1, 0, -2]) * Poly.from_ascending([1, 0, -31, 0, 31])),
    6: (F(1, 64), Poly.from_ascending([2, 0, -259, 0, 1641, 0, -2764, 0, 1382])),
}


def test_criterion_4_even_power_machinery():
    q2 = compute_Qn(2) == Poly.from_ascending([0, 0, 240, 0, -240])
    displays = all(compute_pn(n) * c == d for n, (c, d) in PN_DISPLAYS.items())
    asym = [n for n in range(2, 9) if compute_pn(n).subs_k2(ONE_MINUS_K2) != compute_pn(n)]
    ok = q2 and displays and not asym
    detail = f"Q2 {'ok' if q2 else 'wrong'}, p_3..p_6 displays {'ok' if displays else 'wrong'}, "
    detail += ("p_n(k) = p_n(k') for n <= 8" if not asym else
               f"p_n(k) = p_n(k') fails for n = {asym} (exactly p_n(k') = -p_n(k) there)")
    assert record(4, ok, detail)


# ---------------------------------------------------------------- 5

def test_criterion_5_k4_family(registry):
    rep = run_suite(registry, "k4nice")
    by_s = {r.id: r for r in rep.rows}
    ids = [f"k4nice:s{s}" for s in (-2, -1, 0, 1, 2)]
    missing = [i for i in ids if i not in by_s]
    bad, worst = rows_within(rep, 1e-8)
    # independent s = 1 value from the regularized L-series product
    lhs1 = by_s["k4nice:s1"].lhs if "k4nice:s1" in by_s else float("nan")
    rp = -math.pi ** 4 * regularized_product([("ETA", -5), ("LAMBDA", 0)], 1.0) / 2
    e1 = rel(lhs1, rp)
    ok = not missing and not bad and e1 <= 1e-8
    assert record(5, ok, f"s = -2..2 worst rel err {worst:.1e}; s = 1 against regularized_product "
                         f"rel err {e1:.1e}")


# ---------------------------------------------------------------- 6

GP_DISPLAYS = {
    1: ([1], F(1, 640), 8, -2),
    2: ([4, 0, 1, 0, -1], F(3, 2 ** 12 * 5), 16, -4),
    3: ([16, 0, -92, 0, 93, 0, -2, 0, 1], F(189, 2 ** 15 * 65), 24, -6),
    4: ([64, 0, 848, 0, -2136, 0, 2577, 0, -1291, 0, 3, 0, -1], F(43659, 2 ** 21 * 85), 32, -8),
}


def test_criterion_6_odd_power_machinery():
    exact, errs = True, []
    for p, (coeffs, r, gpow, pipow) in GP_DISPLAYS.items():
        g = compute_gp(p)
        exact &= g.P == Poly.from_ascending(coeffs)
        exact &= (g.constant.rational, g.constant.gamma_power, g.constant.pi_power) == (r, gpow, pipow)
        # numeric check uses only the displayed data
        v = k_integral(KIntegralSpec(0, 0, 0, 4 * p - 1, poly=(F(0),) + tuple(map(F, coeffs))))
        errs.append(rel(v, float(r) * G14 ** gpow * math.pi ** pipow))
    ok = exact and max(errs) <= 1e-7
    assert record(6, ok, f"P_p and constants exact for p = 1..4: {exact}; K'^3/7/11/15 rel errs "
                         + ", ".join(f"{e:.1e}" for e in errs))


# ---------------------------------------------------------------- 7

def test_criterion_7_lattice_cross_validation():
    worst, n_ok, divergent = 0.0, 0, []
    for d in range(1, 5):
        for m in range(d + 1):
            for n in range(d - m + 1):
                for s in (2, 3):
                    spec = LatticeSumSpec(m, n, d - m - n, s)
                    try:
                        direct, _ = lattice_direct(spec)
                    except TailUnboundedError:
                        divergent.append((m, n, d - m - n, s))
                        continue
                    worst = max(worst, abs(direct - lattice_value(spec)))
                    n_ok += 1
    eq = []
    for s in (1, 2):
        target = 2 ** (2 * s + 1) * lvalue("L-8", s) * lvalue("L8", s)
        spec = LatticeSumSpec(1, 0, 1, s)
        eq.append(max(rel(lattice_mellin(spec), target), abs(lattice_direct(spec)[0] - target)))
    ok = worst <= 1e-6 and max(eq) <= 1e-6
    assert record(7, ok, f"{n_ok} cases, max |direct - Mellin| {worst:.1e}; divergent sums (no sign "
                         f"coordinate, s <= d/2) excluded: {divergent}; half-shifted sum at s = 1, 2 "
                         f"max err {max(eq):.1e}")


# ---------------------------------------------------------------- 8

def test_criterion_8_new_evaluations(registry):
    rep = run_suite(registry, "en6,7F6,Lf4,10d")
    bad, worst = rows_within(rep, 1e-7)
    direct = [r.id for r in rep.rows if r.method == "direct"]
    prefixes = {r.id.split(":")[0] for r in rep.rows}
    ok = not bad and not direct and prefixes == {"en6", "7F6", "Lf4", "10d"}
    assert record(8, ok, f"{len(rep.rows)} rows over {sorted(prefixes)}, worst rel err {worst:.1e}, "
                         f"failures {[r.id for r in bad]}")


# ---------------------------------------------------------------- 9

def test_criterion_9_E_integrals(registry):
    rep = run_suite(registry, "E:eeg,E:EKp3/K,E:sqrt-k/kp,E:Ep2-s3")
    need = {("E:eeg", "1"), ("E:eeg", "2"), ("E:EKp3/K", None), ("E:sqrt-k/kp", None), ("E:Ep2-s3", None)}
    have = {(r.id, r.s) for r in rep.rows if r.status == PASS and r.rel_error <= 1e-7}
    missing = need - have
    worst = max(r.rel_error for r in rep.rows if (r.id, r.s) in need and r.rel_error is not None)
    assert record(9, not missing, f"E-integral checks worst rel err {worst:.1e}, missing {sorted(missing, key=str)}")


# ---------------------------------------------------------------- 10

def _legendre(rng):
    k = rng.uniform(0.01, 0.99)
    Kp, Ep = ellint_complementary(k)
    return abs(ellint_E(k) * Kp + Ep * ellint_K(k) - ellint_K(k) * Kp - math.pi / 2) / 1e-12


def _quartic(rng):
    q = rng.uniform(1e-4, 0.9)
    t2, t3, t4 = (theta(i, q) for i in (2, 3, 4))
    return abs(t3 ** 4 - t2 ** 4 - t4 ** 4) / (1e-12 * t3 ** 4)


def _triple(rng):
    q = rng.uniform(1e-4, 0.9)
    with mp.workdps(30):
        rhs = float(mp.nsum(lambda j: 2 * (-1) ** int(j) * (2 * j + 1) * mp.mpf(q) ** ((j + mp.mpf(1) / 2) ** 2),
                            [0, mp.inf]))
    return rel(theta(2, q) * theta(3, q) * theta(4, q), rhs) / 1e-12


def _nome(rng):
    k = rng.uniform(0.02, 0.98)
    return abs(modulus_from_nome(nome(k).q).k - k) / 1e-12


def _half(rng, lo, hi):
    return F(int(rng.integers(lo, hi + 1)), 2)


def _dual(rng):
    m, n, p = _half(rng, 1, 8), _half(rng, 0, 8), _half(rng, 0, 8)
    s = rng.integers(3, 17) / 4
    if p == 0 and s - float(m + n + p) / 2 < 0.5:
        return None
    spec = LatticeSumSpec(m, n, p, s)
    try:
        return rel(lattice_mellin_dual(spec), lattice_mellin(spec)) / 2e-12
    except IntegrabilityError:
        return None


def _reflection(rng):
    spec = LatticeSumSpec(_half(rng, 1, 8), _half(rng, 0, 8), _half(rng, 1, 8), rng.uniform(0.3, 4.0))
    if float(spec.dimension) / 2 - spec.s <= 0.05:
        return None
    other, scale = reflection_equivalent(spec)
    try:
        return rel(lattice_mellin(spec), scale * lattice_mellin(other)) / 1e-9
    except IntegrabilityError:
        return None


def _jacobi(rng):
    m, n, p = (int(x) for x in rng.integers(0, 4, 3))
    if m + n + p == 0:
        return None
    s = (m + n + p + 4) / 2 + float(rng.choice([0.5, 1.0, 1.5, 2.5]))
    scale = max(abs(lattice_value(LatticeSumSpec(m, n, p + 4, s))),
                abs(lattice_value(LatticeSumSpec(m + 4, n, p, s))), 1.0)
    return jacobi_linear_relation_check(m, n, p, s) / (1e-10 * scale)


def _random_expr(rng):
    a, b, c, e = (int(rng.integers(0, hi + 1)) for hi in (2, 2, 4, 1))
    return KEExpr.monomial(3, a=2 * a, b=2 * b, c=c, e=e, f=-(c + e))


def _qddq_fd(rng):
    expr, k, h = _random_expr(rng), rng.uniform(0.2, 0.9), 1e-5
    fd = (float(expr.evaluate(k + h)) - float(expr.evaluate(k - h))) / (2 * h)
    nm = nome(k)
    expected = nm.q * fd / nm.dq_dk
    return abs(float(q_ddq(expr).evaluate(k)) - expected) / max(1e-7 * abs(expected), 1e-9)


def _qddq_series(rng):
    expr, o = _random_expr(rng), 14
    return 0.0 if keexpr_to_qseries(q_ddq(expr), o).equals(keexpr_to_qseries(expr, o).D(), o) else math.inf


PROPERTIES = {
    "Legendre": _legendre, "quartic": _quartic, "triple product": _triple, "nome round trip": _nome,
    "dual forms": _dual, "reflection": _reflection, "Jacobi relation": _jacobi,
    "q_ddq vs differences": _qddq_fd, "q_ddq vs QSeries": _qddq_series,
}


def test_criterion_10_property_suites():
    rng = np.random.default_rng(20240601)
    summary, ok = [], True
    for name, check in PROPERTIES.items():
        ratios = []
        for _ in range(40 * N_RANDOM):
            r = check(rng)
            if r is not None:
                ratios.append(r)
            if len(ratios) == N_RANDOM:
                break
        # ratio = residual / stated tolerance
        good = len(ratios) >= 20 and max(ratios) <= 1.0
        ok &= good
        summary.append(f"{name} {len(ratios)}x{'' if good else ' FAILED'}")
    assert record(10, ok, "; ".join(summary))
