"""Authored identity catalog: the source of the bundled registry file.

Run ``python -m kelattice.registry.catalog`` to rewrite
``data/registry.json`` and ``data/coverage.json`` from the definitions here.
A test checks the bundled files are in sync with this module.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from .expr import evaluate_closed_form, parse_expr

__all__ = ["catalog_json", "coverage_json", "write_bundled", "DATA_DIR", "DEFAULT_GRID"]

DATA_DIR = Path(__file__).with_name("data")
DEFAULT_GRID = ("3/2", "2", "3")

_records: List[dict] = []


def _tree(x):
    if isinstance(x, Fraction):
        x = int(x) if x.denominator == 1 else str(x)
    if isinstance(x, str):
        return parse_expr(x)
    return x


def _exponent_max(expr, s_values) -> float:
    if s_values is None:
        return evaluate_closed_form(_tree(expr), None)
    return max(evaluate_closed_form(_tree(expr), float(Fraction(s))) for s in s_values)


def _add(rid, citation, lhs, rhs, s=None, reg=(), skip=(), tags=(), note="", tol=None):
    s_values = None if s is None else [str(Fraction(v)) for v in s]
    if tol is None:
        singular = "pfq" in rhs
        if lhs["kind"] == "kintegral":
            worst = max(_exponent_max(lhs["gamma_K"], s_values), _exponent_max(lhs["delta_Kp"], s_values))
            singular = singular or worst >= 3
        tol = "SINGULAR" if singular else "STANDARD"
    rec = {"id": rid, "citation": citation, "tags": list(tags), "lhs": lhs, "rhs": parse_expr(rhs),
           "s_values": s_values, "tolerance_class": tol}
    if reg:
        rec["regularize_s"] = [str(Fraction(v)) for v in reg]
    if skip:
        rec["skipped_s"] = [{"s": str(Fraction(v)), "reason": why} for v, why in skip]
    if note:
        rec["note"] = note
    _records.append(rec)


def kint(a=0, b=0, K=0, Kp=0, poly=None, factors=(), pre=1) -> dict:
    out = {"kind": "kintegral", "alpha": _tree(a), "beta": _tree(b), "gamma_K": _tree(K),
           "delta_Kp": _tree(Kp)}
    if poly is not None:
        out["poly"] = [str(Fraction(c)) for c in poly]
    if factors:
        out["factors"] = [[n, str(Fraction(p))] for n, p in factors]
    out["prefactor"] = _tree(pre)
    return out


def lat(m, n, p, method="mellin", pre=1) -> dict:
    return {"kind": "lattice", "m": str(Fraction(m)), "n": str(Fraction(n)), "p": str(Fraction(p)),
            "method": method, "prefactor": _tree(pre)}


def kval(k) -> dict:
    return {"kind": "kvalue", "k": _tree(k)}


# ----------------------------------------------------------------------
# theta-product table: integral column = lattice column
#
# Each row is (source, lattice column, prefactor, k power, k' power,
# extra K power c, named factors, s-grid). The integrand is
# prefactor * f * (K'/K)^(s-1), with f = k^a k'^b K^c * factors, so the
# K exponent is c + 1 - s and the K' exponent is s - 1.

_NO_K = ("3", "4")
_K1 = ("4", "5")
_K2 = ("5", "6")
_P05 = "pi^(s+1/2)/gamma(s)/sqrt(2)"
_P0 = "pi^s/gamma(s)"
_PH = "pi^(s-1/2)/gamma(s)"
_P1 = "2*pi^(s-1)/gamma(s)"
_P2 = "4*pi^(s-2)/gamma(s)"
_P3 = "8*pi^(s-3)/gamma(s)"
H = Fraction(1, 2)

TABLE = [
    ("theta2", "2^(2*s+1)*lam(2*s)", _P05, -H, -2, -Fraction(3, 2), (), DEFAULT_GRID),
    ("(theta2*theta4)^(1/2)", "2^(3*s+1/2)*L8(2*s)", _P05, -Fraction(3, 4), -Fraction(7, 4), -Fraction(3, 2), (), DEFAULT_GRID),
    ("(theta2*theta3*theta4)^(1/3)", "2^(1/3)*12^s*L12(2*s)", _P05, -Fraction(5, 6), -Fraction(11, 6), -Fraction(3, 2), (), DEFAULT_GRID),
    ("theta3^(1/2)*(theta2*theta3*theta4)^(1/6)", "2^(1/6)*24^s*L24(2*s)", _P05, -Fraction(11, 12), -Fraction(23, 12), -Fraction(3, 2), (), DEFAULT_GRID),
    ("theta2^2", "2^(s+2)*lam(s)*beta(s)", _P0, 0, -2, -1, (), DEFAULT_GRID),
    ("theta2*theta3", "2^(2*s+1)*lam(s)*beta(s)", _P0, -H, -2, -1, (), DEFAULT_GRID),
    ("theta2*theta4", "2^(2*s+1)*L8(s)*Lm8(s)", _P0, -H, -Fraction(3, 2), -1, (), DEFAULT_GRID),
    ("theta2(q^2)*theta3", "2^(s+1)*lam(s)*Lm8(s)", _P0, -1, -2, -1, (("half_one_minus_kp", H),), DEFAULT_GRID),
    ("theta2(q^2)*theta4", "2^(s+1)*beta(s)*L8(s)", _P0, -1, -Fraction(3, 2), -1, (("half_one_minus_kp", H),), DEFAULT_GRID),
    ("theta3^2-theta3*theta3(q^2)", "2*zeta(s)*(2*beta(s)-Lm8(s))", _P0, -1, -2, -1, (("one_minus_sqrt_half_one_plus_kp", 1),), DEFAULT_GRID),
    ("theta3^2-theta4^2", "8*lam(s)*beta(s)", _P0, -1, -2, -1, (("one_minus_kp", 1),), DEFAULT_GRID),
    ("theta2*theta3*theta4", "2^(2*s+1)*beta(2*s-1)", "sqrt(2)*" + _PH, -H, -Fraction(3, 2), -H, (), DEFAULT_GRID),
    ("theta2*theta3*(theta2*theta3*theta4)^(1/3)", "3^s*(1+2^(2-2*s))*Lm3(2*s-1)", _PH + "/2^(5/6)", -Fraction(1, 3), -Fraction(11, 6), -H, (), DEFAULT_GRID),
    ("theta2*theta4*(theta2*theta3*theta4)^(1/3)", "3^s*Lm3(2*s-1)", _PH + "/2^(5/6)", -Fraction(1, 3), -Fraction(4, 3), -H, (), DEFAULT_GRID),
    ("theta3^2*(theta2*theta4)^(1/2)", "8^s*Lm8(2*s-1)", _PH, -Fraction(3, 4), -Fraction(7, 4), -H, (), DEFAULT_GRID),
    ("theta3^(5/2)*(theta2*theta3*theta4)^(1/6)", "24^s*Lm24(2*s-1)", "2^(1/3)*" + _PH, -Fraction(11, 12), -Fraction(23, 12), -H, (), DEFAULT_GRID),
    ("theta4^(5/2)*(theta2*theta3*theta4)^(1/6)", "24^s*(1+2^(1-2*s))*Lm3(2*s-1)", "2^(1/3)*" + _PH, -Fraction(11, 12), -Fraction(2, 3), -H, (), DEFAULT_GRID),
    ("theta2^4", "16*lam(s)*lam(s-1)", _P1, 1, -2, 0, (), _NO_K),
    ("theta2^3*theta3", "4^s*(lam(s)*lam(s-1)-beta(s)*beta(s-1))", _P1, H, -2, 0, (), _NO_K),
    ("theta2^2*theta3^2", "2^(s+2)*lam(s)*lam(s-1)", _P1, 0, -2, 0, (), _NO_K),
    ("theta2*theta3^3", "4^s*(lam(s)*lam(s-1)+beta(s)*beta(s-1))", _P1, -H, -2, 0, (), _NO_K),
    ("theta2^3*theta4", "4^s*(Lm8(s)*Lm8(s-1)-L8(s)*L8(s-1))", _P1, H, -Fraction(3, 2), 0, (), DEFAULT_GRID),
    ("theta2^2*theta4^2", "2^(s+2)*beta(s)*beta(s-1)", _P1, 0, -1, 0, (), DEFAULT_GRID),
    ("theta2*theta4^3", "4^s*(Lm8(s)*Lm8(s-1)+L8(s)*L8(s-1))", _P1, -H, -H, 0, (), DEFAULT_GRID),
    ("theta3^4-theta3^2*theta4^2", "8*(1+2^(2-s))*lam(s)*lam(s-1)", _P1, 1, -2, 0, (("one_plus_kp", -1),), _NO_K),
    ("theta2^6", "2^(s+2)*(lam(s-2)*beta(s)-beta(s-2)*lam(s))", _P2, 2, -2, 1, (), _K1),
    ("theta2^4*theta3^2", "16*zeta(s-2)*beta(s)", _P2, 1, -2, 1, (), _K1),
    ("theta2^3*theta3^3", "2^(2*s-1)*(lam(s-2)*beta(s)-beta(s-2)*lam(s))", _P2, H, -2, 1, (), _K1),
    ("theta2^2*theta3^4", "2^(s+2)*beta(s)*lam(s-2)", _P2, 0, -2, 1, (), _K1),
    ("theta2^4*theta4^2", "16*eta(s-2)*beta(s)", _P2, 1, -1, 1, (), DEFAULT_GRID),
    ("theta2^3*theta4^3", "2^(2*s-1)*(L8(s)*Lm8(s-2)-L8(s-2)*Lm8(s))", _P2, H, -H, 1, (), DEFAULT_GRID),
    ("theta2^2*theta4^4", "2^(s+2)*beta(s-2)*lam(s)", _P2, 0, 0, 1, (), DEFAULT_GRID),
    ("theta3^6-theta4^6", "32*beta(s)*lam(s-2)-8*beta(s-2)*lam(s)", _P2, -1, -2, 1, (("one_minus_kp3", 1),), _K1),
    ("theta4^6-theta3^2*theta4^4", "8*lam(s)*beta(s-2)-16*eta(s-2)*beta(s)", "-" + _P2, -1, 0, 1, (("one_minus_kp", 1),), DEFAULT_GRID),
    ("theta2^8", "2^(8-s)*zeta(s-3)*lam(s)", _P3, 3, -2, 2, (), _K2),
    ("theta2^4*theta3^4", "16*zeta(s-3)*lam(s)", _P3, 1, -2, 2, (), _K2),
    ("theta2^4*theta4^4", "16*eta(s-3)*lam(s)", _P3, 1, 0, 2, (), DEFAULT_GRID),
    ("theta3^8-theta4^8", "32*lam(s)*lam(s-3)", _P3, 0, -2, 2, (), _K2),
]
# the last row carries the polynomial k(2 - k^2)
_TABLE_POLY = {"theta3^8-theta4^8": (0, 2, 0, -1)}


def _table():
    for source, lattice, pre, a, b, c, factors, grid in TABLE:
        skip = []
        if grid is not DEFAULT_GRID:
            skip = [(v, "integral diverges at this s") for v in DEFAULT_GRID if Fraction(v) < Fraction(grid[0])]
            grid = tuple(skip_s for skip_s, _ in skip) + grid
        lhs = kint(a, b, f"{c} + 1 - s", "s - 1", poly=_TABLE_POLY.get(source), factors=factors, pre=pre)
        _add(f"table:{source}", f"table of theta-product integrals, row {source}", lhs, lattice,
             s=grid, skip=skip, tags=("theta-table",))


# ----------------------------------------------------------------------
# identities outside the table

_G8 = "gamma(1/4)^8"
_LF4 = "pi^4/192*(pfq([1/2,1/2,1/2,1/2,1/2],[1,1,1,3/2]) + 7*zeta(3)/pi^2)"
_F76 = "pfq([5/4,1/2,1/2,1/2,1/2,1/2,1/2],[1/4,1,1,1,1,1])"
_S18 = "(gamma(1/8)*gamma(3/8))"


def _lattice_section():
    cite = "half-shifted alternating double sum"
    _add("halfshift:family", cite + ", integral for all s",
         kint(-H, -Fraction(3, 2), "-s", "s - 1"), "pi^(-s)*gamma(s)*2^(2*s+1)*Lm8(s)*L8(s)",
         s=("1",) + DEFAULT_GRID, tags=("lattice-intro",))
    _add("halfshift:s1", cite + ", value at s = 1",
         kint(-H, -Fraction(3, 2), -1, 0), "2*log(1 + sqrt(2))", tags=("lattice-intro",))
    for method in ("mellin", "direct"):
        _add(f"halfshift:lattice-{method}", cite + ", closed form in L-8 L8",
             lat(1, 0, 1, method), "2^(2*s+1)*Lm8(s)*L8(s)", s=("1", "2"), tags=("lattice-intro",))

    _add("first:cubic", "cubic K' integral", kint(Kp=3), f"{_G8}/(128*pi^2)", tags=("cubic",))
    _add("first:cubic-k", "cubic K' integral, weighted by k", kint(a=1, Kp=3, pre=5),
         f"{_G8}/(128*pi^2)", tags=("cubic",))

    _add("example:2G", "lattice example with s = m = p = 2, n = 0", kint(b=-1, K=-1, Kp=1), "2*G",
         tags=("lattice-examples",))
    _add("example:sqrtKKp", "lattice example with m = 2, p = 4, s = 3/2", kint(K=H, Kp=H),
         "sqrt(2)*beta(3/2)*lam(3/2)", tags=("lattice-examples",))

    cite = "eight-fold sum L(4,0,4;s)"
    _add("t2t4:lattice", cite, lat(4, 0, 4), "16*eta(s-3)*lam(s)", s=DEFAULT_GRID, tags=("t2t4",))
    _add("t2t4:family", cite + ", integral form", kint(a=1, K="3 - s", Kp="s - 1"),
         "2*pi^(3-s)*gamma(s)*eta(s-3)*lam(s)", s=("1",) + DEFAULT_GRID + ("4",), reg=("1",), tags=("t2t4",))
    for rid, lhs, rhs in (
        ("t2t4:kK2", kint(a=1, K=2), "7*zeta(3)/4"),
        ("t2t4:kKKp", kint(a=1, K=1, Kp=1), "pi^3/16"),
        ("t2t4:kKp2", kint(a=1, Kp=2), "7*zeta(3)/4"),
        ("t2t4:kKp3/K", kint(a=1, K=-1, Kp=3), "pi^3*log(2)/8"),
    ):
        _add(rid, cite + ", special values", lhs, rhs, tags=("t2t4",))

    cite = "origin-omitted sum with m = 0"
    _add("hardy-lorenz:integral", cite + ", n = s = 2",
         kint(-1, -2, 1, -3, factors=(("two_Kp_minus_pi", 1),)), "4*G/3", tags=("regularized",))
    _add("hardy-lorenz:lattice", cite + ", planar sum", lat(0, 2, 0), "2*pi^2*G/3", s=("2",),
         tags=("regularized",))

    cite = "eight-dimensional sum L(2,0,6;3)"
    _add("L206:lattice", cite, lat(2, 0, 6), "pi^3/4*(1 + 2*pfq([1/2,1/2,1/2,1/2],[1,1,1]))", s=("3",),
         tags=("new-evaluations",))
    _add("L206:integral", cite + ", integral of k' K'^2", kint(b=1, Kp=2),
         "pi^3/16*(1 + 2*pfq([1/2,1/2,1/2,1/2],[1,1,1]))", tags=("new-evaluations",),
         note="L(2,0,6;3) = 4 * integral of k' K'^2 by the first integral form")

    cite = "quarter-power integral of K"
    _add("quarter:integral", cite, kint(Fraction(3, 4), -Fraction(3, 4), 1), "pi^2/12*sqrt(5 + 1/sqrt(2))",
         tags=("new-evaluations",))
    _add("quarter:lattice", cite + ", as L(5/2,0,7/2;2)/4",
         lat(Fraction(5, 2), 0, Fraction(7, 2), pre="1/4"), "pi^2/12*sqrt(5 + 1/sqrt(2))", s=("2",),
         tags=("new-evaluations",))

    cite = "six-dimensional evaluation from 2 L(2,2,2;2) = L(1,1,4;2)"
    _add("en6:L114", cite, lat(1, 1, 4), "gamma(1/4)^4/(2*pi)", s=("2",), tags=("new-evaluations",))
    _add("en6:L222", cite + ", left side", lat(2, 2, 2), "gamma(1/4)^4/(4*pi)", s=("2",),
         tags=("new-evaluations",))
    _add("hirschhorn:integral", "Hirschhorn series for (theta2 theta3 theta4)^2", kint(b=-1, K=1),
         "gamma(1/4)^4/(16*pi)", tags=("new-evaluations",))

    cite = "eight-dimensional 7F6 evaluation from 2 L(4,2,2;3) = L(2,2,4;3)"
    _add("7F6:L224", cite, lat(2, 2, 4), "pi^4/4*" + _F76, s=("3",), tags=("new-evaluations",))
    _add("7F6:L422", cite + ", left side", lat(4, 2, 2), "pi^4/8*" + _F76, s=("3",), tags=("new-evaluations",))

    cite = "L-value L(f,4) of eta^4(2 tau) eta^4(4 tau)"
    _add("Lf4:L224", cite + ", eight-dimensional sum", lat(2, 2, 4), "64*" + _LF4, s=("4",),
         tags=("new-evaluations",))
    _add("Lf4:L422", cite + ", L(f,4) = L(4,2,2;4)/16", lat(4, 2, 2), "16*" + _LF4, s=("4",),
         tags=("new-evaluations",))
    _add("Lf4:Kp3/K", cite + ", K integrals", kint(K=-1, Kp=3), "48/pi*" + _LF4, tags=("new-evaluations",))
    _add("Lf4:K3/Kp", cite + ", K integrals", kint(K=3, Kp=-1, pre=4), "48/pi*" + _LF4,
         tags=("new-evaluations",))

    cite = "ten-dimensional sums from the cubic K' integral"
    for rid, lhs in (("10d:L424", lat(4, 2, 4, pre=5)), ("10d:L244", lat(2, 4, 4)),
                     ("10d:L118", lat(1, 1, 8, pre="1/8"))):
        _add(rid, cite, lhs, f"{_G8}/(48*pi^2)", s=("4",), tags=("new-evaluations", "ten-dim"))
    cite = "ten-dimensional alternating sum with the origin omitted"
    _add("10d:theta4^10-s3", cite + ", s = 3", lat(0, 0, 10), f"-pi^3/10 - {_G8}/(120*pi^3)", s=("3",),
         tags=("new-evaluations", "ten-dim"))
    _add("10d:theta4^10-s4", cite + ", s = 4", lat(0, 0, 10),
         f"-7*pi^4/1800 - 32*beta(4)/5 - {_G8}/(400*pi^2)", s=("4",), tags=("new-evaluations", "ten-dim"))


def _eisenstein_section():
    cite = "E6 family of even K powers"
    k4 = (0, 1, 0, -2)
    _add("K4:family", cite, kint(K="5 - s", Kp="s - 1", poly=k4), "pi^(5-s)/2*gamma(s)*eta(s-5)*lam(s)",
         s=("-2", "-1", "0", "1") + DEFAULT_GRID, reg=("-2", "-1", "0", "1"), tags=("eisenstein",))
    k4n = (0, -1, 0, 2)
    for rid, K, Kp, rhs in (
        ("k4nice:s-2", 7, -3, "51/256*zeta(3)*pi^5"),
        ("k4nice:s-1", 6, -2, "1905/64*zeta(7)"),
        ("k4nice:s0", 5, -1, "log(2)/16*pi^5"),
        ("k4nice:s1", 4, 0, "93/16*zeta(5)"),
        ("k4nice:s2", 3, 1, "pi^5/128"),
    ):
        _add(rid, cite + ", special values with k(2k^2 - 1)", kint(K=K, Kp=Kp, poly=k4n), rhs,
             tags=("eisenstein", "k4nice"))
    for rid, poly, w, den in (
        ("E8:family", (0, 2, 0, -17, 0, 17), 7, 4),
        ("E10:family", (0, 1, 0, -33, 0, 93, 0, -62), 9, 32),
        ("E12:family", (0, 2, 0, -259, 0, 1641, 0, -2764, 0, 1382), 11, 64),
    ):
        _add(rid, f"Eisenstein family for K^{w - 1}", kint(K=f"{w} - s", Kp="s - 1", poly=poly),
             f"pi^({w}-s)/{den}*gamma(s)*eta(s-{w})*lam(s)", s=("1",) + DEFAULT_GRID, reg=("1",),
             tags=("eisenstein",))
    _add("E8:s1", "Eisenstein family for K^6 at s = 1", kint(K=6, poly=(0, 2, 0, -17, 0, 17)),
         "5715/64*zeta(7)", tags=("eisenstein",))


def _modular_section():
    cite = "odd K powers from weight 4p+1 theta forms"
    for rid, poly, Kp, rhs in (
        ("thetapow:p2", (0, 4, 0, 1, 0, -1), 7, "3*gamma(1/4)^16/(2^12*5*pi^4)"),
        ("thetapow:p3", (0, 16, 0, -92, 0, 93, 0, -2, 0, 1), 11, "189*gamma(1/4)^24/(2^15*65*pi^6)"),
        ("thetapow:p4", (0, 64, 0, 848, 0, -2136, 0, 2577, 0, -1291, 0, 3, 0, -1), 15,
         "43659*gamma(1/4)^32/(2^21*85*pi^8)"),
    ):
        _add(rid, cite + ", displayed values", kint(Kp=Kp, poly=poly), rhs, tags=("theta-power",))

    cite = "sqrt(2) lattice form and the singular value at k = sqrt(2) - 1"
    _add("singular:K", cite + ", K(sqrt(2) - 1)", kval("sqrt(2) - 1"),
         f"sqrt((2 + sqrt(2))/(128*pi))*{_S18}", tags=("sqrt2-form",))
    _add("sqrt2:K3", cite + ", cubic case", kint(K=3, poly=(2, 3, -1), factors=(("one_plus_k", -H),)),
         f"{_S18}^4/(384*sqrt(2)*pi^2)", tags=("sqrt2-form",))
    _add("sqrt2:K5", cite + ", first K^5 evaluation", kint(K=5, poly=(4, -6, 5, 12, 1), factors=(("one_plus_k", -H),)),
         f"{_S18}^6/(2304*sqrt(2)*pi^3)", tags=("sqrt2-form",))

    cite = "variations of the sqrt(2) lattice method"
    p14 = (1, 0, 14, 0, 1)
    p14sq = (1, 0, 28, 0, 198, 0, 28, 0, 1)
    p7 = (1, 0, -1, 0, -4)
    for rid, lhs, rhs in (
        ("variation:Kp5", kint(a=-H, Kp=5, poly=p14), "3*gamma(1/4)^12/(32*pi^3)"),
        ("variation:K5", kint(a=-H, K=5, poly=p14, pre=32), "3*gamma(1/4)^12/(32*pi^3)"),
        ("variation:Kp7", kint(Kp=7, poly=p7), "9*gamma(1/4)^16/(4096*pi^4)"),
        ("variation:K7", kint(K=7, poly=p7, pre="-120/7"), "9*gamma(1/4)^16/(4096*pi^4)"),
        ("variation:Kp9", kint(a=-H, Kp=9, poly=p14sq), "189*gamma(1/4)^20/(128*pi^5)"),
        ("variation:K9", kint(a=-H, K=9, poly=p14sq, pre=512), "189*gamma(1/4)^20/(128*pi^5)"),
    ):
        _add(rid, cite, lhs, rhs, tags=("sqrt2-form", "variations"))

    _add("twisted:K3", "twisted Eisenstein series with chi_-4 and chi_-8",
         kint(a=Fraction(1, 4), b=H, K=3), f"(sqrt(2) - 1)^(3/2)/(128*sqrt(2)*pi^2)*{_G8}", tags=("twisted",))


def _e_section():
    cite = "E integrals by differentiating q-identities"
    _add("E:eeg", cite + ", from the E4 Lambert series",
         kint(a=1, K="3 - s", Kp="s", factors=(("two_E_minus_K", 1),)),
         "pi^(4-s)/2*gamma(s+1)*eta(s-3)*lam(s)", s=("1",) + DEFAULT_GRID, reg=("1",), tags=("E-integrals",))
    too_low = (("3/2", "integral diverges at k = 0 for s <= 2"), ("2", "integral diverges at k = 0 for s <= 2"))
    _add("E:Ep/k", cite + ", from theta2^4",
         kint(a=-1, K="s", Kp="1 - s", factors=(("Ep", 1),)), "2*pi^(2-s)*gamma(s+1)*lam(s-1)*lam(s)",
         s=("3/2", "2", "3", "4"), skip=too_low, tags=("E-integrals",))
    _add("E:3E-2K", cite + ", from theta2^2 theta4^4",
         kint(K="2 - s", Kp="s", factors=(("three_E_minus_two_K", 1),)),
         "pi^(3-s)/2*(2^s - 1)*gamma(s+1)*beta(s-2)*zeta(s)", s=("1",) + DEFAULT_GRID, reg=("1",),
         tags=("E-integrals",))
    _add("E:EKp3/K", cite + ", special value at s = 3", kint(K=-1, Kp=3, factors=(("E", 1),)),
         f"{_G8}/(192*pi^2) + 7*pi/4*zeta(3)", tags=("E-integrals",))
    _add("E:sqrt-k/kp", cite + ", from theta2^3 theta4^3",
         kint(a=H, b=-H, Kp=2, factors=(("two_E_minus_K", 1),)), "pi^3/(6*sqrt(2))", tags=("E-integrals",))
    _add("E:Ep2", cite + ", double differentiation of theta2^2",
         kint(a=-1, b=-1, K="s", Kp="1 - s", factors=(("two_Ep2_minus_k2Kp2", 1),)),
         "2^(s-1)*pi^(3-s)*gamma(s+1)*lam(s-1)*beta(s-1)", s=("3/2", "2", "3", "4"), skip=too_low,
         tags=("E-integrals",))
    _add("E:Ep2-s3", cite + ", double differentiation at s = 3",
         kint(a=-1, b=-1, K=3, Kp=-2, factors=(("Ep", 2),)), f"3/2*pi^2*G + {_G8}/(256*pi^2)",
         tags=("E-integrals",))


# ----------------------------------------------------------------------
# coverage manifest: identity-bearing displays and where they are checked

COVERAGE = [
    ("K and E as 2F1 and derivative formulas", None, "specfun unit tests and the Legendre property suite"),
    ("theta functions in terms of k and K", None, "theta property suites"),
    ("nome and dq/dk", None, "nome round-trip property suite"),
    ("cubic K' integral", ["first:cubic", "first:cubic-k"], None),
    ("half-shifted alternating double sum: Mellin form", ["halfshift:family"], None),
    ("half-shifted alternating double sum: L-8 L8 closed form", ["halfshift:lattice-mellin", "halfshift:lattice-direct"], None),
    ("half-shifted alternating double sum: integral family", ["halfshift:family"], None),
    ("half-shifted alternating double sum: s = 1 value", ["halfshift:s1"], None),
    ("lattice sum as a Mellin transform, first and second integral forms", None, "dual-form property suite"),
    ("reflection between the two integral forms", None, "reflection property suite (Gamma-corrected form)"),
    ("Jacobi linear relation among lattice sums", None, "Jacobi relation property suite"),
    ("theta-product table", [f"table:{row[0]}" for row in TABLE], None),
    ("lattice examples 2G and sqrt(K K')", ["example:2G", "example:sqrtKKp"], None),
    ("eight-fold sum L(4,0,4;s) and its special values",
     ["t2t4:lattice", "t2t4:family", "t2t4:kK2", "t2t4:kKKp", "t2t4:kKp2", "t2t4:kKp3/K"], None),
    ("origin-omitted planar sum", ["hardy-lorenz:integral", "hardy-lorenz:lattice"], None),
    ("L(2,0,6;3) with 4F3", ["L206:lattice", "L206:integral"], None),
    ("quarter-power integral and L(5/2,0,7/2;2)", ["quarter:integral", "quarter:lattice"], None),
    ("six-dimensional sum with a 2(m - 1/4)^2 coordinate", None,
     "weighted quadratic form outside the L(m,n,p;s) family; its value is the quarter-power integral times a constant"),
    ("two-term relations L(2m,n,n;s) = 2^(m-s) L(m,m,2n;s)", None, "lattice relation tests"),
    ("six-dimensional evaluation", ["en6:L114", "en6:L222"], None),
    ("triple product rewrite with a weight m1", None, "weighted sum outside the L(m,n,p;s) family"),
    ("7F6 eight-dimensional evaluation", ["7F6:L224", "7F6:L422"], None),
    ("Hirschhorn series", ["hirschhorn:integral"], None),
    ("functional equations of self-dual sums", None, "functional equation tests (Gamma-corrected form)"),
    ("L(f,4) and its sums and integrals", ["Lf4:L224", "Lf4:L422", "Lf4:Kp3/K", "Lf4:K3/Kp"], None),
    ("ten-dimensional evaluations from the cubic integral", ["10d:L424", "10d:L244", "10d:L118"], None),
    ("Liouville expansion of theta4^10 - 1", None,
     "involves the weighted double sum of (m - n i)^4; only its s = 3, 4 consequences are checked"),
    ("ten-dimensional origin-omitted sums at s = 3, 4", ["10d:theta4^10-s3", "10d:theta4^10-s4"], None),
    ("Eisenstein series definition and Lambert series", None, "q-series unit tests"),
    ("E4 and E6 in k and K at q^2, q and -q", None, "symbolic tests against q-series"),
    ("Eisenstein-difference theorem", ["generated:eisenstein"], None),
    ("E4 case Q_2 = 240 k^2 k'^2", None, "exact symbolic test"),
    ("E6 family and its special values",
     ["K4:family", "k4nice:s-2", "k4nice:s-1", "k4nice:s0", "k4nice:s1", "k4nice:s2"], None),
    ("E8, E10 and E12 families", ["E8:family", "E8:s1", "E10:family", "E12:family"], None),
    ("odd K powers theorem", ["generated:theta-power"], None),
    ("displayed odd-power examples p = 2, 3, 4", ["thetapow:p2", "thetapow:p3", "thetapow:p4"], None),
    ("sqrt(2) lattice form g(q)", None, "exact sympy check"),
    ("singular value at k = sqrt(2) - 1", ["singular:K"], None),
    ("sqrt(2) form integrals for K^3 and K^5", ["sqrt2:K3", "sqrt2:K5"], None),
    ("variations of the sqrt(2) method",
     ["variation:Kp5", "variation:K5", "variation:Kp7", "variation:K7", "variation:Kp9", "variation:K9"], None),
    ("twisted Eisenstein integral", ["twisted:K3"], None),
    ("ten-dimensional sum with 2 m^2 coordinates", None, "weighted quadratic form outside the L(m,n,p;s) family"),
    ("derivative of the E4 Lambert identity", None, "derive-e exact check"),
    ("E integral family from the E4 case", ["E:eeg"], None),
    ("E' / k family", ["E:Ep/k"], None),
    ("3E - 2K family and its s = 3 value", ["E:3E-2K", "E:EKp3/K"], None),
    ("sqrt(k/k') K'^2 (2E - K)", ["E:sqrt-k/kp"], None),
    ("E'^2 family and its s = 3 value", ["E:Ep2", "E:Ep2-s3"], None),
]


def _build():
    _records.clear()
    _table()
    _lattice_section()
    _eisenstein_section()
    _modular_section()
    _e_section()
    return list(_records)


def catalog_json() -> str:
    return json.dumps(_build(), indent=1, ensure_ascii=True) + "\n"


def coverage_json() -> str:
    out = []
    for display, recs, reason in COVERAGE:
        entry = {"display": display}
        if recs is not None:
            entry["records"] = recs
        else:
            entry["out_of_scope"] = reason
        out.append(entry)
    return json.dumps(out, indent=1) + "\n"


def write_bundled(directory: Optional[Path] = None) -> None:
    directory = DATA_DIR if directory is None else Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    (directory / "registry.json").write_text(catalog_json(), encoding="utf-8")
    (directory / "coverage.json").write_text(coverage_json(), encoding="utf-8")


if __name__ == "__main__":
    write_bundled()
