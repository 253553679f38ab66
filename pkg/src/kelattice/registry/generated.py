"""Registry records emitted by the symbolic layer.

These are rebuilt from exact computations on every load, so the polynomial
coefficients in them are never typed by hand.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Tuple

from ..symbolic.eisenstein import compute_pn
from ..symbolic.modular import compute_gp
from .expr import ClosedFormExpr, parse_expr
from .records import IdentityRecord, KIntegralLhs

__all__ = ["eisenstein_record", "theta_power_record", "generated_records",
           "EISENSTEIN_RANGE", "THETA_POWER_RANGE"]

EISENSTEIN_RANGE = range(2, 7)
THETA_POWER_RANGE = range(1, 5)


def eisenstein_record(n: int, s_values=(1, 2)) -> IdentityRecord:
    """int k p_n K^(2n-1-s) K'^(s-1) = pi^(2n-1-s) Gamma(s) eta(s+1-2n) lambda(s)."""
    p = compute_pn(n)
    lhs = KIntegralLhs(alpha=1, gamma_K=parse_expr(f"{2 * n - 1} - s"), delta_Kp=parse_expr("s - 1"),
                       poly=tuple(p.ascending()))
    rhs = ClosedFormExpr.parse(f"pi^({2 * n - 1} - s) * gamma(s) * eta(s + {1 - 2 * n}) * lam(s)",
                               f"Eisenstein-difference theorem, n = {n}")
    sv = tuple(Fraction(s) for s in s_values)
    return IdentityRecord(
        id=f"generated:eisenstein:n{n}", lhs=lhs, rhs=rhs, citation=rhs.cite, s_values=sv,
        regularize_s=tuple(s for s in sv if s == 1), tags=("GENERATED", "eisenstein"),
        note="p_n from the exact E_2n(q^2) - E_2n(-q) computation")


def theta_power_record(p: int) -> IdentityRecord:
    """int k P_p(k) K'^(4p-1) = rational * Gamma(1/4)^(8p) * pi^e."""
    g = compute_gp(p)
    c = g.constant
    lhs = KIntegralLhs(alpha=0, delta_Kp=4 * p - 1, poly=tuple(g.integrand_poly.ascending()))
    rhs = ClosedFormExpr.parse(f"{c.rational} * gamma(1/4)^{c.gamma_power} * pi^({c.pi_power})",
                               f"odd K powers from weight {4 * p + 1} theta forms, p = {p}")
    tol = "SINGULAR" if 4 * p - 1 >= 3 else "STANDARD"
    return IdentityRecord(
        id=f"generated:theta-power:p{p}", lhs=lhs, rhs=rhs, citation=rhs.cite,
        tolerance_class=tol, tags=("GENERATED", "theta-power"),
        note="polynomial and constant from the exact f_4p computation")


@lru_cache(maxsize=1)
def generated_records() -> Tuple[IdentityRecord, ...]:
    """All generated records in a fixed order."""
    return tuple([eisenstein_record(n) for n in EISENSTEIN_RANGE]
                 + [theta_power_record(p) for p in THETA_POWER_RANGE])
