"""Odd powers of K from weight 4p+1 theta forms, and E-identities by differentiation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Dict, Iterable, Tuple

from ..errors import SymbolicError
from ..lseries import bernoulli
from .eisenstein import eisenstein_as_E4E6
from .keexpr import KEExpr, keexpr_to_qseries, q_ddq, theta_power_sum
from .poly import ONE_MINUS_K2, Poly
from .qseries import QSeries

__all__ = [
    "GammaQuarterConstant",
    "GpResult",
    "compute_f4p",
    "compute_gp",
    "f4p_poly",
    "zeta_even_over_pi",
    "E4_AT_I",
    "eisenstein_at_i",
    "QIdentity",
    "BASE_IDENTITIES",
    "base_identity",
    "derive_E_identity",
    "lambert_qseries",
    "sqrt2_lattice_form",
    "sqrt2_lattice_target",
    "sqrt2_lattice_check",
]

# E_4 at tau = i equals E4_AT_I * Gamma(1/4)^8 / pi^6
E4_AT_I = Fraction(3, 64)


@dataclass(frozen=True)
class GammaQuarterConstant:
    """rational * Gamma(1/4)^gamma_power * pi^pi_power."""

    rational: Fraction
    gamma_power: int
    pi_power: int

    def value(self) -> float:
        return (float(self.rational) * math.gamma(0.25) ** self.gamma_power
                * math.pi ** self.pi_power)

    def __str__(self) -> str:
        return f"{self.rational} * Gamma(1/4)^{self.gamma_power} * pi^{self.pi_power}"


@dataclass(frozen=True)
class GpResult:
    """Data for int_0^1 k P(k) K'^(4p-1) dk = constant.

    ``G`` is the polynomial with f_4p = G(k) K^(4p+1) / pi^(4p+1);
    ``g`` = G/(k k'^2) is the integrand weight against K'^(4p-1);
    ``P`` is the primitive integer polynomial with g = scale * k * P.
    """

    p: int
    G: Poly
    g: Poly
    scale: Fraction
    P: Poly
    constant: GammaQuarterConstant

    @property
    def integrand_poly(self) -> Poly:
        """k * P(k), the weight multiplying K'^(4p-1)."""
        return self.P.shift(1)


def compute_f4p(p: int) -> KEExpr:
    """f_4p = sum over m, n of Re (m - i n)^(4p) q^(m^2 + n^2) as a KEExpr.

    Raises `SymbolicError` if E does not cancel.
    """
    if p < 1:
        raise SymbolicError("p must be at least 1")
    sums = [theta_power_sum(b) for b in range(2 * p + 1)]
    out = KEExpr()
    for b in range(2 * p + 1):
        out = out + sums[2 * p - b] * sums[b] * (comb(4 * p, 2 * b) * (-1) ** b)
    if not out.is_E_free():
        raise SymbolicError(f"E does not cancel in f_{4 * p}")
    return out


def _group_poly(expr: KEExpr, c: Fraction, f: Fraction) -> Poly:
    """Polynomial R(k) with expr = R(k) K^c pi^f; raise if the shape differs."""
    if expr.is_zero():
        return Poly()
    a, b, cc, e, ff, g, P = expr.single_group()
    if (cc, ff, e) != (c, f, 0):
        raise SymbolicError("unexpected K or pi power")
    if a.denominator != 1 or g.denominator != 1 or b.denominator != 1 or b % 2 or b < 0:
        raise SymbolicError("group is not a polynomial in k")
    out = P.shift(int(a)) * ONE_MINUS_K2 ** int(b / 2)
    g = int(g)
    return out * (Fraction(2) ** g)


def f4p_poly(p: int) -> Poly:
    """G_p with f_4p = G_p(k) K^(4p+1) / pi^(4p+1)."""
    return _group_poly(compute_f4p(p), Fraction(4 * p + 1), Fraction(-(4 * p + 1)))


def zeta_even_over_pi(n2: int) -> Fraction:
    """zeta(n2) / pi^n2 for even n2 >= 2."""
    if n2 < 2 or n2 % 2:
        raise SymbolicError("argument must be even and positive")
    n = n2 // 2
    return Fraction((-1) ** (n + 1) * 2 ** (n2 - 1)) * bernoulli(n2) / math.factorial(n2)


def eisenstein_at_i(weight: int) -> GammaQuarterConstant:
    """E_weight(i) using E6(i) = 0 and E4(i) = 3 Gamma(1/4)^8 / (64 pi^6)."""
    if weight % 4:
        return GammaQuarterConstant(Fraction(0), 0, 0)
    j = weight // 4
    c = eisenstein_as_E4E6(weight).coefficient(j, 0)
    return GammaQuarterConstant(c * E4_AT_I ** j, 8 * j, -6 * j)


def compute_gp(p: int) -> GpResult:
    """Closed form for int_0^1 g_p(k) K'^(4p-1) dk.

    Mellin transform at s = 4p of f_4p gives
    int_0^1 G_p/(k k'^2) K'^(4p-1) dk = 4 Gamma(4p) zeta(4p) E_4p(i).
    """
    G = f4p_poly(p)
    g = G.exact_div(Poly.monomial(1) * ONE_MINUS_K2)
    if not g.is_odd():
        raise SymbolicError(f"g_{p} is not odd")
    scale, P = g.shift(-1).primitive()
    e = eisenstein_at_i(4 * p)
    rational = 4 * math.factorial(4 * p - 1) * zeta_even_over_pi(4 * p) * e.rational / scale
    const = GammaQuarterConstant(rational, e.gamma_power, e.pi_power + 4 * p)
    return GpResult(p, G, g, scale, P, const)


# ----------------------------------------------------------------------
# theta3(q) theta3(q^2) weight-5 form, handled with sympy since
# theta3(q^2) = sqrt((1 + k') K / pi) is outside the KEExpr algebra


def _sympy_parts():
    import sympy as sp

    kp, K, E = sp.symbols("kp K E", positive=True)
    pi = sp.pi
    k2 = 1 - kp ** 2
    dK = -(E - kp ** 2 * K) / (k2 * kp)
    dE = -kp * (E - K) / k2

    def D(f):
        return sp.together(-(2 * k2 * kp * K ** 2 / pi ** 2)
                           * (sp.diff(f, kp) + dK * sp.diff(f, K) + dE * sp.diff(f, E)))

    return sp, kp, K, E, D


def sqrt2_lattice_form():
    """sympy expression for sum (n^4 - 12 m^2 n^2 + 4 m^4) q^(n^2 + 2 m^2) in kp and K."""
    sp, kp, K, E, D = _sympy_parts()
    t3 = sp.sqrt(2 * K / sp.pi)
    u0 = sp.sqrt((1 + kp) * K / sp.pi)
    s1 = D(t3)
    s2 = D(s1)
    u1 = D(u0) / 2
    u2 = D(D(u0)) / 4
    return s2 * u0 - 12 * s1 * u1 + 4 * t3 * u2


def sqrt2_lattice_target():
    """Closed form sqrt(2)/pi^5 k^2 k' [k^2 (k'-2) + 4(k'+1)] K^5 / (k'+1)^(3/2)."""
    sp, kp, K, E, D = _sympy_parts()
    k2 = 1 - kp ** 2
    return (sp.sqrt(2) / sp.pi ** 5 * k2 * kp * (k2 * (kp - 2) + 4 * (kp + 1)) * K ** 5
            / (kp + 1) ** sp.Rational(3, 2))


def sqrt2_lattice_check() -> bool:
    """Exact check that the weight-5 form equals its closed form (E cancels)."""
    import sympy as sp

    g = sqrt2_lattice_form()
    target = sqrt2_lattice_target()
    ratio = sp.simplify(sp.powsimp(sp.factor(g / target), force=True))
    return ratio == 1




# ----------------------------------------------------------------------
# q-identities and their derivatives


def lambert_qseries(terms: Iterable[Tuple[Fraction, Fraction, Fraction, int]],
                    order, offset=0, step=1) -> QSeries:
    """Sum of c q^a / (1 - eps q^b) over ``terms`` = (c, a, b, eps), exact below ``order``.

    Each term is expanded as c sum_r eps^r q^(a + r b); terms with a >= order
    contribute nothing and may be omitted by the caller.
    """
    out = QSeries(offset, step, (), order)
    cs = list(out.coeffs)
    offset, step, order = out.offset, out.step, out.order
    for c, a, b, eps in terms:
        a, b = Fraction(a), Fraction(b)
        r = 0
        while a + r * b < order:
            j = (a + r * b - offset) / step
            if j.denominator != 1 or j < 0:
                raise SymbolicError("Lambert term off the grid")
            cs[int(j)] += Fraction(c) * eps ** r
            r += 1
    return QSeries(offset, step, tuple(cs), order)


@dataclass(frozen=True)
class QIdentity:
    """series(q) = expr(k, K, E) with k the modulus of nome q."""

    name: str
    series: QSeries
    expr: KEExpr
    derivatives: int = 0

    def differentiate(self) -> "QIdentity":
        """Apply q d/dq to both sides."""
        return QIdentity(self.name, self.series.D(), q_ddq(self.expr), self.derivatives + 1)

    def check(self, order=None) -> bool:
        """Exact comparison of both sides as q-series."""
        order = self.series.order if order is None else order
        n = int(math.ceil(order))
        return keexpr_to_qseries(self.expr, n + 1).equals(self.series, order)

    def numeric_residual(self, k: float) -> float:
        from ..specfun import nome

        q = nome(k).q
        return float(self.series.evaluate(q) - self.expr.evaluate(k))


def _e4case(order: int) -> QIdentity:
    # sum j^3 (-q)^j / (1 - q^(2j)) = -k^2 k'^2 K^4 / pi^4
    terms = [(Fraction(j ** 3 * (-1) ** j), j, 2 * j, 1) for j in range(1, order)]
    series = lambert_qseries(terms, order)
    expr = KEExpr.monomial(-1, a=2, b=2, c=4, f=-4)
    return QIdentity("e4case", series, expr)


def _theta2_fourth(order: int) -> QIdentity:
    # theta2^4 = 16 sum (2n+1) q^(2n+1) / (1 - q^(4n+2)) = (4/pi^2) k^2 K^2
    terms = [(16 * (2 * n + 1), 2 * n + 1, 4 * n + 2, 1) for n in range(order)]
    series = lambert_qseries(terms, order)
    return QIdentity("theta2^4", series, KEExpr.monomial(4, a=2, c=2, f=-2))


def _theta2_square(order: int) -> QIdentity:
    # theta2^2 = 4 q^(1/2) sum q^n / (1 + q^(2n+1)) = (2/pi) k K
    terms = [(4, Fraction(1, 2) + n, 2 * n + 1, -1) for n in range(order)]
    series = lambert_qseries(terms, order, offset=Fraction(1, 2))
    return QIdentity("theta2^2", series, KEExpr.monomial(2, a=1, c=1, f=-1))


def _constant(order: int) -> QIdentity:
    return QIdentity("constant", QSeries(0, 1, (1,), order), KEExpr.const(1))


BASE_IDENTITIES: Dict[str, Callable[[int], QIdentity]] = {
    "e4case": _e4case,
    "theta2^4": _theta2_fourth,
    "theta2^2": _theta2_square,
    "constant": _constant,
}


def base_identity(name: str, order: int = 20) -> QIdentity:
    if name not in BASE_IDENTITIES:
        raise SymbolicError(f"unknown base identity {name!r}; choose from {sorted(BASE_IDENTITIES)}")
    return BASE_IDENTITIES[name](order)


def derive_E_identity(base: QIdentity | str, times: int = 1, order: int = 20) -> QIdentity:
    """Differentiate a q-identity ``times`` times with q d/dq on both sides."""
    ident = base_identity(base, order) if isinstance(base, str) else base
    for _ in range(times):
        ident = ident.differentiate()
    return ident
