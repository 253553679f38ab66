"""Exact expressions in k, k', K, E with the operator q d/dq.

An expression is a finite sum of groups

    2^g pi^f K^c E^e k^a k'^b P(k)

with P a Laurent polynomial in k. Exponents a, b, c, f, g are Fractions
and e is a nonnegative integer. Within a group the fractional part of a
and of g, and b modulo 2, are fixed by the key; integral parts are moved
into P using k'^2 = 1 - k^2. Every group is kept with the largest k'
power that divides it, which makes the representation canonical: two
expressions are equal iff their group maps coincide.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Tuple

import numpy as np

from ..errors import SymbolicError
from .poly import ONE_MINUS_K2, Poly
from .qseries import QSeries, theta_qseries

__all__ = ["KEExpr", "q_ddq", "theta3_expr", "theta_power_sum", "keexpr_to_qseries"]

Key = Tuple[Fraction, Fraction, Fraction, int, Fraction, Fraction]


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _mod(x: Fraction, m: int) -> Fraction:
    return x - m * _floor(x / m)


class KEExpr:
    """Canonical sum of groups 2^g pi^f K^c E^e k^a k'^b P(k).

    ``terms`` maps the key (a mod 1, b mod 2, c, e, f, g mod 1) to the
    pair (b, P); the fractional parts of a and g are carried in the key
    and P absorbs integral powers of k and 2.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Dict[Key, tuple] | None = None):
        self.terms: Dict[Key, tuple] = {}
        for key, (b, P) in (terms or {}).items():
            self._add_group(key, Fraction(b), P)

    # construction -----------------------------------------------------
    @classmethod
    def monomial(cls, coeff=1, a=0, b=0, c=0, e=0, f=0, g=0, poly: Poly | None = None) -> "KEExpr":
        """coeff * 2^g pi^f K^c E^e k^a k'^b * poly(k)."""
        a, b, c, f, g = (Fraction(x) for x in (a, b, c, f, g))
        P = (poly if poly is not None else Poly.const(1)) * Fraction(coeff)
        ai, af = _floor(a), _mod(a, 1)
        gi, gf = _floor(g), _mod(g, 1)
        P = P.shift(ai)
        P = P * (Fraction(2) ** gi)
        out = cls()
        out._add_group((af, _mod(b, 2), c, int(e), f, gf), b, P)
        return out

    @classmethod
    def const(cls, c) -> "KEExpr":
        return cls.monomial(c)

    @classmethod
    def k(cls) -> "KEExpr":
        return cls.monomial(a=1)

    @classmethod
    def kp(cls) -> "KEExpr":
        return cls.monomial(b=1)

    @classmethod
    def K(cls) -> "KEExpr":
        return cls.monomial(c=1)

    @classmethod
    def E(cls) -> "KEExpr":
        return cls.monomial(e=1)

    # internals --------------------------------------------------------
    def _add_group(self, key: Key, b: Fraction, P: Poly) -> None:
        if P.is_zero():
            return
        if key in self.terms:
            b0, P0 = self.terms[key]
            lo = min(b0, b)
            P = P0 * ONE_MINUS_K2 ** int((b0 - lo) / 2) + P * ONE_MINUS_K2 ** int((b - lo) / 2)
            b = lo
            if P.is_zero():
                del self.terms[key]
                return
        while P.divisible_by_one_minus_k2():
            P = P.exact_div(ONE_MINUS_K2)
            b += 2
        self.terms[key] = (b, P)

    def copy(self) -> "KEExpr":
        out = KEExpr()
        out.terms = dict(self.terms)
        return out

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "KEExpr":
        other = _as_expr(other)
        out = self.copy()
        for key, (b, P) in other.terms.items():
            out._add_group(key, b, P)
        return out

    __radd__ = __add__

    def __neg__(self) -> "KEExpr":
        out = KEExpr()
        out.terms = {k: (b, -P) for k, (b, P) in self.terms.items()}
        return out

    def __sub__(self, other) -> "KEExpr":
        return self + (-_as_expr(other))

    def __rsub__(self, other) -> "KEExpr":
        return _as_expr(other) - self

    def __mul__(self, other) -> "KEExpr":
        if isinstance(other, (int, Fraction)):
            out = KEExpr()
            if other != 0:
                out.terms = {k: (b, P * Fraction(other)) for k, (b, P) in self.terms.items()}
            return out
        other = _as_expr(other)
        out = KEExpr()
        for (a1, _, c1, e1, f1, g1), (b1, P1) in self.terms.items():
            for (a2, _, c2, e2, f2, g2), (b2, P2) in other.terms.items():
                P = P1 * P2
                a = a1 + a2
                if a >= 1:
                    a -= 1
                    P = P.shift(1)
                g = g1 + g2
                if g >= 1:
                    g -= 1
                    P = P * 2
                b = b1 + b2
                out._add_group((a, _mod(b, 2), c1 + c2, e1 + e2, f1 + f2, g), b, P)
        return out

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "KEExpr":
        if n < 0:
            raise SymbolicError("negative power of a KEExpr")
        out = KEExpr.const(1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        try:
            return (self - _as_expr(other)).is_zero()
        except TypeError:
            return NotImplemented

    __hash__ = None

    # inspection -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_E_free(self) -> bool:
        return all(key[3] == 0 for key in self.terms)

    def E_degree(self) -> int:
        return max((key[3] for key in self.terms), default=0)

    def groups(self):
        """List of (a, b, c, e, f, g, P) with the full exponents."""
        return [(a, b, c, e, f, g, P) for (a, _, c, e, f, g), (b, P) in self.terms.items()]

    def single_group(self):
        """Unpack a one-group expression, raising otherwise."""
        gs = self.groups()
        if len(gs) != 1:
            raise SymbolicError(f"expected a single group, found {len(gs)}")
        return gs[0]

    def evaluate(self, k, E_value=None):
        """Numeric value at modulus ``k`` (array aware)."""
        from ..specfun import ellint_E, ellint_K

        k = np.asarray(k, dtype=float)
        kp = np.sqrt((1 - k) * (1 + k))
        K = np.asarray(ellint_K(k), dtype=float)
        E = np.asarray(ellint_E(k), dtype=float) if E_value is None else E_value
        total = np.zeros_like(k)
        for a, b, c, e, f, g, P in self.groups():
            total = total + (2.0 ** float(g) * math.pi ** float(f) * K ** float(c) * E ** e
                             * k ** float(a) * kp ** float(b) * P(k))
        return total

    def __repr__(self) -> str:
        if not self.terms:
            return "KEExpr(0)"
        parts = []
        for a, b, c, e, f, g, P in self.groups():
            parts.append(f"[2^{g} pi^{f} K^{c} E^{e} k^{a} k'^{b}] * ({P})")
        return "KEExpr(" + " + ".join(parts) + ")"


def _as_expr(x) -> KEExpr:
    if isinstance(x, KEExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return KEExpr.const(x)
    if isinstance(x, Poly):
        return KEExpr.monomial(poly=x)
    raise TypeError(f"cannot convert {type(x).__name__} to KEExpr")


def q_ddq(expr: KEExpr) -> KEExpr:
    """Apply q d/dq = (2 k k'^2 K^2 / pi^2) d/dk exactly.

    Uses dK/dk = (E - k'^2 K)/(k k'^2) and dE/dk = (E - K)/k.
    """
    out = KEExpr()
    kp2 = ONE_MINUS_K2
    k2 = Poly.monomial(2)
    for (af, _, c, e, f, gf), (b, P) in expr.terms.items():
        base = dict(a=af, b=b, f=f - 2, g=gf)
        # derivative of k^af k'^b P(k): (af P + k P') k'^2 - b k^2 P
        poly_part = ((P * af + P.k_times_deriv()) * kp2 - k2 * P * b) * 2
        out = out + KEExpr.monomial(c=c + 2, e=e, poly=poly_part, **base)
        if c != 0:
            # c K^(c-1) * 2K^2 (E - k'^2 K)
            out = out + KEExpr.monomial(c=c + 1, e=e + 1, poly=P * (2 * c), **base)
            out = out - KEExpr.monomial(c=c + 2, e=e, poly=P * kp2 * (2 * c), **base)
        if e != 0:
            # e E^(e-1) * 2 k'^2 K^2 (E - K)
            out = out + KEExpr.monomial(c=c + 2, e=e, poly=P * kp2 * (2 * e), **base)
            out = out - KEExpr.monomial(c=c + 3, e=e - 1, poly=P * kp2 * (2 * e), **base)
    return out


def theta3_expr() -> KEExpr:
    """theta3 = sqrt(2K/pi)."""
    return KEExpr.monomial(c=Fraction(1, 2), f=Fraction(-1, 2), g=Fraction(1, 2))


def theta_power_sum(b: int) -> KEExpr:
    """sum_n n^(2b) q^(n^2) as the b-fold q d/dq of theta3."""
    if b < 0:
        raise SymbolicError("b must be nonnegative")
    out = theta3_expr()
    for _ in range(b):
        out = q_ddq(out)
    return out


# ----------------------------------------------------------------------
# re-expansion in q


class _Basis:
    """Cached q-series of theta3, theta4, k and E needed for re-expansion."""

    def __init__(self, order: int):
        self.order = order
        pad = order + 4
        self.t3 = theta_qseries(3, pad)
        self.t4 = theta_qseries(4, pad)
        # theta2^2 / 4 = q^(1/2) T^2 with T = sum q^(n(n+1))
        t2 = theta_qseries(2, pad)
        self.t2sq_over4 = (t2 * t2).scale(Fraction(1, 4))
        self.t3sq = self.t3 * self.t3
        self.inv_t3sq = self.t3sq.inverse()
        self._pow_cache = {}

    def pow(self, name: str, r: Fraction) -> QSeries:
        key = (name, r)
        if key not in self._pow_cache:
            base = {"t3sq": self.t3sq, "t4sq": self.t4 * self.t4, "k4": None}[name]
            self._pow_cache[key] = base ** r
        return self._pow_cache[key]

    def E_over_pi(self) -> QSeries:
        """E/pi = theta4^4/(2 theta3^2) + D(theta3^2)/theta3^4."""
        if "E" not in self._pow_cache:
            t4sq = self.t4 * self.t4
            first = (t4sq * t4sq * self.inv_t3sq).scale(Fraction(1, 2))
            second = self.t3sq.D() * self.inv_t3sq * self.inv_t3sq
            self._pow_cache["E"] = first + second
        return self._pow_cache["E"]


_BASES: Dict[int, _Basis] = {}


def _basis(order: int) -> _Basis:
    if order not in _BASES:
        _BASES[order] = _Basis(order)
    return _BASES[order]


def keexpr_to_qseries(expr: KEExpr, order: int) -> QSeries:
    """Exact q-expansion of ``expr`` with k = theta2^2/theta3^2, K = (pi/2) theta3^2.

    Raises `SymbolicError` unless every group has net pi exponent 0 and
    an integral net power of 2, so that the coefficients are rational.
    """
    B = _basis(order)
    total = None
    for a, b, c, e, f, g, P in expr.groups():
        if f + c + e != 0:
            raise SymbolicError("net pi exponent must vanish for a rational expansion")
        # k^a = 4^a q^(a/2) T^(2a) / theta3^(2a); K^c = 2^-c pi^c theta3^(2c)
        two = g - c + 2 * a
        if two.denominator != 1:
            raise SymbolicError("net power of 2 must be integral")
        if P.is_zero():
            continue
        lo = P.low_degree()
        # k^(a+lo) * Q(k) with Q a polynomial: expand k = 4 (theta2^2/4)/theta3^2
        aa = a + lo
        two = two + 2 * lo
        Q = P.shift(-lo).ascending()
        kser = (B.t2sq_over4 * B.inv_t3sq).scale(4)
        ka = (B.t2sq_over4 ** aa if aa != 0 else None)
        ser = B.pow("t3sq", c - aa)
        if ka is not None:
            ser = ser * ka
        if b != 0:
            ser = ser * B.pow("t4sq", b) * B.pow("t3sq", -b)
        if e:
            ser = ser * (B.E_over_pi() ** e)
        # Horner in the k series for Q(k)
        poly_ser = None
        for coeff in reversed(Q):
            poly_ser = QSeries(0, 1, (coeff,), order + 4) if poly_ser is None else poly_ser * kser + coeff
        ser = ser * poly_ser
        ser = ser.scale(Fraction(2) ** int(two))
        total = ser if total is None else total + ser
    if total is None:
        return QSeries(0, 1, (), order)
    return total.truncate(order)
