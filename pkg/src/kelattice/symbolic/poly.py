"""Laurent polynomials in k with exact rational coefficients."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, Mapping

import numpy as np

from ..errors import SymbolicError

__all__ = ["Poly", "ONE_MINUS_K2"]


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class Poly:
    """Sparse Laurent polynomial sum c_j k^j with Fraction coefficients.

    Instances are immutable in practice: every operation returns a new
    object and the coefficient map is never mutated after construction.
    """

    __slots__ = ("_c",)

    def __init__(self, coeffs: Mapping[int, Fraction] | Iterable = ()):
        if isinstance(coeffs, Mapping):
            items = coeffs.items()
        else:
            items = enumerate(coeffs)
        self._c: Dict[int, Fraction] = {int(e): Fraction(v) for e, v in items if v != 0}

    # construction -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        return cls({0: Fraction(c)})

    @classmethod
    def monomial(cls, e: int, c=1) -> "Poly":
        return cls({e: Fraction(c)})

    @classmethod
    def from_ascending(cls, coeffs: Iterable) -> "Poly":
        """Coefficients listed from degree 0 upwards."""
        return cls(list(coeffs))

    # inspection -------------------------------------------------------
    @property
    def coeffs(self) -> Dict[int, Fraction]:
        return dict(self._c)

    def is_zero(self) -> bool:
        return not self._c

    def degree(self) -> int:
        if not self._c:
            raise SymbolicError("degree of the zero polynomial")
        return max(self._c)

    def low_degree(self) -> int:
        if not self._c:
            raise SymbolicError("low degree of the zero polynomial")
        return min(self._c)

    def ascending(self) -> list:
        """Dense coefficient list from degree 0 (requires no negative powers)."""
        if not self._c:
            return []
        if self.low_degree() < 0:
            raise SymbolicError("negative powers present")
        out = [Fraction(0)] * (self.degree() + 1)
        for e, v in self._c.items():
            out[e] = v
        return out

    def is_even(self) -> bool:
        return all(e % 2 == 0 for e in self._c)

    def is_odd(self) -> bool:
        return all(e % 2 == 1 for e in self._c)

    # arithmetic -------------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        out = dict(self._c)
        for e, v in other._c.items():
            out[e] = out.get(e, 0) + v
        return Poly(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({e: -v for e, v in self._c.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) - self

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly({e: v * other for e, v in self._c.items()})
        other = _as_poly(other)
        out: Dict[int, Fraction] = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                out[e1 + e2] = out.get(e1 + e2, 0) + v1 * v2
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise SymbolicError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other) -> bool:
        try:
            return (self - _as_poly(other)).is_zero()
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def shift(self, j: int) -> "Poly":
        """Multiply by k^j."""
        return Poly({e + j: v for e, v in self._c.items()})

    def deriv(self) -> "Poly":
        return Poly({e - 1: v * e for e, v in self._c.items() if e != 0})

    def k_times_deriv(self) -> "Poly":
        """k * d/dk."""
        return Poly({e: v * e for e, v in self._c.items()})

    def subs_k2(self, other: "Poly") -> "Poly":
        """For an even polynomial r(k^2), return r(other)."""
        if not self.is_even():
            raise SymbolicError("subs_k2 needs an even polynomial")
        out = Poly()
        for e, v in self._c.items():
            if e < 0:
                raise SymbolicError("negative powers present")
            out = out + (other ** (e // 2)) * v
        return out

    def value_at(self, x: Fraction) -> Fraction:
        return sum((v * Fraction(x) ** e for e, v in self._c.items()), Fraction(0))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for e, v in self._c.items():
            out = out + float(v) * x ** e
        return out

    # division ---------------------------------------------------------
    def divmod_poly(self, d: "Poly") -> tuple:
        """Ordinary long division (both without negative powers)."""
        num = self.ascending()
        den = d.ascending()
        if not den:
            raise ZeroDivisionError("division by zero polynomial")
        q = [Fraction(0)] * max(len(num) - len(den) + 1, 1)
        num = num[:]
        lead = den[-1]
        for i in range(len(num) - len(den), -1, -1):
            c = num[i + len(den) - 1] / lead
            q[i] = c
            if c:
                for j, dj in enumerate(den):
                    num[i + j] -= c * dj
        return Poly.from_ascending(q), Poly.from_ascending(num)

    def exact_div(self, d: "Poly") -> "Poly":
        """Divide, allowing Laurent shifts; raise if a remainder is left."""
        if self.is_zero():
            return Poly()
        lo_n, lo_d = self.low_degree(), d.low_degree()
        a, b = self.shift(-lo_n), d.shift(-lo_d)
        q, r = a.divmod_poly(b)
        if not r.is_zero():
            raise SymbolicError("polynomial division is not exact")
        return q.shift(lo_n - lo_d)

    def divisible_by_one_minus_k2(self) -> bool:
        if self.is_zero():
            return False
        return self.value_at(Fraction(1)) == 0 and self.value_at(Fraction(-1)) == 0

    # normal forms -----------------------------------------------------
    def primitive(self) -> tuple:
        """(c, P) with self = c * P, P integer-coefficient, content 1, lowest coeff > 0."""
        if self.is_zero():
            return Fraction(0), Poly()
        den = 1
        for v in self._c.values():
            den = _lcm(den, v.denominator)
        ints = [int(v * den) for v in self._c.values()]
        g = 0
        for x in ints:
            g = gcd(g, abs(x))
        c = Fraction(g, den)
        if self._c[self.low_degree()] < 0:
            c = -c
        return c, Poly({e: v / c for e, v in self._c.items()})

    def __repr__(self) -> str:
        if not self._c:
            return "0"
        parts = []
        for e in sorted(self._c):
            v = self._c[e]
            parts.append(f"{v}" if e == 0 else f"{v}*k^{e}")
        return " + ".join(parts)


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly.const(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Poly")


ONE_MINUS_K2 = Poly({0: 1, 2: -1})
