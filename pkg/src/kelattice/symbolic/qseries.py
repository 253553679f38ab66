"""Truncated q-expansions with exact rational coefficients."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Callable, Sequence

import numpy as np

from ..errors import SymbolicError
from ..lseries import bernoulli

__all__ = [
    "QSeries",
    "theta_qseries",
    "eisenstein_qseries",
    "qseries_from_coefficients",
    "divisor_sigma",
]


def _frac_gcd(a: Fraction, b: Fraction) -> Fraction:
    if a == 0:
        return abs(b)
    if b == 0:
        return abs(a)
    num = gcd(a.numerator * b.denominator, b.numerator * a.denominator)
    return Fraction(num, a.denominator * b.denominator)


@dataclass(frozen=True)
class QSeries:
    """sum_j coeffs[j] q^(offset + j*step), exact for exponents < order."""

    offset: Fraction
    step: Fraction
    coeffs: tuple
    order: Fraction

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        object.__setattr__(self, "step", Fraction(self.step))
        object.__setattr__(self, "order", Fraction(self.order))
        if self.step <= 0:
            raise SymbolicError("step must be positive")
        n = self._count(self.order)
        cs = tuple(Fraction(c) for c in self.coeffs[:n])
        cs = cs + (Fraction(0),) * (n - len(cs))
        object.__setattr__(self, "coeffs", cs)

    def _count(self, order: Fraction) -> int:
        """Number of grid points with exponent < order."""
        if order <= self.offset:
            return 0
        span = (order - self.offset) / self.step
        n = span.numerator // span.denominator
        return n if span.denominator == 1 else n + 1

    # inspection -------------------------------------------------------
    def exponents(self):
        return [self.offset + j * self.step for j in range(len(self.coeffs))]

    def coefficient(self, e) -> Fraction:
        e = Fraction(e)
        if e >= self.order:
            raise SymbolicError("coefficient beyond truncation order")
        j = (e - self.offset) / self.step
        if j < 0 or j.denominator != 1:
            return Fraction(0)
        return self.coeffs[int(j)]

    def items(self):
        return [(e, c) for e, c in zip(self.exponents(), self.coeffs) if c != 0]

    def leading(self) -> tuple:
        for e, c in zip(self.exponents(), self.coeffs):
            if c != 0:
                return e, c
        raise SymbolicError("series is zero to its truncation order")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    # regridding -------------------------------------------------------
    def regrid(self, offset: Fraction, step: Fraction, order: Fraction) -> "QSeries":
        """Same series on a finer grid starting at ``offset`` (<= own offset)."""
        out = QSeries(offset, step, (), order)
        cs = list(out.coeffs)
        for e, c in zip(self.exponents(), self.coeffs):
            if e >= order:
                break
            j = (e - offset) / step
            if j.denominator != 1 or j < 0:
                raise SymbolicError("grids are incompatible")
            cs[int(j)] = c
        return QSeries(offset, step, tuple(cs), order)

    def truncate(self, order) -> "QSeries":
        return QSeries(self.offset, self.step, self.coeffs, min(Fraction(order), self.order))

    # arithmetic -------------------------------------------------------
    def _common(self, other: "QSeries"):
        step = _frac_gcd(_frac_gcd(self.step, other.step), self.offset - other.offset)
        offset = min(self.offset, other.offset)
        return offset, step

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries(0, 1, (Fraction(other),), self.order)
        offset, step = self._common(other)
        order = min(self.order, other.order)
        a = self.regrid(offset, step, order)
        b = other.regrid(offset, step, order)
        return QSeries(offset, step, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)), order)

    __radd__ = __add__

    def __neg__(self) -> "QSeries":
        return QSeries(self.offset, self.step, tuple(-c for c in self.coeffs), self.order)

    def __sub__(self, other) -> "QSeries":
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, c) -> "QSeries":
        c = Fraction(c)
        return QSeries(self.offset, self.step, tuple(c * x for x in self.coeffs), self.order)

    def shift(self, e) -> "QSeries":
        """Multiply by q^e."""
        e = Fraction(e)
        return QSeries(self.offset + e, self.step, self.coeffs, self.order + e)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        step = _frac_gcd(self.step, other.step)
        a = self.regrid(self.offset, step, self.order)
        b = other.regrid(other.offset, step, other.order)
        offset = a.offset + b.offset
        order = min(a.order + b.offset, b.order + a.offset)
        out = QSeries(offset, step, (), order)
        n = len(out.coeffs)
        cs = [Fraction(0)] * n
        bnz = [(j, c) for j, c in enumerate(b.coeffs) if c != 0]
        for i, ca in enumerate(a.coeffs):
            if ca == 0 or i >= n:
                continue
            for j, cb in bnz:
                if i + j >= n:
                    break
                cs[i + j] += ca * cb
        return QSeries(offset, step, tuple(cs), order)

    __rmul__ = __mul__

    def __pow__(self, r) -> "QSeries":
        """Rational power; the leading coefficient must have a rational r-th power."""
        r = Fraction(r)
        if r.denominator == 1 and r > 0:
            out = None
            base = self
            n = r.numerator
            while n:
                if n & 1:
                    out = base if out is None else out * base
                n >>= 1
                if n:
                    base = base * base
            return out
        if r == 0:
            return QSeries(0, self.step, (Fraction(1),), self.order - self.offset)
        e0, c0 = self.leading()
        lead = _rational_power(c0, r)
        j0 = int((e0 - self.offset) / self.step)
        g = [c / c0 for c in self.coeffs[j0:]]  # g[0] = 1
        # relative precision: number of known terms after the leading one
        n = len(g)
        f = [Fraction(0)] * n
        f[0] = Fraction(1)
        for m in range(1, n):
            acc = Fraction(0)
            for kk in range(1, m + 1):
                if g[kk]:
                    acc += ((r + 1) * kk - m) * g[kk] * f[m - kk]
            f[m] = acc / m
        rel_order = self.order - e0
        offset = e0 * r
        return QSeries(offset, self.step, tuple(lead * x for x in f), offset + rel_order)

    def inverse(self) -> "QSeries":
        return self ** -1

    def D(self) -> "QSeries":
        """q d/dq."""
        return QSeries(self.offset, self.step,
                       tuple(c * e for c, e in zip(self.coeffs, self.exponents())), self.order)

    def evaluate(self, q):
        """Numeric value at 0 < q < 1 (truncated sum)."""
        q = np.asarray(q, dtype=float)
        out = np.zeros_like(q)
        logq = np.log(q)
        for e, c in self.items():
            out = out + float(c) * np.exp(float(e) * logq)
        return out

    def equals(self, other: "QSeries", order=None) -> bool:
        diff = self - other
        if order is not None:
            if Fraction(order) > diff.order:
                raise SymbolicError("comparison order exceeds truncation")
            diff = diff.truncate(order)
        return diff.is_zero()


def _rational_power(c: Fraction, r: Fraction) -> Fraction:
    if c == 1:
        return Fraction(1)
    if r.denominator == 1:
        return c ** r.numerator
    if c < 0:
        raise SymbolicError("rational power of a negative leading coefficient")
    d = r.denominator

    def root(x: int):
        y = round(x ** (1.0 / d))
        for cand in (y - 1, y, y + 1):
            if cand >= 0 and cand ** d == x:
                return cand
        return None

    a, b = root(c.numerator), root(c.denominator)
    if a is None or b is None:
        raise SymbolicError(f"{c}^{r} is not rational")
    return Fraction(a, b) ** r.numerator


def qseries_from_coefficients(fn: Callable[[int], Fraction], order: int, offset=0, step=1) -> QSeries:
    """Series sum_j fn(j) q^(offset + j*step) truncated at ``order``."""
    tmp = QSeries(offset, step, (), order)
    return QSeries(offset, step, tuple(Fraction(fn(j)) for j in range(len(tmp.coeffs))), order)


def theta_qseries(i: int, order: int) -> QSeries:
    """Exact expansion of theta_i(q), i in {2, 3, 4}, for exponents < order."""
    if i not in (2, 3, 4):
        raise SymbolicError("theta index must be 2, 3 or 4")
    if order < 1:
        raise SymbolicError("order must be at least 1")
    if i == 2:
        # 2 sum_{n>=0} q^((n+1/2)^2) = 2 q^(1/4) sum q^(n(n+1))
        def c(j):
            # exponent 1/4 + j; j = n(n+1)
            n = (isqrt(4 * j + 1) - 1) // 2
            return 2 if n * (n + 1) == j else 0
        return qseries_from_coefficients(c, order, Fraction(1, 4), 1)
    sign = -1 if i == 4 else 1

    def c(j):
        if j == 0:
            return 1
        n = isqrt(j)
        return 2 * sign ** n if n * n == j else 0

    return qseries_from_coefficients(c, order)


def divisor_sigma(k: int, n: int) -> int:
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def eisenstein_qseries(weight: int, order: int) -> QSeries:
    """E_w(q) = 1 - (2w/B_w) sum_m sigma_{w-1}(m) q^m, exact to ``order``."""
    if weight < 4 or weight % 2:
        raise SymbolicError("Eisenstein weight must be even and at least 4")
    c = -Fraction(2 * weight) / bernoulli(weight)
    sig = [0] * order
    for d in range(1, order):
        p = d ** (weight - 1)
        for mult in range(d, order, d):
            sig[mult] += p
    return qseries_from_coefficients(lambda m: 1 if m == 0 else c * sig[m], order)
