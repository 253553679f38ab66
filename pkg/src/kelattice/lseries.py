"""Dirichlet series with real periodic coefficients.

Covers the Riemann zeta function, the alternating and odd-term variants
eta and lambda, the Dirichlet beta function and the real primitive
characters of conductor 3, 8, 12 and 24. Values are available for every
real s (except the pole of zeta and lambda at s = 1) and exactly at the
nonpositive integers.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .errors import NonCancellingError, PoleError
from .specfun import gamma_fn

__all__ = [
    "CharacterId",
    "SeriesKind",
    "SeriesValue",
    "ZETA",
    "ETA",
    "LAMBDA",
    "BETA",
    "L_M3",
    "L_M8",
    "L_8",
    "L_12",
    "L_M24",
    "L_24",
    "CHARACTERS",
    "character",
    "lseries_eval",
    "lvalue",
    "lseries_exact_nonpositive",
    "bernoulli",
    "bernoulli_poly",
    "regularized_product",
    "regularized_limit",
    "cvz_alternating",
]


@dataclass(frozen=True)
class CharacterId:
    """A real periodic coefficient sequence a(n), n >= 1.

    Attributes
    ----------
    label : str
        One of ZETA, ETA, LAMBDA, BETA, L-3, L-8, L8, L12, L-24, L24.
    period : int
        Period of the coefficients.
    sign_pattern : tuple of int
        Coefficients a(1), ..., a(period).
    """

    label: str
    period: int
    sign_pattern: tuple

    def coefficient(self, n: int) -> int:
        return self.sign_pattern[(n - 1) % self.period]

    @property
    def principal_like(self) -> bool:
        """True for zeta and its eta/lambda variants (no Dirichlet character)."""
        return self.label in ("ZETA", "ETA", "LAMBDA")

    @property
    def parity(self) -> int:
        """0 for even characters, 1 for odd ones (a(period-1) = -1)."""
        return 0 if self.coefficient(self.period - 1) == 1 else 1


def _kronecker(d: int, n: int) -> int:
    """Kronecker symbol (d/n) for n >= 1."""
    if math.gcd(d, n) != 1:
        return 0
    result = 1
    while n % 2 == 0:
        n //= 2
        if d % 8 in (3, 5):
            result = -result
    a = d % n if n > 1 else 0
    m = n
    # Jacobi symbol (a/m) for odd m
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def _from_discriminant(label: str, d: int) -> CharacterId:
    f = abs(d)
    return CharacterId(label, f, tuple(_kronecker(d, n) for n in range(1, f + 1)))


ZETA = CharacterId("ZETA", 1, (1,))
ETA = CharacterId("ETA", 2, (1, -1))
LAMBDA = CharacterId("LAMBDA", 2, (1, 0))
BETA = _from_discriminant("BETA", -4)
L_M3 = _from_discriminant("L-3", -3)
L_M8 = _from_discriminant("L-8", -8)
L_8 = _from_discriminant("L8", 8)
L_12 = _from_discriminant("L12", 12)
L_M24 = _from_discriminant("L-24", -24)
L_24 = _from_discriminant("L24", 24)

CHARACTERS = {c.label: c for c in (ZETA, ETA, LAMBDA, BETA, L_M3, L_M8, L_8, L_12, L_M24, L_24)}


def character(label: str) -> CharacterId:
    """Look up a character by label (case-insensitive, '-' or 'M' for minus)."""
    key = label.upper().replace("LM", "L-").replace("_", "")
    aliases = {"G": "BETA", "CATALAN": "BETA"}
    key = aliases.get(key, key)
    if key not in CHARACTERS:
        raise KeyError(f"unknown character {label!r}")
    return CHARACTERS[key]


class SeriesKind(enum.Enum):
    FINITE = "FINITE"
    POLE = "POLE"
    REGULARIZED_LIMIT = "REGULARIZED_LIMIT"


@dataclass(frozen=True)
class SeriesValue:
    value: float
    kind: SeriesKind


# ----------------------------------------------------------------------
# Bernoulli numbers and polynomials (exact, cached, immutable)


@lru_cache(maxsize=None)
def _bernoulli_table(nmax: int) -> tuple:
    B = [Fraction(0)] * (nmax + 1)
    B[0] = Fraction(1)
    for m in range(1, nmax + 1):
        B[m] = -sum(math.comb(m + 1, j) * B[j] for j in range(m)) / Fraction(m + 1)
    return tuple(B)


def bernoulli(n: int) -> Fraction:
    """Bernoulli number B_n with B_1 = -1/2."""
    return _bernoulli_table(max(n, 32))[n]


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """Bernoulli polynomial B_n(x) for rational x."""
    x = Fraction(x)
    return sum(math.comb(n, j) * bernoulli(j) * x ** (n - j) for j in range(n + 1))


def lseries_exact_nonpositive(ch: CharacterId, s: int) -> Fraction:
    """Exact L(s) at an integer s <= 0 via generalized Bernoulli numbers.

    L(1-n) = -f^(n-1)/n * sum_a a(a) B_n(a/f) for a periodic character of
    period f; eta and lambda are reduced to zeta first.
    """
    if s > 0 or int(s) != s:
        raise ValueError("exact values are provided only at integers s <= 0")
    s = int(s)
    n = 1 - s
    if ch.label == "ETA":
        return (1 - Fraction(2) ** (1 - s)) * lseries_exact_nonpositive(ZETA, s)
    if ch.label == "LAMBDA":
        return (1 - Fraction(2) ** (-s)) * lseries_exact_nonpositive(ZETA, s)
    f = ch.period
    total = sum(ch.coefficient(a) * bernoulli_poly(n, Fraction(a, f)) for a in range(1, f + 1))
    return -Fraction(f) ** (n - 1) * total / n


# ----------------------------------------------------------------------
# Numeric evaluation

_EM_N = 32
_EM_M = 8


@lru_cache(maxsize=None)
def _em_coeffs() -> tuple:
    return tuple(float(bernoulli(2 * j)) / math.factorial(2 * j) for j in range(1, _EM_M + 1))


def _phi(z: float) -> float:
    """expm1(z)/z with the removable point handled."""
    return 1.0 if z == 0 else math.expm1(z) / z


def _hurwitz_parts(s: float, x: float) -> tuple:
    """Euler-Maclaurin pieces of zeta(s, x) without the X^(1-s)/(s-1) term.

    Returns ``(body, X)`` with zeta(s, x) = body + X^(1-s)/(s-1).
    """
    body = math.fsum((n + x) ** (-s) for n in range(_EM_N))
    X = _EM_N + x
    body += 0.5 * X ** (-s)
    rising = s  # (s)_{2j-1}
    xpow = X ** (-s - 1)
    corr = 0.0
    for j, c in enumerate(_em_coeffs(), start=1):
        corr += c * rising * xpow
        rising *= (s + 2 * j - 1) * (s + 2 * j)
        xpow /= X * X
    return body + corr, X


def _zeta_direct(s: float, sm1: float | None = None) -> float:
    """zeta(s) for s >= 1/2; ``sm1`` is s - 1 when known more accurately."""
    sm1 = s - 1.0 if sm1 is None else sm1
    body, X = _hurwitz_parts(s, 1.0)
    return body + X ** (-sm1) / sm1


def _character_direct(ch: CharacterId, s: float) -> float:
    """L(s, chi) for a non-principal character and s >= 1/2 (Hurwitz form)."""
    f = ch.period
    total = []
    for a in range(1, f + 1):
        c = ch.coefficient(a)
        if c == 0:
            continue
        body, X = _hurwitz_parts(s, a / f)
        # X^(1-s)/(s-1) summed with coefficients adding to zero stays finite
        lx = math.log(X)
        smooth = -lx * _phi((1.0 - s) * lx)
        total.append(c * (body + smooth))
    return f ** (-s) * math.fsum(total)


def cvz_alternating(a: Callable[[int], float], n: int = 40) -> float:
    """Cohen-Villegas-Zagier acceleration of sum_{k>=0} (-1)^k a(k)."""
    d = (3.0 + math.sqrt(8.0)) ** n
    d = 0.5 * (d + 1.0 / d)
    b = -1.0
    c = -d
    total = 0.0
    for k in range(n):
        c = b - c
        total += c * a(k)
        b = (k + n) * (k - n) * b / ((k + 0.5) * (k + 1.0))
    return total / d


def _beta_cvz(s: float) -> float:
    return cvz_alternating(lambda k: (2 * k + 1.0) ** (-s))


def _reflect(ch: CharacterId, s: float) -> float:
    """L(s) from L(1-s) by the functional equation of a real primitive
    character (root number 1): Lambda(s) = (f/pi)^((s+a)/2) Gamma((s+a)/2) L(s)."""
    f = ch.period
    a = 0 if ch.label == "ZETA" else ch.parity
    x_num = (1.0 - s + a) / 2.0
    x_den = (s + a) / 2.0
    if x_den <= 0 and x_den == math.floor(x_den):
        return 0.0
    ratio = gamma_fn(x_num) / gamma_fn(x_den)
    if ch.label == "ZETA":
        # keep the pole offset -s exact instead of rounding 1 - s first
        mirror = _zeta_direct(1.0 - s, -s)
    else:
        mirror = _eval_float(ch, 1.0 - s)
    return (f / math.pi) ** (0.5 - s) * ratio * mirror


def _eval_float(ch: CharacterId, s: float) -> float:
    if ch.label == "ZETA":
        if s == 1.0:
            raise PoleError("zeta has a pole at s = 1")
        if s >= 0.5:
            return _zeta_direct(s)
        if s == math.floor(s):
            return float(lseries_exact_nonpositive(ZETA, int(s)))
        return _reflect(ZETA, s)
    if ch.label == "LAMBDA":
        if s == 1.0:
            raise PoleError("lambda has a pole at s = 1")
        return -math.expm1(-s * math.log(2.0)) * _eval_float(ZETA, s)
    if ch.label == "ETA":
        if s == 1.0:
            return math.log(2.0)
        return -math.expm1((1.0 - s) * math.log(2.0)) * _eval_float(ZETA, s)
    if s <= 0 and s == math.floor(s):
        return float(lseries_exact_nonpositive(ch, int(s)))
    if s >= 0.5:
        if ch.label == "BETA":
            return _beta_cvz(s)
        return _character_direct(ch, s)
    return _reflect(ch, s)


def lseries_eval(ch: CharacterId, s: float) -> SeriesValue:
    """Evaluate the series of ``ch`` at real ``s``.

    Parameters
    ----------
    ch : CharacterId
    s : float

    Returns
    -------
    SeriesValue
        ``kind`` is POLE (with value ``inf``) only for zeta and lambda at
        s = 1; otherwise FINITE.

    Notes
    -----
    For s >= 1/2 the Hurwitz-zeta Euler-Maclaurin formula (32 terms, 8
    corrections) is used; beta uses Cohen-Villegas-Zagier acceleration.
    For s < 1/2 the functional equation maps to 1 - s. Nonpositive
    integers use exact generalized Bernoulli numbers.
    """
    s = float(s)
    if s == 1.0 and ch.label in ("ZETA", "LAMBDA"):
        return SeriesValue(math.inf, SeriesKind.POLE)
    return SeriesValue(_eval_float(ch, s), SeriesKind.FINITE)


def lvalue(ch, s: float) -> float:
    """Float value of L(s) for a character or label; raises at poles."""
    if isinstance(ch, str):
        ch = character(ch)
    return _eval_float(ch, float(s))


# ----------------------------------------------------------------------
# Regularized limits

_EPS = (1e-4, 1e-5)


def regularized_limit(func: Callable[[float], float], s0: float, eps: Sequence[float] = _EPS) -> float:
    """Limit of ``func`` at ``s0`` where a simple pole meets a simple zero.

    The function is sampled at s0 +- eps for two step sizes, the symmetric
    averages are formed and combined by Richardson extrapolation in eps^2.

    Raises
    ------
    NonCancellingError
        If the odd part of the samples grows as eps shrinks (a genuine pole).
    """
    e1, e2 = eps
    p1, m1 = func(s0 + e1), func(s0 - e1)
    p2, m2 = func(s0 + e2), func(s0 - e2)
    avg1, avg2 = 0.5 * (p1 + m1), 0.5 * (p2 + m2)
    odd1, odd2 = 0.5 * abs(p1 - m1), 0.5 * abs(p2 - m2)
    scale = max(abs(avg2), 1e-300)
    if odd2 > 1e-6 * scale and odd2 > 0.5 * odd1:
        raise NonCancellingError(f"limit at s0={s0} does not exist (odd part {odd2:.3g})")
    r = (e1 / e2) ** 2
    return (r * avg2 - avg1) / (r - 1.0)


def _factor_value(ch: CharacterId, s: float) -> float:
    return _eval_float(ch, s)


def regularized_product(factors: Iterable, s0: float) -> float:
    """Product of L-series factors at ``s0``, regularized when needed.

    Parameters
    ----------
    factors : iterable of (CharacterId, shift)
        Each factor is L(s + shift).
    s0 : float

    Returns
    -------
    float
        The ordinary product when no factor sits on a pole, otherwise the
        limit s -> s0 computed by `regularized_limit`.
    """
    factors = [(character(c) if isinstance(c, str) else c, float(sh)) for c, sh in factors]

    def prod(s):
        v = 1.0
        for ch, sh in factors:
            v *= _factor_value(ch, s + sh)
        return v

    singular = any(ch.label in ("ZETA", "LAMBDA") and s0 + sh == 1.0 for ch, sh in factors)
    if not singular:
        return prod(s0)
    return regularized_limit(prod, s0)

