"""Double-exponential quadrature and integrals of complete elliptic integrals.

The tanh-sinh rule on (0, 1) is evaluated in log space: every abscissa
carries log x and log(1 - x) computed from the transformed variable, so
nodes far below the smallest positive double still contribute. This lets
integrands with logarithmic endpoint decay (K'^delta near k = 0, K^gamma
near k = 1) be integrated to 1e-10 without any manual change of variable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import ConvergenceError, IntegrabilityError
from .specfun import elliptic_values, gamma_fn

__all__ = [
    "QuadResult",
    "Nodes01",
    "KNodes",
    "FACTORS",
    "KIntegralSpec",
    "integrate_01",
    "integrate_01_log",
    "integrate_semi_infinite",
    "mellin_transform",
    "integrate_k",
    "k_integral",
    "k_integral_detail",
    "check_integrability",
    "mirror_spec",
]

ROUNDOFF = 64 * 2.0 ** -52
MAX_LEVEL = 12
MIN_LEVEL = 3
T_MAX = 100.0
_CUT = math.log(1e-20)
_LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class QuadResult:
    """Quadrature value with its error estimate and bookkeeping."""

    value: float
    error: float
    level: int
    nodes: int


class LogVal:
    """A logarithm split as ``big * M + small`` at each node.

    ``M = |u|`` is the transformed-variable magnitude, which can reach
    1e43. Keeping its coefficient separate lets k'^-2 against dk ~ k'^2
    cancel exactly instead of losing every digit in the sum.
    """

    __slots__ = ("big", "small")

    def __init__(self, big, small):
        self.big = big
        self.small = small

    def __add__(self, other):
        if isinstance(other, LogVal):
            return LogVal(self.big + other.big, self.small + other.small)
        return LogVal(self.big, self.small + other)

    __radd__ = __add__

    def __neg__(self):
        return LogVal(-self.big, -self.small)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        return LogVal(c * self.big, c * self.small)

    __rmul__ = __mul__

    def resolve(self, M):
        big = np.where(np.abs(self.big) < 1e-12, 0.0, self.big)
        with np.errstate(invalid="ignore"):
            return np.where(big == 0, self.small, big * M + self.small)


@dataclass(frozen=True)
class Nodes01:
    """Tanh-sinh abscissae in (0, 1) with exact complements and logs.

    ``lx`` and ``lxc`` are the `LogVal` forms of ``logx`` and ``logxc``.
    """

    x: np.ndarray
    xc: np.ndarray
    logx: np.ndarray
    logxc: np.ndarray
    M: np.ndarray = None
    lx: LogVal = None
    lxc: LogVal = None


def _nodes(t: np.ndarray):
    u = math.pi * np.sinh(t)
    M = np.abs(u)
    r = -np.log1p(np.exp(-M))
    near1 = (u >= 0).astype(float)
    lx = LogVal(-(1.0 - near1), r)
    lxc = LogVal(-near1, r)
    logx = lx.resolve(M)
    logxc = lxc.resolve(M)
    with np.errstate(under="ignore"):
        x = np.exp(logx)
        xc = np.exp(logxc)
    lw = lx + lxc + (_LOG_PI + np.log(np.cosh(t)))
    return Nodes01(x, xc, logx, logxc, M, lx, lxc), lw


def _terms(logf, t):
    nodes, lw = _nodes(t)
    la, sg = logf(nodes)
    sg = np.asarray(sg, dtype=float)
    with np.errstate(invalid="ignore"):
        if isinstance(la, LogVal):
            lt = (la + lw).resolve(nodes.M)
        else:
            lt = np.asarray(la, dtype=float) + lw.resolve(nodes.M)
    bad = np.isnan(lt) | (sg == 0) | np.isnan(sg)
    lt = np.where(bad, -np.inf, lt)
    if np.any(np.isposinf(lt)):
        raise ConvergenceError("integrand overflows at a quadrature node")
    return lt, np.where(bad, 0.0, sg)


def _extent(logf, h0: float, direction: int):
    """Walk outwards on the coarse grid until terms are negligible."""
    lts, sgs, ts = [], [], []
    peak = -np.inf
    below = 0
    j = 1
    chunk = 16
    while True:
        tj = direction * h0 * np.arange(j, j + chunk)
        lt, sg = _terms(logf, tj)
        for a, b, c in zip(lt, sg, tj):
            lts.append(a)
            sgs.append(b)
            ts.append(c)
            peak = max(peak, a)
            if abs(c) >= 4.0 and a < peak + _CUT:
                below += 1
            else:
                below = 0
            if below >= 3 or abs(c) >= T_MAX:
                tail = 0.0
                if np.isfinite(a) and len(lts) >= 2 and np.isfinite(lts[-2]) and lts[-2] > a:
                    rate = lts[-2] - a
                    tail = math.exp(a) / math.expm1(rate) if rate < 700 else 0.0
                return np.array(ts), np.array(lts), np.array(sgs), abs(c), tail
        j += chunk


def integrate_01_log(
    logf: Callable[[Nodes01], tuple],
    tol: float = 1e-12,
    atol: float = 0.0,
    max_level: int = MAX_LEVEL,
) -> QuadResult:
    """Tanh-sinh quadrature on (0, 1) of an integrand given in log form.

    Parameters
    ----------
    logf : callable
        ``logf(nodes) -> (log_abs, sign)`` with ``nodes`` a `Nodes01`.
    tol : float
        Relative tolerance on the level-to-level change.
    atol : float
        Absolute tolerance floor.
    max_level : int
        Finest level; the step at level l is 2^(-l).

    Returns
    -------
    QuadResult

    Raises
    ------
    ConvergenceError
        With the last two level sums attached when the tolerance is missed.
    """
    h0 = 1.0
    lt0, sg0 = _terms(logf, np.array([0.0]))
    tr, ltr, sgr, right, tail_r = _extent(logf, h0, +1)
    tl, ltl, sgl, left, tail_l = _extent(logf, h0, -1)
    first = np.concatenate([lt0, ltr, ltl])
    raw = math.fsum(np.concatenate([sg0 * np.exp(lt0), sgr * np.exp(ltr), sgl * np.exp(ltl)]))
    # running sum of |f| terms: when the integrand cancels, level sums
    # cannot agree better than rounding relative to this
    raw_abs = math.fsum(np.exp(first))
    count = 1 + len(tr) + len(tl)
    prev = raw * h0
    tail = tail_r + tail_l
    for level in range(1, max_level + 1):
        h = h0 / 2 ** level
        n_right = int(right / h)
        n_left = int(left / h)
        odd = np.arange(-n_left + (1 - n_left % 2 if n_left % 2 == 0 else 0), n_right + 1)
        odd = odd[odd % 2 != 0]
        t = odd * h
        lt, sg = _terms(logf, t)
        raw += math.fsum(sg * np.exp(lt))
        raw_abs += math.fsum(np.exp(lt))
        count += len(t)
        cur = raw * h
        err = abs(cur - prev) + tail
        if level >= MIN_LEVEL and err <= max(tol * abs(cur), atol, ROUNDOFF * raw_abs * h):
            return QuadResult(cur, err, level, count)
        prev = cur
    raise ConvergenceError(f"tanh-sinh did not converge to {tol:g} by level {max_level}", (prev, cur))


def integrate_01(f: Callable, tol: float = 1e-12, atol: float = 0.0) -> QuadResult:
    """Tanh-sinh quadrature of a vectorized ``f(x)`` on (0, 1).

    ``f`` may also accept ``(x, xc)`` where ``xc = 1 - x`` is exact; the
    second form is used when ``f`` takes two positional arguments.
    """
    try:
        nargs = f.__code__.co_argcount
    except AttributeError:
        nargs = 1

    def logf(nodes: Nodes01):
        # nodes whose abscissa underflowed carry no information
        ok = (nodes.x > 0) & (nodes.xc > 0)
        v = np.zeros_like(nodes.x)
        with np.errstate(all="ignore"):
            if np.any(ok):
                x, xc = nodes.x[ok], nodes.xc[ok]
                v[ok] = f(x, xc) if nargs >= 2 else f(x)
            return np.log(np.abs(v)), np.sign(v)

    return integrate_01_log(logf, tol, atol)


def integrate_semi_infinite(f: Callable, a: float = 1.0, tol: float = 1e-12, atol: float = 0.0) -> QuadResult:
    """Exp-sinh quadrature of ``f`` on (a, infinity): t = a + exp(pi/2 sinh tau)."""

    def terms(tau):
        g = 0.5 * math.pi * np.sinh(tau)
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            t = a + np.exp(g)
            w = 0.5 * math.pi * np.cosh(tau) * np.exp(g)
            v = np.asarray(f(t), dtype=float) * w
        return np.where(np.isfinite(v), v, 0.0)

    h0 = 0.5
    k = np.arange(-int(6 / h0), int(6 / h0) + 1)
    raw = math.fsum(terms(k * h0))
    prev = raw * h0
    for level in range(1, MAX_LEVEL + 1):
        h = h0 / 2 ** level
        n = int(6 / h)
        odd = np.arange(-n + 1, n, 2)
        raw += math.fsum(terms(odd * h))
        cur = raw * h
        err = abs(cur - prev)
        if level >= MIN_LEVEL and err <= max(tol * abs(cur), atol):
            return QuadResult(cur, err, level, 0)
        prev = cur
    raise ConvergenceError("exp-sinh did not converge", (prev, cur))


def mellin_transform(f: Callable, s: float, tol: float = 1e-12, log_f: Optional[Callable] = None) -> float:
    """Normalized Mellin transform (1/Gamma(s)) * int_0^inf f(t) t^(s-1) dt.

    The range is split at t = 1: tanh-sinh on (0, 1) and exp-sinh on
    (1, infinity). ``f`` must be vectorized. When ``f`` overflows near
    t = 0, pass ``log_f(t) -> (log|f|, sign)`` for use on (0, 1).
    """
    if s <= 0:
        raise ValueError("mellin_transform requires s > 0")

    def inner(x):
        with np.errstate(all="ignore"):
            return np.asarray(f(x), dtype=float) * x ** (s - 1.0)

    if log_f is None:
        lo = integrate_01(inner, tol)
    else:
        def logf(nodes: Nodes01):
            ok = nodes.x > 0
            la = np.full_like(nodes.x, -np.inf)
            sg = np.zeros_like(nodes.x)
            if np.any(ok):
                a, b = log_f(nodes.x[ok])
                la[ok] = a + (s - 1.0) * nodes.logx[ok]
                sg[ok] = b
            return la, sg

        lo = integrate_01_log(logf, tol)
    hi = integrate_semi_infinite(inner, 1.0, tol)
    return (lo.value + hi.value) / gamma_fn(s)


# ----------------------------------------------------------------------
# Integrals in the modulus


@dataclass(frozen=True)
class KNodes:
    """Values available to an integrand at quadrature nodes in k."""

    k: np.ndarray
    kp: np.ndarray
    logk: np.ndarray
    logkp: np.ndarray
    K: np.ndarray
    Kp: np.ndarray
    E: np.ndarray
    Ep: np.ndarray
    lk: LogVal = None
    lkp: LogVal = None


def _knodes(nodes: Nodes01) -> KNodes:
    k = nodes.x
    # log k' = (log(1-k) + log(1+k)) / 2 with 1 - k exact
    if nodes.lx is not None:
        lk = nodes.lx
        lkp = 0.5 * (nodes.lxc + np.log1p(k))
        logk, logkp = lk.resolve(nodes.M), lkp.resolve(nodes.M)
    else:
        logk = nodes.logx
        logkp = 0.5 * (nodes.logxc + np.log1p(k))
        lk, lkp = LogVal(0.0, logk), LogVal(0.0, logkp)
    with np.errstate(under="ignore"):
        kp = np.exp(logkp)
    v = elliptic_values(k, kp, logk, logkp)
    return KNodes(k, kp, logk, logkp, v.K, v.Kp, v.E, v.Ep, lk, lkp)


@dataclass(frozen=True)
class FactorInfo:
    """A named non-monomial factor with its endpoint orders.

    ``orders`` is (k power at 0, log power at 0, k' power at 1, log power
    at 1); the log power counts powers of K' near 0 and of K near 1.
    """

    name: str
    log_abs_sign: Callable[[KNodes], tuple]
    orders: tuple


def _pos(v):
    return np.log(v), np.ones_like(v)


def _signed(v):
    with np.errstate(divide="ignore"):
        return np.log(np.abs(v)), np.sign(v)


def _sqrt_half_one_plus_kp(n: KNodes):
    return np.sqrt(0.5 * (1.0 + n.kp))


def _two_Kp_minus_pi(n: KNodes):
    """2K' - pi, by the hypergeometric series when k' is small."""
    x2 = n.kp ** 2
    small = n.kp < 0.25
    term = np.ones_like(x2)
    acc = np.zeros_like(x2)
    for j in range(1, 40):
        term = term * ((j - 0.5) / j) ** 2 * x2
        acc = acc + term
    return np.where(small, math.pi * acc, 2.0 * n.Kp - math.pi)


FACTORS = {
    "one_minus_kp": FactorInfo(
        "one_minus_kp", lambda n: (2 * n.lk - np.log1p(n.kp), np.ones_like(n.k)), (2, 0, 0, 0)),
    "one_plus_kp": FactorInfo("one_plus_kp", lambda n: _pos(1.0 + n.kp), (0, 0, 0, 0)),
    "one_minus_k": FactorInfo(
        "one_minus_k", lambda n: (2 * n.lkp - np.log1p(n.k), np.ones_like(n.k)), (0, 0, 2, 0)),
    "one_plus_k": FactorInfo("one_plus_k", lambda n: _pos(1.0 + n.k), (0, 0, 0, 0)),
    "one_minus_kp3": FactorInfo(
        "one_minus_kp3",
        lambda n: (2 * n.lk - np.log1p(n.kp) + np.log(1.0 + n.kp + n.kp ** 2), np.ones_like(n.k)),
        (2, 0, 0, 0)),
    "half_one_minus_kp": FactorInfo(
        "half_one_minus_kp",
        lambda n: (2 * n.lk - np.log1p(n.kp) - math.log(2.0), np.ones_like(n.k)), (2, 0, 0, 0)),
    "one_minus_sqrt_half_one_plus_kp": FactorInfo(
        "one_minus_sqrt_half_one_plus_kp",
        lambda n: (2 * n.lk - np.log1p(n.kp) - math.log(2.0) - np.log1p(_sqrt_half_one_plus_kp(n)),
                   np.ones_like(n.k)),
        (2, 0, 0, 0)),
    "two_Kp_minus_pi": FactorInfo("two_Kp_minus_pi", lambda n: _pos(_two_Kp_minus_pi(n)), (0, 1, 2, 0)),
    "E": FactorInfo("E", lambda n: _pos(n.E), (0, 0, 0, 0)),
    "Ep": FactorInfo("Ep", lambda n: _pos(n.Ep), (0, 0, 0, 0)),
    "two_E_minus_K": FactorInfo("two_E_minus_K", lambda n: _signed(2 * n.E - n.K), (0, 0, 0, 1)),
    "three_E_minus_two_K": FactorInfo(
        "three_E_minus_two_K", lambda n: _signed(3 * n.E - 2 * n.K), (0, 0, 0, 1)),
    "two_Ep2_minus_k2Kp2": FactorInfo(
        "two_Ep2_minus_k2Kp2", lambda n: _signed(2 * n.Ep ** 2 - (n.k * n.Kp) ** 2), (0, 0, 0, 0)),
}


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 9)
    return Fraction(x)


@dataclass(frozen=True)
class KIntegralSpec:
    """int_0^1 prefactor * poly(k) * prod(factors) * k^alpha k'^beta K^gamma K'^delta dk.

    Attributes
    ----------
    alpha, beta : Fraction
        Exponents of k and k'.
    gamma_K, delta_Kp : float
        Exponents of K and K' (may depend on s in callers).
    poly : tuple of Fraction, optional
        Coefficients of a polynomial in k, lowest degree first.
    factors : tuple of (str, Fraction)
        Named factors from `FACTORS` with their powers.
    prefactor : float or object with ``evaluate()``
        Constant multiplying the integral.
    """

    alpha: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)
    gamma_K: float = 0.0
    delta_Kp: float = 0.0
    poly: Optional[tuple] = None
    factors: tuple = ()
    prefactor: object = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _frac(self.alpha))
        object.__setattr__(self, "beta", _frac(self.beta))
        object.__setattr__(self, "gamma_K", float(self.gamma_K))
        object.__setattr__(self, "delta_Kp", float(self.delta_Kp))
        if self.poly is not None:
            object.__setattr__(self, "poly", tuple(Fraction(c) for c in self.poly))
        object.__setattr__(self, "factors", tuple((str(n), _frac(p)) for n, p in self.factors))
        for name, _ in self.factors:
            if name not in FACTORS:
                raise ValueError(f"unknown factor {name!r}")

    def prefactor_value(self) -> float:
        p = self.prefactor
        if hasattr(p, "evaluate"):
            return float(p.evaluate())
        return float(p)

    def endpoint_orders(self) -> tuple:
        """Effective (alpha, log power at 0, beta, log power at 1)."""
        a, d = float(self.alpha), self.delta_Kp
        b, g = float(self.beta), self.gamma_K
        if self.poly:
            low = next((i for i, c in enumerate(self.poly) if c != 0), None)
            if low is None:
                return (math.inf, 0.0, math.inf, 0.0)
            a += low
            b += 2 * _root_multiplicity_at_one(self.poly)
        for name, p in self.factors:
            o = FACTORS[name].orders
            a += float(p) * o[0]
            d += float(p) * o[1]
            b += float(p) * o[2]
            g += float(p) * o[3]
        return a, d, b, g


def _root_multiplicity_at_one(coeffs) -> int:
    c = [Fraction(x) for x in coeffs]
    m = 0
    while len(c) > 1 and sum(c) == 0:
        # synthetic division by (k - 1)
        out = [Fraction(0)] * (len(c) - 1)
        acc = Fraction(0)
        for i in range(len(c) - 1, 0, -1):
            acc = acc + c[i]
            out[i - 1] = acc
        c = out
        m += 1
    return m


def check_integrability(spec: KIntegralSpec) -> None:
    """Raise `IntegrabilityError` unless the integrand is integrable on (0, 1).

    Near k = 0: k^a (log 1/k)^d needs a > -1, or a = -1 with d < -1.
    Near k = 1: dk ~ k' dk', so k'^b K^g needs b > -2, or b = -2 with g < -1.
    """
    a, d, b, g = spec.endpoint_orders()
    eps = 1e-12
    ok0 = a > -1 + eps or (abs(a + 1) <= eps and d < -1 - eps)
    ok1 = b > -2 + eps or (abs(b + 2) <= eps and g < -1 - eps)
    if not ok0:
        raise IntegrabilityError(f"not integrable at k=0: k^{a:g} K'^{d:g}")
    if not ok1:
        raise IntegrabilityError(f"not integrable at k=1: k'^{b:g} K^{g:g}")


def _spec_logf(spec: KIntegralSpec):
    alpha, beta = float(spec.alpha), float(spec.beta)
    gam, dlt = spec.gamma_K, spec.delta_Kp
    poly = [float(c) for c in spec.poly] if spec.poly else None
    facs = [(FACTORS[n].log_abs_sign, float(p), p) for n, p in spec.factors]

    def logf(nodes: Nodes01):
        kn = _knodes(nodes)
        with np.errstate(divide="ignore", invalid="ignore"):
            la = alpha * kn.lk + beta * kn.lkp
            if gam:
                la = la + gam * np.log(kn.K)
            if dlt:
                la = la + dlt * np.log(kn.Kp)
            sg = np.ones_like(kn.k)
            if poly is not None:
                pv = np.polynomial.polynomial.polyval(kn.k, poly)
                la = la + np.log(np.abs(pv))
                sg = sg * np.sign(pv)
            for fn, p, pf in facs:
                fa, fs = fn(kn)
                la = la + p * fa
                if pf.denominator == 1:
                    sg = sg * fs ** int(pf)
                elif np.any(fs < 0):
                    sg = np.where(fs < 0, np.nan, sg)
        return la, sg

    return logf


def k_integral_detail(spec: KIntegralSpec, tol: float = 1e-12) -> QuadResult:
    """Like `k_integral` but returns the `QuadResult` (prefactor applied)."""
    check_integrability(spec)
    res = integrate_01_log(_spec_logf(spec), tol)
    pre = spec.prefactor_value()
    return QuadResult(pre * res.value, abs(pre) * res.error, res.level, res.nodes)


def k_integral(spec: KIntegralSpec, tol: float = 1e-12) -> float:
    """Numeric value of prefactor * int_0^1 poly * factors * k^a k'^b K^g K'^d dk.

    Raises
    ------
    IntegrabilityError
        If the endpoint test of `check_integrability` fails.
    ConvergenceError
        If tanh-sinh misses the tolerance.
    """
    return k_integral_detail(spec, tol).value


def integrate_k(fn: Callable[[KNodes], np.ndarray], tol: float = 1e-12) -> QuadResult:
    """Integrate an arbitrary vectorized ``fn(KNodes)`` over k in (0, 1).

    Values are taken in linear space, so factors that underflow or
    overflow individually should be combined by the caller.
    """

    def logf(nodes: Nodes01):
        kn = _knodes(nodes)
        with np.errstate(all="ignore"):
            v = np.asarray(fn(kn), dtype=float)
            return np.log(np.abs(v)), np.sign(v)

    return integrate_01_log(logf, tol)


def mirror_spec(spec: KIntegralSpec) -> KIntegralSpec:
    """Spec of the same integral after k -> k'.

    With k = sqrt(1 - u^2), dk = -(u/k) du, so k^a k'^b K^g K'^d dk becomes
    u^(b+1) k^(a-1) K'^g K^d du. Only monomial specs are supported.
    """
    if spec.poly or spec.factors:
        raise ValueError("mirror_spec supports monomial specs only")
    return KIntegralSpec(spec.beta + 1, spec.alpha - 1, spec.delta_Kp, spec.gamma_K,
                         prefactor=spec.prefactor)
