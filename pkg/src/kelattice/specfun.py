"""Scalar special functions in binary64.

Complete elliptic integrals by the arithmetic-geometric mean, their
derivatives and complements, the nome map and its inverse, Jacobi theta
functions, Gamma, and generalized hypergeometric series at unit argument.

All array-valued routines accept numpy arrays and broadcast elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "Modulus",
    "Nome",
    "EllipticValues",
    "agm",
    "elliptic_values",
    "ellint_K",
    "ellint_E",
    "ellint_complementary",
    "deriv_K",
    "deriv_E",
    "nome",
    "modulus_from_nome",
    "theta",
    "theta_t",
    "log_theta_t",
    "gamma_fn",
    "hypergeometric_pfq",
    "PFQResult",
    "pfq_detail",
]

AGM_RTOL = 1e-16
AGM_MAXITER = 60
# Below this size the AGM argument is replaced by the log asymptotic,
# whose first correction term is O(x^2 log x).
_LOG_SWITCH = 1e-20
# E near k = 1 uses its two-term asymptotic below this complement.
_E_ASYMPTOTIC = 1e-3
_LN4 = math.log(4.0)
_HALF_PI = 0.5 * math.pi


@dataclass(frozen=True)
class Modulus:
    """A modulus k in (0, 1) with its complement k' = sqrt(1 - k^2).

    The complement is carried separately so that it keeps full relative
    accuracy when k is close to 1.
    """

    k: float
    k_prime: float

    def __post_init__(self):
        # k may round to 1.0 in binary64 while k' is still resolvable
        if not (0.0 < self.k <= 1.0 and 0.0 < self.k_prime <= 1.0):
            raise DomainError(f"modulus pair out of range: k={self.k}, k'={self.k_prime}")
        if abs(self.k * self.k + self.k_prime * self.k_prime - 1.0) > 1e-12:
            raise DomainError("k^2 + k'^2 differs from 1")

    @classmethod
    def from_k(cls, k: float) -> "Modulus":
        k = float(k)
        if not 0.0 < k < 1.0:
            raise DomainError(f"k must lie in (0, 1), got {k}")
        return cls(k, math.sqrt((1.0 - k) * (1.0 + k)))

    def swapped(self) -> "Modulus":
        return Modulus(self.k_prime, self.k)


@dataclass(frozen=True)
class Nome:
    """Nome q = exp(-pi tau_imag) of a modulus, with the derivative dq/dk."""

    q: float
    tau_imag: float
    dq_dk: float = float("nan")

    def __post_init__(self):
        if not (0.0 < self.q < 1.0) or self.tau_imag <= 0:
            raise DomainError(f"nome out of range: q={self.q}")


@dataclass(frozen=True)
class EllipticValues:
    """K, K', E, E' evaluated at the same modulus (arrays or floats)."""

    K: np.ndarray
    Kp: np.ndarray
    E: np.ndarray
    Ep: np.ndarray


def agm(a, b):
    """Arithmetic-geometric mean of positive arrays ``a`` and ``b``."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a, b = np.broadcast_arrays(a, b)
    a = a.copy()
    b = b.copy()
    gap = np.full(a.shape, np.inf)
    for _ in range(AGM_MAXITER):
        new_gap = np.abs(a - b)
        if np.all((new_gap <= AGM_RTOL * a) | (new_gap >= gap)):
            return a
        gap = new_gap
        a, b = 0.5 * (a + b), np.sqrt(a * b)
    raise ConvergenceError("AGM iteration cap reached")


def _agm_with_csum(b0, c0):
    """Run AGM(1, b0) and accumulate sum 2^(n-1) c_n^2 with c_0 = c0.

    Returns ``(agm, csum)`` so that K = pi/(2 agm) and E = K (1 - csum) for
    the modulus whose complement is ``b0`` and whose value is ``c0``.
    """
    a = np.ones_like(b0)
    b = b0.copy()
    csum = 0.5 * c0 * c0
    power = 0.5
    gap = np.full(a.shape, np.inf)
    for _ in range(AGM_MAXITER):
        new_gap = np.abs(a - b)
        # stop at the tolerance or once rounding makes the gap stagnate
        if np.all((new_gap <= AGM_RTOL * a) | (new_gap >= gap)):
            return a, csum
        gap = new_gap
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        power *= 2.0
        csum = csum + power * c * c
    raise ConvergenceError("AGM iteration cap reached")


def _one_side(c, cc, log_cc):
    """K and E at modulus ``c`` whose complement is ``cc`` (arrays)."""
    K = np.empty_like(c)
    E = np.empty_like(c)
    small = cc < _LOG_SWITCH
    mid = ~small
    if np.any(mid):
        g, csum = _agm_with_csum(cc[mid], c[mid])
        K[mid] = np.pi / (2.0 * g)
        E[mid] = K[mid] * (1.0 - csum)
    if np.any(small):
        K[small] = _LN4 - log_cc[small]
    near = cc < _E_ASYMPTOTIC
    if np.any(near):
        L = _LN4 - log_cc[near]
        x2 = cc[near] ** 2
        with np.errstate(invalid="ignore"):  # cc = 0 gives 0 * inf; fixed below
            E[near] = 1.0 + 0.5 * x2 * (L - 0.5) + 0.1875 * x2 * x2 * (L - 13.0 / 12.0)
        E[cc == 0.0] = 1.0
    return K, E


def elliptic_values(k, kp=None, logk=None, logkp=None) -> EllipticValues:
    """Evaluate K, K', E, E' at once.

    Parameters
    ----------
    k : array_like
        Modulus values in [0, 1].
    kp : array_like, optional
        Complement sqrt(1 - k^2). Pass it whenever k is near 1; otherwise
        it is recomputed (losing relative accuracy as k -> 1).
    logk, logkp : array_like, optional
        Logarithms of k and k'. They allow evaluation when k or k' is
        below the smallest positive double.

    Returns
    -------
    EllipticValues
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if kp is None:
        kp = np.sqrt((1.0 - k) * (1.0 + k))
    kp = np.atleast_1d(np.asarray(kp, dtype=float))
    with np.errstate(divide="ignore"):
        logk = np.log(k) if logk is None else np.atleast_1d(np.asarray(logk, dtype=float))
        logkp = np.log(kp) if logkp is None else np.atleast_1d(np.asarray(logkp, dtype=float))
    K, E = _one_side(k, kp, logkp)
    Kp, Ep = _one_side(kp, k, logk)
    return EllipticValues(K, Kp, E, Ep)


def _scalar_or_array(x, like):
    if np.ndim(like) == 0:
        return float(np.asarray(x).reshape(-1)[0])
    return np.asarray(x).reshape(np.shape(like))


def _check_open(k, lo_closed=False, hi_closed=False):
    arr = np.asarray(k, dtype=float)
    lo_ok = arr >= 0 if lo_closed else arr > 0
    hi_ok = arr <= 1 if hi_closed else arr < 1
    if not np.all(lo_ok & hi_ok):
        raise DomainError(f"modulus outside the allowed interval: {k}")
    return arr


def ellint_K(k):
    """Complete elliptic integral of the first kind K(k), 0 <= k < 1.

    Computed as pi / (2 AGM(1, k')). Relative accuracy is about 1e-15.
    """
    arr = _check_open(k, lo_closed=True)
    vals = elliptic_values(arr.reshape(-1))
    return _scalar_or_array(vals.K, k)


def ellint_E(k):
    """Complete elliptic integral of the second kind E(k), 0 <= k <= 1."""
    arr = _check_open(k, lo_closed=True, hi_closed=True)
    flat = arr.reshape(-1)
    out = np.ones_like(flat)
    inner = flat < 1.0
    if np.any(inner):
        out[inner] = elliptic_values(flat[inner]).E
    return _scalar_or_array(out, k)


def ellint_complementary(k):
    """Return ``(K', E')``, i.e. K and E at the complementary modulus."""
    arr = _check_open(k)
    vals = elliptic_values(arr.reshape(-1))
    return _scalar_or_array(vals.Kp, k), _scalar_or_array(vals.Ep, k)


def deriv_K(k):
    """dK/dk = (E - k'^2 K) / (k k'^2) for 0 < k < 1."""
    arr = _check_open(k).reshape(-1)
    kp2 = (1.0 - arr) * (1.0 + arr)
    v = elliptic_values(arr)
    return _scalar_or_array((v.E - kp2 * v.K) / (arr * kp2), k)


def deriv_E(k):
    """dE/dk = (E - K) / k for 0 < k < 1."""
    arr = _check_open(k).reshape(-1)
    v = elliptic_values(arr)
    return _scalar_or_array((v.E - v.K) / arr, k)


def nome(k) -> Nome:
    """Nome q = exp(-pi K'/K) of a scalar modulus, with dq/dk."""
    if isinstance(k, Modulus):
        kk, kp = k.k, k.k_prime
    else:
        kk = float(_check_open(k))
        kp = math.sqrt((1.0 - kk) * (1.0 + kk))
    v = elliptic_values(kk, kp)
    K, Kp = float(v.K[0]), float(v.Kp[0])
    tau = Kp / K
    q = math.exp(-math.pi * tau)
    dq = math.pi ** 2 * q / (2.0 * kk * kp * kp * K * K)
    return Nome(q, tau, dq)


def _theta_direct(i: int, q: np.ndarray) -> np.ndarray:
    """Sum the defining q-series of theta_i for 0 < q <= e^{-1}."""
    logq = np.log(q)
    if i == 2:
        # 2 q^(1/4) sum_{n>=0} q^{n(n+1)}
        total = np.ones_like(q)
        n = 1
        while True:
            term = np.exp(n * (n + 1) * logq)
            total += term
            if n >= 2 and np.all(term < 1e-18 * total):
                break
            n += 1
        return 2.0 * np.exp(0.25 * logq) * total
    sign = -1.0 if i == 4 else 1.0
    total = np.ones_like(q)
    n = 1
    while True:
        term = 2.0 * sign ** n * np.exp(n * n * logq)
        total += term
        if n >= 3 and np.all(np.abs(term) < 1e-18 * np.abs(total)):
            break
        n += 1
    return total


def log_theta_t(i: int, t):
    """log theta_i(e^{-t}) for t > 0, stable for very small and large t.

    For t < 1 the modular transformation
    theta_3(e^{-t}) = sqrt(pi/t) theta_3(e^{-pi^2/t}) (with theta_2 and
    theta_4 exchanged) is applied.
    """
    if i not in (2, 3, 4):
        raise DomainError("theta index must be 2, 3 or 4")
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t <= 0):
        raise DomainError("theta requires t > 0 (0 < q < 1)")
    out = np.empty_like(t)
    direct = t >= 1.0
    if np.any(direct):
        out[direct] = _log_theta_series(i, t[direct])
    tr = ~direct
    if np.any(tr):
        tt = t[tr]
        j = {2: 4, 3: 3, 4: 2}[i]
        with np.errstate(over="ignore"):
            out[tr] = 0.5 * (math.log(math.pi) - np.log(tt)) + _log_theta_series(j, np.pi ** 2 / tt)
    return out


def _log_theta_series(i: int, t: np.ndarray) -> np.ndarray:
    """log theta_i(e^{-t}) for t >= 1 using the q-series in log form."""
    # Leading behaviour factored out so large t does not underflow.
    if i == 2:
        total = np.ones_like(t)
        n = 1
        while True:
            term = np.exp(-n * (n + 1) * t)
            total += term
            if n >= 2 and np.all(term < 1e-18 * total):
                break
            n += 1
        return math.log(2.0) - 0.25 * t + np.log(total)
    sign = -1.0 if i == 4 else 1.0
    total = np.zeros_like(t)
    n = 1
    while True:
        term = 2.0 * sign ** n * np.exp(-n * n * t)
        total += term
        if n >= 3 and np.all(np.abs(term) < 1e-18):
            break
        n += 1
    return np.log1p(total)


def theta_t(i: int, t):
    """theta_i(e^{-t}) for t > 0 (array aware)."""
    val = np.exp(log_theta_t(i, t))
    return _scalar_or_array(val, t)


def theta(i: int, q):
    """Jacobi theta function theta_i(q) for i in {2, 3, 4} and 0 < q < 1.

    Notes
    -----
    For q <= e^{-1} the defining series is summed until a term drops below
    1e-18 of the running sum (at least three terms). Closer to q = 1 the
    series is summed in the transformed nome e^{-pi^2/t}.
    """
    if i not in (2, 3, 4):
        raise DomainError("theta index must be 2, 3 or 4")
    arr = np.atleast_1d(np.asarray(q, dtype=float))
    if np.any(arr >= 1.0):
        raise ConvergenceError("theta series diverges for q >= 1")
    if np.any(arr <= 0.0):
        raise DomainError("theta requires q > 0")
    out = np.empty_like(arr)
    direct = arr <= math.exp(-1.0)
    if np.any(direct):
        out[direct] = _theta_direct(i, arr[direct])
    if np.any(~direct):
        out[~direct] = np.exp(log_theta_t(i, -np.log(arr[~direct])))
    return _scalar_or_array(out, q)


def modulus_from_nome(q: float) -> Modulus:
    """Invert the nome map: k = theta_2^2/theta_3^2, k' = theta_4^2/theta_3^2."""
    q = float(q)
    if not 0.0 < q < 1.0:
        raise DomainError(f"nome must lie in (0, 1), got {q}")
    t = -math.log(q)
    l2 = float(log_theta_t(2, t)[0])
    l3 = float(log_theta_t(3, t)[0])
    l4 = float(log_theta_t(4, t)[0])
    k, kp = math.exp(2 * (l2 - l3)), math.exp(2 * (l4 - l3))
    if k == 0.0 or kp == 0.0:
        raise DomainError(f"modulus for q={q} underflows binary64")
    return Modulus(k, kp)


def gamma_fn(x):
    """Gamma function for real x that is not a nonpositive integer.

    Wraps ``math.gamma``, which is accurate to a few ulps on (0, 171).
    """
    if isinstance(x, Fraction):
        x = float(x)
    if np.ndim(x) > 0:
        return np.array([gamma_fn(float(v)) for v in np.ravel(x)]).reshape(np.shape(x))
    x = float(x)
    if x <= 0 and x == math.floor(x):
        raise PoleError(f"Gamma has a pole at {x}")
    return math.gamma(x)


# ----------------------------------------------------------------------
# Generalized hypergeometric series


@dataclass(frozen=True)
class PFQResult:
    """Value of a pFq series with its two independent estimates."""

    value: float
    levin: float
    tail_fit: float
    error_estimate: float


def _pfq_terms(num, den, z, count):
    """First ``count`` terms of pFq(num; den; z) in float (cumulative ratios)."""
    n = np.arange(count - 1, dtype=float)
    ratio = np.full(count - 1, float(z))
    for a in num:
        ratio *= (n + a)
    for b in den:
        ratio /= (n + b)
    ratio /= (n + 1.0)
    terms = np.empty(count)
    terms[0] = 1.0
    terms[1:] = np.cumprod(ratio)
    return terms


def _levin_u(partial, terms, start, order, beta=1.0):
    """Levin u-transform of the partial sums s_n = sum_{j<=n} a_j."""
    k = order
    num = 0.0
    den = 0.0
    nk = start + k + beta
    for j in range(k + 1):
        nj = start + j
        omega = (nj + beta) * terms[nj]
        if omega == 0:
            continue
        c = (-1) ** j * math.comb(k, j) * ((nj + beta) / nk) ** (k - 1) / omega
        num += c * partial[nj]
        den += c
    return num / den


def _tail_fit(terms, decay, nmax):
    """Fit s_N = S + N^decay (d0 + d1/N + ...) on a spread of N and return S."""
    counts = np.unique(np.round(np.geomspace(nmax // 16, nmax, 12)).astype(int))
    sums = []
    acc = 0.0
    prev = 0
    for n in counts:
        acc = math.fsum([acc, math.fsum(terms[prev:n])])
        prev = n
        sums.append(acc)
    N = counts.astype(float)
    cols = [np.ones_like(N)] + [N ** (decay - j) for j in range(6)]
    A = np.stack(cols, axis=1)
    scale = np.max(np.abs(A), axis=0)
    coef, *_ = np.linalg.lstsq(A / scale, np.array(sums), rcond=None)
    return coef[0] / scale[0]


def pfq_detail(numerator: Sequence, denominator: Sequence, z: float) -> PFQResult:
    """Evaluate pFq with both estimates exposed. See `hypergeometric_pfq`."""
    num = [float(Fraction(a)) if not isinstance(a, float) else a for a in numerator]
    den = [float(Fraction(b)) if not isinstance(b, float) else b for b in denominator]
    z = float(z)
    if any(b <= 0 and b == math.floor(b) for b in den):
        raise DomainError("denominator parameter is a nonpositive integer")
    if z == 0.0:
        return PFQResult(1.0, 1.0, 1.0, 0.0)
    if not 0.0 <= z <= 1.0:
        raise DomainError("z must lie in [0, 1]")
    if any(a <= 0 and a == math.floor(a) for a in num):
        # terminating series
        n_terms = int(-max(a for a in num if a <= 0 and a == math.floor(a))) + 1
        val = math.fsum(_pfq_terms(num, den, z, n_terms + 1))
        return PFQResult(val, val, val, 0.0)
    if z < 1.0:
        if len(num) > len(den) + 1:
            raise ConvergenceError("pFq with p > q+1 diverges for z != 0")
        count = 64
        while True:
            terms = _pfq_terms(num, den, z, count)
            if abs(terms[-1]) < 1e-18 * abs(math.fsum(terms)) or count > 2_000_000:
                val = math.fsum(terms)
                return PFQResult(val, val, val, abs(terms[-1]))
            count *= 2
    if len(num) != len(den) + 1:
        raise ConvergenceError("pFq at z = 1 needs p = q + 1")
    decay = sum(num) - sum(den)  # partial sums approach the limit like N^decay
    if decay >= 0:
        raise ConvergenceError(f"pFq terms decay like n^{decay - 1:.3g}; the series diverges at z = 1")
    nmax = 200_000
    terms = _pfq_terms(num, den, 1.0, nmax)
    partial = np.cumsum(terms[:64])
    # Levin on logarithmic convergence loses digits to cancellation when
    # started late, so it is anchored at the first partial sums.
    lev = _levin_u(partial, terms, 1, 12)
    fit = _tail_fit(terms, decay, nmax)
    # The fit knows the decay exponent and is the more accurate of the two;
    # Levin serves as the independent check that sets the error estimate.
    err = abs(lev - fit)
    return PFQResult(float(fit), float(lev), float(fit), float(err))


def hypergeometric_pfq(numerator: Sequence, denominator: Sequence, z: float) -> float:
    """Generalized hypergeometric series pFq(numerator; denominator; z).

    Parameters
    ----------
    numerator, denominator : sequence of rationals
        Upper and lower parameters (``Fraction``, ``int``, ``float`` or
        strings like ``"1/2"``).
    z : float
        Argument in [0, 1]. At z = 1 the series must converge, i.e. the terms
        must decay like n^(-1-delta).

    Returns
    -------
    float
        Series value. At z = 1 a Levin u-transform of order 12 is used and
        cross-checked against a raw-sum algebraic tail fit.

    Raises
    ------
    ConvergenceError
        If the series diverges or the two estimates disagree beyond 1e-7.
    """
    res = pfq_detail(numerator, denominator, z)
    if res.error_estimate > 1e-7 * max(1.0, abs(res.value)):
        raise ConvergenceError("pFq estimates disagree", (res.levin, res.tail_fit))
    return res.value
