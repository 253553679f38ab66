"""Multiple lattice sums built from theta-function products.

L(m, n, p; s) is the Mellin transform of theta2^m theta3^n theta4^p.
Coordinates of theta2 type are shifted by one half, theta3 coordinates are
plain and theta4 coordinates carry a sign (-1)^index. Two routes are
provided: a brute-force oracle for small integer dimensions and a 1-D
integral in the modulus (with its k <-> k' counterpart).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    DimensionTooLargeError,
    DomainError,
    IntegrabilityError,
    TailUnboundedError,
)
from .quadrature import KIntegralSpec, k_integral, mellin_transform
from .specfun import gamma_fn, log_theta_t

__all__ = [
    "LatticeSumSpec",
    "lattice_direct",
    "lattice_mellin",
    "lattice_mellin_dual",
    "lattice_mellin_regularized",
    "lattice_value",
    "mellin_kspec",
    "prop2_equivalents",
    "reflection_equivalent",
    "functional_equation_pairs",
    "jacobi_linear_relation_check",
    "gaussian_alternating_sum",
    "DIRECT_RADII",
]

MAX_DIRECT_DIM = 6
DIRECT_RADII = (200, 240, 280, 320)


def _q(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10 ** 6)
    return Fraction(x)


@dataclass(frozen=True)
class LatticeSumSpec:
    """Exponents (m, n, p) of theta2, theta3, theta4 and the power s."""

    m: Fraction
    n: Fraction
    p: Fraction
    s: float

    def __post_init__(self):
        for name in ("m", "n", "p"):
            v = _q(getattr(self, name))
            if v < 0:
                raise DomainError(f"{name} must be nonnegative")
            object.__setattr__(self, name, v)
        if self.m == self.n == self.p == 0:
            raise DomainError("m, n, p must not all vanish")
        object.__setattr__(self, "s", float(self.s))

    @property
    def dimension(self) -> Fraction:
        return self.m + self.n + self.p

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in (self.m, self.n, self.p))

    def with_s(self, s: float) -> "LatticeSumSpec":
        return LatticeSumSpec(self.m, self.n, self.p, s)


# ----------------------------------------------------------------------
# brute-force oracle


def _exact_conv(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Integer convolution via FFT, split into digits when products are large."""
    na = float(np.sqrt(np.sum(a.astype(float) ** 2)))
    nb = float(np.sqrt(np.sum(b.astype(float) ** 2)))
    size = len(a) + len(b) - 1
    if na * nb * math.log2(size + 2) * 1e-15 < 0.05:
        nfft = 1 << (size - 1).bit_length()
        fa = np.fft.rfft(a.astype(float), nfft)
        fb = np.fft.rfft(b.astype(float), nfft)
        out = np.fft.irfft(fa * fb, nfft)[:size]
        return np.rint(out).astype(np.int64)
    # split the larger operand into base-2^12 digits
    if np.max(np.abs(a)) < np.max(np.abs(b)):
        a, b = b, a
    base = 1 << 12
    sign = np.sign(a)
    mag = np.abs(a)
    lo = sign * (mag % base)
    hi = sign * (mag // base)
    return _exact_conv(hi, b) * base + _exact_conv(lo, b)


def _axis_counts(kind: str, radius: int, scaled: bool) -> np.ndarray:
    """Signed counts of one coordinate indexed by its (scaled) square."""
    if kind == "shift":
        idx = np.arange(-radius + 1, radius + 1)
        vals = (2 * idx - 1) ** 2  # always scaled by 4
        w = np.ones_like(idx)
    else:
        idx = np.arange(-radius, radius + 1)
        vals = (2 * idx) ** 2 if scaled else idx ** 2
        w = np.where(idx % 2 == 0, 1, -1) if kind == "alt" else np.ones_like(idx)
    return np.bincount(vals, weights=w, minlength=int(vals.max()) + 1).astype(np.int64)


@lru_cache(maxsize=64)
def _box_counts(m: int, n: int, p: int, radius: int) -> np.ndarray:
    """Signed representation counts c[Q] over the box |index| <= radius."""
    scaled = m > 0
    kinds = ["shift"] * m + ["plain"] * n + ["alt"] * p
    axes = [_axis_counts(k, radius, scaled) for k in kinds]
    # pair axes first: small exact convolutions keep magnitudes modest
    while len(axes) > 1:
        nxt = []
        for i in range(0, len(axes) - 1, 2):
            nxt.append(_exact_conv(axes[i], axes[i + 1]))
        if len(axes) % 2:
            nxt.append(axes[-1])
        axes = nxt
    return axes[0]


def _box_sum(m, n, p, s, radius) -> float:
    c = _box_counts(m, n, p, radius)
    scale = 4.0 if m > 0 else 1.0
    Q = np.arange(len(c), dtype=float)
    nz = np.nonzero(c)[0]
    nz = nz[nz > 0]  # origin omitted
    terms = c[nz].astype(float) * (scale / Q[nz]) ** s
    return math.fsum(terms)


def _paired(m, n, p, s, radius) -> float:
    """Average of consecutive box sums (Euler pairing of sign shells)."""
    return 0.5 * (_box_sum(m, n, p, s, radius) + _box_sum(m, n, p, s, radius + 1))


def _richardson(radii, values, e0):
    """Fit values ~ L + sum_j a_j R^(e0 - j) and return L."""
    r = np.asarray(radii, dtype=float)
    cols = [np.ones_like(r)] + [r ** (e0 - j) for j in range(len(r) - 1)]
    A = np.stack(cols, axis=1)
    sol = np.linalg.solve(A, np.asarray(values, dtype=float))
    return float(sol[0])


def lattice_direct(spec: LatticeSumSpec, radius: int = 200) -> tuple:
    """Brute-force value of L(m, n, p; s) with a heuristic error bound.

    Box sums are formed from exact signed representation counts. Sums at
    radii ``radius * DIRECT_RADII / 200`` are shell-paired and extrapolated
    in the radius with the tail exponent d - 2s (d - 2s - 2 once a sign
    coordinate is present). The origin is omitted when m = 0.

    Returns
    -------
    (value, error_bound)

    Raises
    ------
    DimensionTooLargeError
        For non-integer exponents or dimension above six.
    TailUnboundedError
        When the truncated sum cannot converge (no sign coordinate and
        2s <= d).
    """
    if not spec.is_integral:
        raise DimensionTooLargeError("direct summation needs integer exponents")
    m, n, p = int(spec.m), int(spec.n), int(spec.p)
    d = m + n + p
    if d > MAX_DIRECT_DIM:
        raise DimensionTooLargeError(f"dimension {d} exceeds {MAX_DIRECT_DIM}")
    s = spec.s
    e0 = d - 2 * s if p == 0 else d - 2 * s - 2
    if e0 >= 0:
        raise TailUnboundedError("truncated sum has no certifiable tail")
    radii = [int(round(radius * r / DIRECT_RADII[0])) for r in DIRECT_RADII]
    vals = [_paired(m, n, p, s, R) for R in radii]
    full = _richardson(radii, vals, e0)
    coarse = _richardson(radii[1:], vals[1:], e0)
    err = 2.0 * abs(full - coarse) + 1e-14 * abs(full)
    return full, err


# ----------------------------------------------------------------------
# integral routes


def mellin_kspec(spec: LatticeSumSpec, dual: bool = False) -> KIntegralSpec:
    """K-integral whose scaled value is L(m, n, p; s)."""
    m, n, p, s = spec.m, spec.n, spec.p, spec.s
    d = float(spec.dimension)
    pre = math.pi ** s / gamma_fn(s) * (2.0 / math.pi) ** ((d - 2.0) / 2.0)
    big = (d - 2 * s - 2) / 2
    if not dual:
        return KIntegralSpec((m - 2) / 2, (p - 4) / 2, big, s - 1, prefactor=pre)
    return KIntegralSpec((p - 2) / 2, (m - 4) / 2, s - 1, big, prefactor=pre)


def lattice_mellin(spec: LatticeSumSpec, tol: float = 1e-12) -> float:
    """L(m, n, p; s) from the first-kind integral in the modulus.

    Raises
    ------
    IntegrabilityError
        When the integral diverges (for m = 0 use the regularized form).
    """
    if spec.s <= 0:
        raise IntegrabilityError("the Mellin route needs s > 0")
    return k_integral(mellin_kspec(spec), tol)


def lattice_mellin_dual(spec: LatticeSumSpec, tol: float = 1e-12) -> float:
    """Same value from the transformed integral with k and K exchanged."""
    if spec.s <= 0:
        raise IntegrabilityError("the Mellin route needs s > 0")
    return k_integral(mellin_kspec(spec, dual=True), tol)


def lattice_mellin_regularized(spec: LatticeSumSpec, tol: float = 1e-12) -> float:
    """Origin-omitted sum for m = 0 via the transform of theta3^n theta4^p - 1."""
    if spec.m != 0:
        raise DomainError("regularized route applies to m = 0 only")
    n, p, s = float(spec.n), float(spec.p), spec.s
    if s <= 0:
        raise IntegrabilityError("the Mellin route needs s > 0")
    if p == 0 and s <= n / 2:
        raise IntegrabilityError("theta3^n - 1 transform diverges for s <= n/2")

    def log_prod(t):
        la = np.zeros_like(t)
        if n:
            la = la + n * log_theta_t(3, t)
        if p:
            la = la + p * log_theta_t(4, t)
        return la

    def f(t):
        return np.expm1(log_prod(t))

    def log_f(t):
        la = log_prod(t)
        with np.errstate(divide="ignore"):
            # log|e^a - 1| without overflow for large a
            out = np.where(la > 0, la + np.log(-np.expm1(-np.abs(la))), np.log(-np.expm1(-np.abs(la))))
        return out, np.sign(la)

    return mellin_transform(f, s, tol, log_f=log_f)


def lattice_value(spec: LatticeSumSpec, tol: float = 1e-12) -> float:
    """Best available 1-D evaluation: regularized when m = 0."""
    if spec.m == 0:
        return lattice_mellin_regularized(spec, tol)
    return lattice_mellin(spec, tol)


# ----------------------------------------------------------------------
# transformation algebra


def _gamma_ratio(a: float, b: float) -> float:
    """Gamma(a) / Gamma(b)."""
    return gamma_fn(a) / gamma_fn(b)


def prop2_equivalents(m, n, s: float) -> list:
    """Forms equal to L(2m, n, n; s), each as (spec, scale).

    The value of L(2m, n, n; s) equals ``scale * value(spec)`` for every
    pair: L(m, m, 2n; s) with scale 2^(m-s) and L(n, n, 2m; m+n-s) with
    scale pi^(2s-m-n) Gamma(m+n-s) / Gamma(s). The Gamma ratio comes from
    the t -> pi^2/t step of the theta transformation. The third form is
    omitted when m + n - s <= 0, where it has no convergent transform.
    """
    m, n = _q(m), _q(n)
    if m < 0 or n < 0 or (m == 0 and n == 0):
        raise DomainError("shape L(2m, n, n; s) needs m, n >= 0 not both zero")
    sr = float(m + n) - s
    out = [
        (LatticeSumSpec(2 * m, n, n, s), 1.0),
        (LatticeSumSpec(m, m, 2 * n, s), 2.0 ** (float(m) - s)),
    ]
    if sr > 0:
        out.append((LatticeSumSpec(n, n, 2 * m, sr), math.pi ** (2 * s - float(m + n)) * _gamma_ratio(sr, s)))
    return out


def reflection_equivalent(spec: LatticeSumSpec) -> tuple:
    """(spec', scale) with L(m, n, p; s) = scale * L(p, n, m; s').

    Here s' = (d - 2s)/2 and scale = pi^((4s - d)/2) Gamma(s') / Gamma(s),
    i.e. pi^-s Gamma(s) L(m, n, p; s) is invariant.
    """
    d = float(spec.dimension)
    sr = (d - 2 * spec.s) / 2
    other = LatticeSumSpec(spec.p, spec.n, spec.m, sr)
    return other, math.pi ** ((4 * spec.s - d) / 2) * _gamma_ratio(sr, spec.s)


def functional_equation_pairs(m, s: float) -> list:
    """Self-dual families as (lhs, scale, rhs) with scale * L(lhs) = L(rhs).

    L(m, m, 2m; s) maps to s -> 2m - s with scale
    2^(m-s) pi^(2m-2s) Gamma(s)/Gamma(2m-s); L(m, m, 4m; s) maps to
    s -> 3m - s with scale (2 pi)^(3m-2s) Gamma(s)/Gamma(3m-s).
    """
    m = _q(m)
    fm = float(m)
    return [
        (LatticeSumSpec(m, m, 2 * m, s),
         2.0 ** (fm - s) * math.pi ** (2 * fm - 2 * s) * _gamma_ratio(s, 2 * fm - s),
         LatticeSumSpec(m, m, 2 * m, 2 * fm - s)),
        (LatticeSumSpec(m, m, 4 * m, s),
         (2 * math.pi) ** (3 * fm - 2 * s) * _gamma_ratio(s, 3 * fm - s),
         LatticeSumSpec(m, m, 4 * m, 3 * fm - s)),
    ]


def jacobi_linear_relation_check(m, n, p, s: float, tol: float = 1e-8) -> float:
    """Residual of L(m,n,p+4;s) - L(m,n+4,p;s) + L(m+4,n,p;s).

    Each term uses `lattice_value`. Raises `DomainError` for (0, 0, 0).
    """
    m, n, p = _q(m), _q(n), _q(p)
    if m == n == p == 0:
        raise DomainError("degenerate exponents (0, 0, 0)")
    a = lattice_value(LatticeSumSpec(m, n, p + 4, s), tol * 1e-3)
    b = lattice_value(LatticeSumSpec(m, n + 4, p, s), tol * 1e-3)
    c = lattice_value(LatticeSumSpec(m + 4, n, p, s), tol * 1e-3)
    return abs(a - b + c)


def gaussian_alternating_sum(s: int, radius: int = 300) -> float:
    """Real part of sum' (-1)^(a+b) (a - b i)^4 / (a^2 + b^2)^s by direct summation.

    Square partial sums are shell-paired (average of radius and radius+1).
    """
    def box(R):
        i = np.arange(-R, R + 1, dtype=float)
        a, b = np.meshgrid(i, i, indexing="ij")
        r2 = a * a + b * b
        r2[R, R] = 1.0
        num = a ** 4 - 6 * a * a * b * b + b ** 4
        sign = np.where((a + b) % 2 == 0, 1.0, -1.0)
        v = sign * num / r2 ** s
        v[R, R] = 0.0
        return math.fsum(v.ravel())

    return 0.5 * (box(radius) + box(radius + 1))
