"""Eisenstein series as polynomials in E4, E6 and their forms in k and K."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Tuple

from ..errors import SymbolicError
from ..lseries import bernoulli
from .keexpr import KEExpr
from .poly import ONE_MINUS_K2, Poly
from .qseries import QSeries, eisenstein_qseries

__all__ = [
    "WeightedPoly",
    "eisenstein_as_E4E6",
    "eisenstein_k_form",
    "K_FORMS",
    "compute_pn",
    "compute_Qn",
    "pn_mellin_scale",
]


@dataclass(frozen=True)
class WeightedPoly:
    """sum coeff * E4^i E6^j with 4i + 6j = weight for every monomial."""

    weight: int
    monomials: Tuple[Tuple[int, int, Fraction], ...]

    def __post_init__(self):
        for i, j, _ in self.monomials:
            if 4 * i + 6 * j != self.weight:
                raise SymbolicError("monomial weight mismatch")

    def as_dict(self) -> Dict[Tuple[int, int], Fraction]:
        return {(i, j): c for i, j, c in self.monomials}

    def coefficient(self, i: int, j: int) -> Fraction:
        return self.as_dict().get((i, j), Fraction(0))

    def substitute(self, e4, e6):
        """Evaluate with E4 -> e4 and E6 -> e6 (any ring supporting + and *)."""
        total = None
        for i, j, c in self.monomials:
            term = c
            for _ in range(i):
                term = e4 * term
            for _ in range(j):
                term = e6 * term
            total = term if total is None else total + term
        return total


def _basis(weight: int):
    return [(i, (weight - 4 * i) // 6) for i in range(weight // 4 + 1) if (weight - 4 * i) % 6 == 0]


def _solve(A, b):
    """Exact Gauss-Jordan solve of a square Fraction system."""
    n = len(A)
    M = [row[:] + [bi] for row, bi in zip(A, b)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise SymbolicError("singular system")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[r][n] for r in range(n)]


def eisenstein_as_E4E6(weight: int) -> WeightedPoly:
    """Express E_weight as a homogeneous polynomial in E4 and E6.

    The coefficients are fixed by the first ``len(basis)`` q-coefficients
    and then checked against ``2 * len(basis) + 10`` further ones.
    """
    if weight < 4 or weight % 2:
        raise SymbolicError("weight must be even and at least 4")
    basis = _basis(weight)
    r = len(basis)
    order = 3 * r + 10
    E4 = eisenstein_qseries(4, order)
    E6 = eisenstein_qseries(6, order)
    target = eisenstein_qseries(weight, order)
    cols = []
    for i, j in basis:
        s = QSeries(0, 1, (1,), order)
        for _ in range(i):
            s = s * E4
        for _ in range(j):
            s = s * E6
        cols.append(s)
    A = [[cols[c].coefficient(m) for c in range(r)] for m in range(r)]
    b = [target.coefficient(m) for m in range(r)]
    x = _solve(A, b)
    for m in range(order):
        if sum(xc * cols[c].coefficient(m) for c, xc in enumerate(x)) != target.coefficient(m):
            raise SymbolicError(f"E_{weight} identity fails at q^{m}")
    return WeightedPoly(weight, tuple((i, j, c) for (i, j), c in zip(basis, x) if c != 0))


# Closed forms of E4 and E6 at q^2, q and -q: (coefficient, polynomial in k)
K_FORMS = {
    "q2": ((16, Poly({0: 1, 2: -1, 4: 1})),
           (32, Poly({0: 1, 2: 1}) * Poly({0: 1, 2: -2}) * Poly({0: 2, 2: -1}))),
    "q": ((16, Poly({0: 1, 2: 14, 4: 1})),
          (64, Poly({0: 1, 2: 1}) * Poly({0: 1, 2: -34, 4: 1}))),
    "-q": ((16, Poly({0: 1, 2: -16, 4: 16})),
           (64, Poly({0: 1, 2: -2}) * Poly({0: 1, 2: 32, 4: -32}))),
}


def eisenstein_k_form(weight: int, variant: str) -> KEExpr:
    """E_weight at q^2, q or -q as an E-free KEExpr in k and K.

    ``variant`` is one of ``"q2"``, ``"q"`` and ``"-q"``.
    """
    if variant not in K_FORMS:
        raise SymbolicError(f"unknown variant {variant!r}")
    (c4, p4), (c6, p6) = K_FORMS[variant]
    e4 = KEExpr.monomial(c4, c=4, f=-4, poly=p4)
    e6 = KEExpr.monomial(c6, c=6, f=-6, poly=p6)
    return eisenstein_as_E4E6(weight).substitute(e4, e6)


def compute_Qn(n: int) -> Poly:
    """Q_n with E_2n(q^2) - E_2n(-q) = pi^-2n Q_n(k) K^2n."""
    if n < 2:
        raise SymbolicError("n must be at least 2")
    diff = eisenstein_k_form(2 * n, "q2") - eisenstein_k_form(2 * n, "-q")
    a, b, c, e, f, g, P = diff.single_group()
    if (a, c, e, f, g) != (0, 2 * n, 0, -2 * n, 0) or b.denominator != 1 or b % 2:
        raise SymbolicError("unexpected shape of E_2n(q^2) - E_2n(-q)")
    return P * ONE_MINUS_K2 ** int(b / 2)


def pn_mellin_scale(n: int) -> Fraction:
    """-8n/B_2n: the integral of k Q_n/(k^2 k'^2) K^(2n-1-s) K'^(s-1) over this
    constant is pi^(2n-1-s) Gamma(s) eta(s+1-2n) lambda(s)."""
    return Fraction(-8 * n) / bernoulli(2 * n)


def compute_pn(n: int) -> Poly:
    """Even polynomial p_n with int_0^1 k p_n K^(2n-1-s) K'^(s-1) dk
    = pi^(2n-1-s) Gamma(s) eta(s+1-2n) lambda(s).

    Raises `SymbolicError` if Q_n is not divisible by k^2 k'^2.
    """
    Q = compute_Qn(n)
    try:
        R = Q.exact_div(Poly.monomial(2) * ONE_MINUS_K2)
    except SymbolicError as exc:
        raise SymbolicError(f"Q_{n} is not divisible by k^2 k'^2") from exc
    return R * (1 / pn_mellin_scale(n))
