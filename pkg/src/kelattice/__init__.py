"""Closed forms for integrals of complete elliptic integrals via lattice sums.

Subpackages and modules
-----------------------
specfun     K, E, AGM, nome, theta functions, Gamma and pFq at 1
lseries     Dirichlet L-series with real characters and regularized limits
quadrature  tanh-sinh quadrature for integrands in k, K and K'
lattice     lattice sums L(m, n, p; s) by Mellin integrals and direct summation
symbolic    exact q-series, polynomials and K/E expression algebra
registry    identity catalog, verification runner and command-line interface
"""

__version__ = "0.1.0"
