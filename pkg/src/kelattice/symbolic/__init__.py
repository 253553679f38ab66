"""Exact q-series, polynomial and elliptic-expression algebra."""

from .eisenstein import (K_FORMS, WeightedPoly, compute_pn, compute_Qn, eisenstein_as_E4E6,
                         eisenstein_k_form, pn_mellin_scale)
from .keexpr import KEExpr, keexpr_to_qseries, q_ddq, theta3_expr, theta_power_sum
from .modular import (BASE_IDENTITIES, GammaQuarterConstant, GpResult, QIdentity, base_identity,
                      compute_f4p, compute_gp, derive_E_identity, eisenstein_at_i, f4p_poly,
                      lambert_qseries, sqrt2_lattice_check)
from .poly import ONE_MINUS_K2, Poly
from .qseries import QSeries, divisor_sigma, eisenstein_qseries, theta_qseries

__all__ = [
    "K_FORMS", "WeightedPoly", "compute_pn", "compute_Qn", "eisenstein_as_E4E6",
    "eisenstein_k_form", "pn_mellin_scale", "KEExpr", "keexpr_to_qseries", "q_ddq",
    "theta3_expr", "theta_power_sum", "BASE_IDENTITIES", "GammaQuarterConstant", "GpResult",
    "QIdentity", "base_identity", "compute_f4p", "compute_gp", "derive_E_identity",
    "eisenstein_at_i", "f4p_poly", "lambert_qseries", "sqrt2_lattice_check", "Poly",
    "ONE_MINUS_K2", "QSeries", "divisor_sigma", "eisenstein_qseries", "theta_qseries",
]
