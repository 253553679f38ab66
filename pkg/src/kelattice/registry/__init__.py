"""Identity registry: closed-form expressions, records, verification and CLI."""

from .expr import ClosedFormExpr, evaluate_closed_form, parse_expr, to_infix, validate_tree
from .records import (BUNDLED_REGISTRY, TOLERANCES, IdentityRecord, KIntegralLhs, KValueLhs,
                      LatticeLhs, load_registry, parse_registry, record_from_json)
from .verify import FAIL, PASS, SKIPPED, VerificationReport, VerificationRow, run_suite, verify_identity

__all__ = [
    "ClosedFormExpr", "evaluate_closed_form", "parse_expr", "to_infix", "validate_tree",
    "BUNDLED_REGISTRY", "TOLERANCES", "IdentityRecord", "KIntegralLhs", "KValueLhs", "LatticeLhs",
    "load_registry", "parse_registry", "record_from_json", "FAIL", "PASS", "SKIPPED",
    "VerificationReport", "VerificationRow", "run_suite", "verify_identity",
]
