"""Numeric verification of registry records and report rendering."""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

from ..errors import KelatticeError
from ..lattice import lattice_direct, lattice_mellin_dual, lattice_value
from ..lseries import regularized_limit
from ..quadrature import k_integral
from ..specfun import ellint_K
from .expr import evaluate_closed_form
from .records import IdentityRecord, KIntegralLhs, KValueLhs

__all__ = ["VerificationRow", "VerificationReport", "verify_identity", "run_suite",
           "PASS", "FAIL", "SKIPPED"]

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"


@dataclass
class VerificationRow:
    """Outcome of one (record, s) check. ``seconds`` is the only timing field."""

    id: str
    s: Optional[str]
    status: str
    lhs: Optional[float] = None
    rhs: Optional[float] = None
    abs_error: Optional[float] = None
    rel_error: Optional[float] = None
    tolerance: Optional[float] = None
    tolerance_class: str = "STANDARD"
    regularized: bool = False
    method: str = ""
    citation: str = ""
    detail: str = ""
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == PASS


def _fmt_s(s: Optional[Fraction]) -> Optional[str]:
    return None if s is None else str(s)


def _lhs_value(lhs, s: Optional[float]):
    """Return (value, method label, extra absolute error allowance)."""
    if isinstance(lhs, KIntegralLhs):
        return k_integral(lhs.spec(s)), "kintegral", 0.0
    if isinstance(lhs, KValueLhs):
        return float(ellint_K(evaluate_closed_form(lhs.k, s))), "agm", 0.0
    pre = evaluate_closed_form(lhs.prefactor, s)
    spec = lhs.spec(s)
    if lhs.method == "direct":
        v, err = lattice_direct(spec)
        return pre * v, "direct", abs(pre) * err
    if lhs.method == "dual":
        return pre * lattice_mellin_dual(spec), "dual", 0.0
    return pre * lattice_value(spec), "mellin-regularized" if spec.m == 0 else "mellin", 0.0


def _rhs_value(record: IdentityRecord, s: Optional[Fraction]):
    if s is not None and s in record.regularize_s:
        return regularized_limit(lambda t: record.rhs.evaluate(t), float(s)), True
    return record.rhs.evaluate(None if s is None else float(s)), False


def _check_one(record: IdentityRecord, s: Optional[Fraction]) -> VerificationRow:
    row = VerificationRow(record.id, _fmt_s(s), FAIL, tolerance=record.tolerance,
                          tolerance_class=record.tolerance_class, citation=record.citation)
    skip = dict(record.skipped_s)
    if s is not None and s in skip:
        row.status, row.detail = SKIPPED, skip[s]
        return row
    t0 = time.perf_counter()
    try:
        sf = None if s is None else float(s)
        lhs, method, allowance = _lhs_value(record.lhs, sf)
        rhs, reg = _rhs_value(record, s)
        row.lhs, row.rhs, row.method, row.regularized = lhs, rhs, method, reg
        err = abs(lhs - rhs)
        row.abs_error = err
        row.rel_error = err / abs(rhs) if rhs != 0 else err
        ok = math.isfinite(err) and row.rel_error <= record.tolerance
        row.status = PASS if ok else FAIL
        if not ok:
            row.detail = f"relative error {row.rel_error:.3e} exceeds {record.tolerance:g}"
        if method == "direct":
            row.detail = (row.detail + "; " if row.detail else "") + f"direct-sum error bound {allowance:.1e}"
    except (KelatticeError, ArithmeticError, ValueError, OverflowError) as exc:
        row.status, row.detail = FAIL, f"{type(exc).__name__}: {exc}"
    row.seconds = time.perf_counter() - t0
    return row


def verify_identity(record: IdentityRecord) -> List[VerificationRow]:
    """Check a record at each of its s-values (once if it has none).

    Errors inside the numerics become FAIL rows with the reason in ``detail``.
    """
    if record.s_values is None:
        return [_check_one(record, None)]
    return [_check_one(record, s) for s in record.s_values]


@dataclass
class VerificationReport:
    """Rows of a suite run plus metadata; ``timestamp`` and row ``seconds`` vary between runs."""

    suite: str
    timestamp: str
    rows: List[VerificationRow] = field(default_factory=list)

    @property
    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for r in self.rows:
            out[r.status] += 1
        return out

    @property
    def ok(self) -> bool:
        return self.counts[FAIL] == 0

    def failures(self) -> List[VerificationRow]:
        return [r for r in self.rows if r.status == FAIL]

    def to_dict(self) -> dict:
        return {"suite": self.suite, "timestamp": self.timestamp, "summary": self.counts,
                "rows": [asdict(r) for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_markdown(self) -> str:
        c = self.counts
        lines = [f"# Verification report: {self.suite}", "",
                 f"Generated {self.timestamp}. PASS {c[PASS]}, FAIL {c[FAIL]}, SKIPPED {c[SKIPPED]}.", "",
                 "| id | s | status | lhs | rhs | rel. error | tol | note |",
                 "|---|---|---|---|---|---|---|---|"]
        num = lambda x, f: "" if x is None else format(x, f)  # noqa: E731
        for r in self.rows:
            note = r.detail or ("regularized" if r.regularized else "")
            lines.append(f"| {r.id} | {r.s or ''} | {r.status} | {num(r.lhs, '.15g')} | {num(r.rhs, '.15g')} "
                         f"| {num(r.rel_error, '.2e')} | {num(r.tolerance, 'g')} | {note.replace('|', '/')} |")
        return "\n".join(lines) + "\n"


def run_suite(records: Sequence[IdentityRecord], selector: Optional[str] = None,
              suite: str = "registry", parallelism: int = 1) -> VerificationReport:
    """Verify every record matching ``selector``; row order follows the registry."""
    chosen = [r for r in records if r.matches(selector)]
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if parallelism > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            groups: Iterable = list(pool.map(verify_identity, chosen))
    else:
        groups = [verify_identity(r) for r in chosen]
    rows = [row for g in groups for row in g]
    return VerificationReport(suite if not selector else f"{suite}[{selector}]", stamp, rows)
