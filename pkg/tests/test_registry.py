import json
import math

import pytest

from kelattice.errors import DuplicateIdError, PoleError, RegistryParseError, SchemaError
from kelattice.quadrature import KIntegralSpec, k_integral
from kelattice.registry import (BUNDLED_REGISTRY, FAIL, PASS, SKIPPED, ClosedFormExpr, evaluate_closed_form,
                                load_registry, parse_expr, parse_registry, run_suite, to_infix, verify_identity)
from kelattice.registry.catalog import catalog_json, coverage_json
from kelattice.registry.generated import EISENSTEIN_RANGE, THETA_POWER_RANGE, generated_records

G8 = math.gamma(0.25) ** 8


@pytest.fixture(scope="module")
def records():
    return load_registry()


@pytest.fixture(scope="module")
def report(records):
    return run_suite(records)


# ---------------------------------------------------------------- expressions

def test_expression_values():
    assert evaluate_closed_form("pi^3/16") == pytest.approx(math.pi ** 3 / 16, rel=1e-15)
    assert evaluate_closed_form("gamma(1/4)^8/(128*pi^2)") == pytest.approx(
        k_integral(KIntegralSpec(0, 0, 0, 3)), rel=1e-8)
    quarter = k_integral(KIntegralSpec(0.75, -0.75, 1, 0))
    assert evaluate_closed_form("pi^2/12*sqrt(5 + 1/sqrt(2))") == pytest.approx(quarter, rel=1e-8)
    assert evaluate_closed_form("G") == pytest.approx(0.915965594177219, rel=1e-14)


def test_expression_parameter_and_poles():
    e = ClosedFormExpr.parse("pi^(3 - s)*gamma(s)*eta(s - 3)*lam(s)", "family")
    # pi Gamma(2) eta(-1) lambda(2) with eta(-1) = 1/4 and lambda(2) = pi^2/8
    assert e.evaluate(2.0) == pytest.approx(math.pi * 0.25 * math.pi ** 2 / 8, rel=1e-13)
    with pytest.raises(PoleError):
        evaluate_closed_form("gamma(s)", 0.0)


def test_infix_round_trip():
    for text in ("pi^(2 - s)*gamma(s + 1)*lam(s - 1)*lam(s)", "3/20480*gamma(1/4)^16*pi^(-4)",
                 "pi^3/16*(1 + 2*pfq([1/2, 1/2, 1/2, 1/2], [1, 1, 1]))"):
        tree = parse_expr(text)
        again = parse_expr(to_infix(tree))
        assert evaluate_closed_form(again, 2.5) == pytest.approx(evaluate_closed_form(tree, 2.5), rel=1e-15)


def test_bad_expressions():
    with pytest.raises(SchemaError):
        parse_expr("foo(2)")
    with pytest.raises(SchemaError):
        parse_expr("import os")


# ---------------------------------------------------------------- loading

def test_bundled_registry_size(records):
    table = [r for r in records if "theta-table" in r.tags]
    others = [r for r in records if "theta-table" not in r.tags]
    assert len(table) >= 38
    assert len(others) >= 30
    assert all(r.citation for r in records)


def test_bundled_files_in_sync_with_catalog():
    assert json.loads(BUNDLED_REGISTRY.read_text()) == json.loads(catalog_json())
    assert json.loads(BUNDLED_REGISTRY.with_name("coverage.json").read_text()) == json.loads(coverage_json())


def test_coverage_entries_resolve(records):
    ids = {r.id for r in records}
    for entry in json.loads(coverage_json()):
        assert entry.get("records") or entry.get("out_of_scope"), entry["display"]
        for rid in entry.get("records", []):
            assert rid in ids or any(i.startswith(rid + ":") for i in ids), rid


def test_generated_records(records):
    gen = [r for r in records if r.generated]
    assert len(gen) == len(EISENSTEIN_RANGE) + len(THETA_POWER_RANGE)
    assert gen == list(generated_records())


def test_empty_file(tmp_path):
    path = tmp_path / "empty.json"
    path.write_text("")
    assert load_registry(path, include_generated=False) == []
    assert parse_registry("   \n") == []


def _record(rid="x", alpha=1):
    return {"id": rid, "citation": "test", "lhs": {"kind": "kintegral", "alpha": alpha, "gamma_K": 2},
            "rhs": "7/4*zeta(3)", "s_values": None}


def test_malformed_exponent_names_record():
    with pytest.raises(SchemaError, match="bad-alpha"):
        parse_registry(json.dumps([_record("bad-alpha", alpha={"op": "nope", "args": []})]))
    with pytest.raises(SchemaError, match="syntax-alpha"):
        parse_registry(json.dumps([_record("syntax-alpha", alpha="1 +")]))


def test_schema_errors():
    with pytest.raises(SchemaError):
        parse_registry(json.dumps({"id": "x"}))
    with pytest.raises(SchemaError, match="lat"):
        parse_registry(json.dumps([{"id": "lat", "citation": "c", "rhs": "1",
                                    "lhs": {"kind": "lattice", "m": 1, "n": 0, "p": 1}}]))
    with pytest.raises(RegistryParseError):
        parse_registry("[{")
    with pytest.raises(RegistryParseError):
        load_registry("/nonexistent/registry.json")


def test_duplicate_ids(tmp_path):
    with pytest.raises(DuplicateIdError):
        parse_registry(json.dumps([_record("a"), _record("a")]))
    path = tmp_path / "clash.json"
    path.write_text(json.dumps([_record("generated:eisenstein:n2")]))
    with pytest.raises(DuplicateIdError):
        load_registry(path)


def test_selectors(records):
    rec = next(r for r in records if r.id == "generated:eisenstein:n3")
    assert rec.matches(None) and rec.matches("")
    assert rec.matches("generated:eisenstein") and rec.matches("generated")
    assert rec.matches("eisenstein") and rec.matches("foo,GENERATED")
    assert not rec.matches("generated:eisen")


# ---------------------------------------------------------------- verification

def test_single_record_rows():
    rec = parse_registry(json.dumps([_record()]))[0]
    (row,) = verify_identity(rec)
    assert row.status == PASS and row.rel_error < 1e-12


def test_failure_is_a_row_not_a_crash():
    bad = _record("diverges")
    bad["lhs"]["alpha"] = -3
    (row,) = verify_identity(parse_registry(json.dumps([bad]))[0])
    assert row.status == FAIL and "IntegrabilityError" in row.detail
    wrong = _record("wrong")
    wrong["rhs"] = "2*zeta(3)"
    (row,) = verify_identity(parse_registry(json.dumps([wrong]))[0])
    assert row.status == FAIL and "exceeds" in row.detail


def test_zero_rhs_uses_absolute_error(records):
    rows = [r for r in run_suite(records, "generated:eisenstein:n2").rows]
    assert rows and all(r.status == PASS for r in rows)
    rec = generated_records()[1]  # n = 3: eta(-2) = 0 at s = 3
    zero = [row for row in verify_identity(type(rec)(**{**rec.__dict__, "s_values": (3,)}))]
    assert zero[0].rhs == 0.0 and zero[0].status == PASS


def test_full_suite_passes(report):
    assert report.counts[FAIL] == 0, [(r.id, r.s, r.detail) for r in report.failures()]
    assert report.counts[PASS] > 150
    assert all(r.detail for r in report.rows if r.status == SKIPPED)


def test_theta_table_filter(records):
    rep = run_suite(records, "theta-table")
    ids = {r.id for r in rep.rows}
    assert len(ids) == 38 and rep.ok


def test_eisenstein_filter(records):
    rep = run_suite(records, "generated:eisenstein")
    assert {r.id for r in rep.rows} == {f"generated:eisenstein:n{n}" for n in range(2, 7)}
    assert {r.s for r in rep.rows} == {"1", "2"}
    assert rep.ok and all(r.regularized for r in rep.rows if r.s == "1")


def test_empty_selection(records):
    rep = run_suite(records, "no-such-thing")
    assert rep.rows == [] and rep.ok


def _strip_timing(doc):
    doc = json.loads(doc)
    doc.pop("timestamp")
    for row in doc["rows"]:
        row.pop("seconds")
    return doc


def test_report_determinism(records):
    a = run_suite(records, "theta-table,generated", parallelism=1)
    b = run_suite(records, "theta-table,generated", parallelism=4)
    assert _strip_timing(a.to_json()) == _strip_timing(b.to_json())


def test_markdown_report(records):
    md = run_suite(records, "first").to_markdown()
    assert md.startswith("# Verification report") and "| first:cubic |" in md
