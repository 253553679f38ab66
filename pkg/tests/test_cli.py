import json
import subprocess
import sys

import pytest

from kelattice.registry.cli import EXIT_FAIL, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eisenstein_family(capsys):
    code, out, _ = run(capsys, "eisenstein", "--n", "3")
    assert code == EXIT_OK
    assert "k*(1 + -2*k^2) * K^(5-s) K'^(s-1)" in out
    assert "pi^(5-s) Gamma(s) eta(s-5) lambda(s) / (2)" in out
    code, out, _ = run(capsys, "eisenstein", "--n", "6", "--json")
    doc = json.loads(out)
    assert doc["primitive_factor"] == "64"


def test_modular(capsys):
    code, out, _ = run(capsys, "modular", "--p", "2", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["constant"] == "3/20480 * Gamma(1/4)^16 * pi^-4"


def test_lattice_both(capsys):
    code, out, _ = run(capsys, "lattice", "--m", "1", "--n", "0", "--p", "1", "--s", "2", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["difference"] <= 1e-6


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "--alpha", "1", "--gamma", "2", "--json")
    assert code == EXIT_OK
    assert json.loads(out)["value"] == pytest.approx(7 * 1.2020569031595942 / 4, rel=1e-9)
    code, out, _ = run(capsys, "eval", "--alpha=-1/2", "--beta=-3/2", "--gamma=-1")
    assert code == EXIT_OK and out.startswith("1.7627471740390")
    code, out, _ = run(capsys, "eval", "--gamma", "5-s", "--delta", "s-1", "--alpha", "1",
                       "--poly", "1,0,-2", "--s", "2")
    assert code == EXIT_OK


def test_derive_e(capsys):
    code, out, _ = run(capsys, "derive-e", "--base", "e4case", "--json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["exact_check"] is True


def test_verify_table_json(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "theta-table", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["summary"]["FAIL"] == 0 and len({r["id"] for r in doc["rows"]}) == 38


def test_verify_empty_filter(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "nothing-matches")
    assert code == EXIT_OK and "PASS 0, FAIL 0" in out


def _failing_registry(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"id": "wrong", "citation": "t", "rhs": "2",
                                 "lhs": {"kind": "kintegral", "alpha": 1, "gamma_K": 2}}]))
    return str(path)


def test_verify_failure_exit_code(capsys, tmp_path):
    path = _failing_registry(tmp_path)
    code, out, _ = run(capsys, "verify", "--registry", path, "--no-generated")
    assert code == EXIT_FAIL and "FAIL 1" in out
    out_file = tmp_path / "report.md"
    code, _, _ = run(capsys, "report", "--registry", path, "--no-generated", "--output", str(out_file))
    assert code == EXIT_OK and "| wrong |" in out_file.read_text()


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == EXIT_USAGE
    assert run(capsys)[0] == EXIT_USAGE
    assert run(capsys, "eisenstein", "--n", "1")[0] == EXIT_USAGE
    assert run(capsys, "eval", "--factor", "nope")[0] == EXIT_USAGE
    assert run(capsys, "lattice", "--m", "x", "--n", "0", "--p", "1", "--s", "2")[0] == EXIT_USAGE
    assert run(capsys, "derive-e", "--base", "nope")[0] == EXIT_USAGE


def test_registry_errors(capsys, tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text("[{")
    assert run(capsys, "verify", "--registry", str(bad))[0] == EXIT_USAGE
    assert run(capsys, "list", "--registry", str(tmp_path / "missing.json"))[0] == EXIT_USAGE


def test_numeric_failure_exit_code(capsys):
    code, _, err = run(capsys, "eval", "--alpha=-2")
    assert code == EXIT_INTERNAL and "IntegrabilityError" in err


def test_list(capsys):
    code, out, _ = run(capsys, "list", "--filter", "generated", "--format", "json")
    ids = [r["id"] for r in json.loads(out)]
    assert code == EXIT_OK and "generated:theta-power:p4" in ids


def test_help_exit(capsys):
    assert run(capsys, "--help")[0] == 0


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "kelattice.registry.cli", "verify", "--filter", "first"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0 and "first:cubic" in proc.stdout
