"""Command-line interface: ``kelattice <subcommand> ...``.

Exit codes: 0 success, 1 usage or registry input error, 2 verification
failure, 3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from ..errors import (DuplicateIdError, KelatticeError, RegistryParseError, SchemaError)

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INTERNAL = 0, 1, 2, 3

__all__ = ["main", "build_parser", "EXIT_OK", "EXIT_USAGE", "EXIT_FAIL", "EXIT_INTERNAL"]


class UsageError(Exception):
    """Bad command-line input."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit with status 2
        raise UsageError(f"{self.prog}: {message}")


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kelattice", description="Elliptic-integral and lattice-sum identity toolkit.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    e = sub.add_parser("eval", help="evaluate a K-integral given by exponents and factors")
    e.add_argument("--alpha", default="0", help="exponent of k (expression, may use s)")
    e.add_argument("--beta", default="0", help="exponent of k'")
    e.add_argument("--gamma", default="0", help="exponent of K")
    e.add_argument("--delta", default="0", help="exponent of K'")
    e.add_argument("--poly", help="polynomial coefficients in k, lowest first, comma separated")
    e.add_argument("--factor", action="append", default=[], metavar="NAME[:POWER]",
                   help="named factor, repeatable")
    e.add_argument("--prefactor", default="1", help="constant multiplier (expression)")
    e.add_argument("--s", type=_rational, help="value of s used in the expressions")
    e.add_argument("--tol", type=float, default=1e-12)
    e.add_argument("--json", action="store_true")

    la = sub.add_parser("lattice", help="evaluate L(m, n, p; s)")
    for name in ("m", "n", "p"):
        la.add_argument(f"--{name}", type=_rational, required=True)
    la.add_argument("--s", type=_rational, required=True)
    la.add_argument("--method", choices=("direct", "mellin", "dual", "both"), default="both")
    la.add_argument("--radius", type=int, default=200, help="base radius of the direct sum")
    la.add_argument("--json", action="store_true")

    ei = sub.add_parser("eisenstein", help="exact E_2n data and the even-K integral family")
    ei.add_argument("--n", type=int, required=True)
    ei.add_argument("--json", action="store_true")

    mo = sub.add_parser("modular", help="exact data for the odd-K integral from weight 4p+1 forms")
    mo.add_argument("--p", type=int, required=True)
    mo.add_argument("--json", action="store_true")

    de = sub.add_parser("derive-e", help="differentiate a q-identity to produce E identities")
    de.add_argument("--base", required=True, help="base identity: e4case, theta2^4, theta2^2 or constant")
    de.add_argument("--times", type=int, default=1)
    de.add_argument("--order", type=int, default=20, help="q-series truncation order")
    de.add_argument("--json", action="store_true")

    for name, hlp in (("verify", "verify registry identities; exit 2 on any failure"),
                      ("report", "write a verification report; exit 0 even with failures")):
        v = sub.add_parser(name, help=hlp)
        v.add_argument("--registry", help="registry JSON file (bundled one by default)")
        v.add_argument("--filter", help="id, id prefix or tag; comma separated")
        v.add_argument("--format", choices=("json", "md"), default="md")
        v.add_argument("--parallel", type=int, default=1)
        v.add_argument("--no-generated", action="store_true", help="skip records from the symbolic layer")
        if name == "report":
            v.add_argument("--output", help="write to this file instead of stdout")

    li = sub.add_parser("list", help="list registry ids with citations")
    li.add_argument("--registry")
    li.add_argument("--filter")
    li.add_argument("--format", choices=("json", "md"), default="md")
    li.add_argument("--no-generated", action="store_true")
    return p


# ----------------------------------------------------------------------
# subcommands


def _emit(obj, as_json: bool, text: str) -> None:
    print(json.dumps(obj, indent=2, default=str) if as_json else text)


def _cmd_eval(a) -> int:
    from ..quadrature import FACTORS, k_integral_detail
    from .expr import evaluate_closed_form
    from .records import KIntegralLhs

    poly = None
    if a.poly:
        try:
            poly = tuple(Fraction(c.strip()) for c in a.poly.split(","))
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --poly: {a.poly!r}") from exc
    factors = []
    for item in a.factor:
        name, _, power = item.partition(":")
        if name not in FACTORS:
            raise UsageError(f"unknown factor {name!r}; choose from {', '.join(sorted(FACTORS))}")
        factors.append((name, Fraction(power or 1)))
    try:
        lhs = KIntegralLhs(a.alpha, a.beta, a.gamma, a.delta, poly, tuple(factors), a.prefactor)
        s = None if a.s is None else float(a.s)
        spec = lhs.spec(s)
    except SchemaError as exc:
        raise UsageError(str(exc)) from exc
    res = k_integral_detail(spec, a.tol)
    out = {"value": res.value, "error": res.error, "level": res.level, "nodes": res.nodes,
           "spec": {"alpha": str(spec.alpha), "beta": str(spec.beta), "gamma_K": spec.gamma_K,
                    "delta_Kp": spec.delta_Kp, "prefactor": evaluate_closed_form(a.prefactor, s)}}
    _emit(out, a.json, f"{res.value:.17g}  (error estimate {res.error:.1e}, level {res.level})")
    return EXIT_OK


def _cmd_lattice(a) -> int:
    from ..lattice import LatticeSumSpec, lattice_direct, lattice_mellin_dual, lattice_value

    spec = LatticeSumSpec(a.m, a.n, a.p, float(a.s))
    out, lines = {"m": str(a.m), "n": str(a.n), "p": str(a.p), "s": str(a.s)}, []
    if a.method in ("mellin", "both"):
        out["mellin"] = lattice_value(spec)
        lines.append(f"mellin  {out['mellin']:.17g}")
    if a.method == "dual":
        out["dual"] = lattice_mellin_dual(spec)
        lines.append(f"dual    {out['dual']:.17g}")
    if a.method in ("direct", "both"):
        v, err = lattice_direct(spec, a.radius)
        out["direct"], out["direct_error"] = v, err
        lines.append(f"direct  {v:.17g}  (error bound {err:.1e})")
    if a.method == "both":
        out["difference"] = abs(out["mellin"] - out["direct"])
        lines.append(f"|mellin - direct| = {out['difference']:.2e}")
    _emit(out, a.json, "\n".join(lines))
    return EXIT_OK


def _wpoly_str(wp) -> str:
    parts = []
    for i, j, c in wp.monomials:
        mono = "*".join(x for x in (f"E4^{i}" if i else "", f"E6^{j}" if j else "") if x)
        parts.append(f"({c})*{mono}")
    return " + ".join(parts)


def _cmd_eisenstein(a) -> int:
    from ..symbolic import compute_pn, compute_Qn, eisenstein_as_E4E6, pn_mellin_scale

    n = a.n
    if n < 2:
        raise UsageError("--n must be at least 2")
    wp = eisenstein_as_E4E6(2 * n)
    Q = compute_Qn(n)
    p = compute_pn(n)
    c, P = p.primitive()
    w = 2 * n - 1
    family = (f"int_0^1 k*({P}) * K^({w}-s) K'^(s-1) dk = "
              f"pi^({w}-s) Gamma(s) eta(s-{w}) lambda(s) / ({c})")
    out = {"n": n, "P_n": _wpoly_str(wp), "Q_n": repr(Q), "p_n": repr(p), "mellin_scale": str(pn_mellin_scale(n)),
           "primitive": repr(P), "primitive_factor": str(c), "family": family}
    text = "\n".join([f"P_{n}(E4, E6) = {out['P_n']}",
                      f"Q_{n}(k) = {out['Q_n']}",
                      f"p_{n}(k) = {out['p_n']}",
                      f"p_{n} = ({c}) * ({P})",
                      family])
    _emit(out, a.json, text)
    return EXIT_OK


def _cmd_modular(a) -> int:
    from ..symbolic import compute_gp

    if a.p < 1:
        raise UsageError("--p must be at least 1")
    g = compute_gp(a.p)
    c = g.constant
    stmt = (f"int_0^1 k*({g.P}) * K'^{4 * a.p - 1} dk = {c.rational} * Gamma(1/4)^{c.gamma_power} "
            f"* pi^{c.pi_power}")
    out = {"p": a.p, "G_p": repr(g.G), "g_p": repr(g.g), "scale": str(g.scale), "P": repr(g.P),
           "constant": str(c), "constant_value": c.value(), "statement": stmt}
    text = "\n".join([f"G_{a.p}(k) = {out['G_p']}   (f_{4 * a.p} = G K^{4 * a.p + 1} / pi^{4 * a.p + 1})",
                      f"g_{a.p}(k) = {out['g_p']} = ({g.scale}) * k * ({g.P})",
                      stmt, f"  = {c.value():.17g}"])
    _emit(out, a.json, text)
    return EXIT_OK


def _cmd_derive_e(a) -> int:
    from ..symbolic import BASE_IDENTITIES, derive_E_identity

    if a.base not in BASE_IDENTITIES:
        raise UsageError(f"unknown base {a.base!r}; choose from {', '.join(sorted(BASE_IDENTITIES))}")
    if a.times < 0:
        raise UsageError("--times must be nonnegative")
    ident = derive_E_identity(a.base, a.times, a.order)
    ok = ident.check()
    resid = ident.numeric_residual(0.3)
    out = {"base": a.base, "times": a.times, "expr": repr(ident.expr),
           "series_head": [str(c) for c in ident.series.coeffs[:8]],
           "exact_check": ok, "numeric_residual_k0.3": resid}
    text = "\n".join([f"(q d/dq)^{a.times} applied to {a.base}:",
                      f"  closed form: {ident.expr!r}",
                      f"  q-series coefficients: {', '.join(out['series_head'])}, ...",
                      f"  exact q-series check to order {a.order}: {'ok' if ok else 'FAILED'}",
                      f"  numeric residual at k = 0.3: {resid:.2e}"])
    _emit(out, a.json, text)
    return EXIT_OK if ok else EXIT_FAIL


def _load(a):
    from .records import load_registry

    return load_registry(a.registry, include_generated=not a.no_generated)


def _cmd_verify(a, report_mode: bool) -> int:
    from .verify import run_suite

    rep = run_suite(_load(a), a.filter, parallelism=max(1, a.parallel))
    text = rep.to_json() if a.format == "json" else rep.to_markdown()
    if report_mode and a.output:
        with open(a.output, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    if not report_mode and not rep.ok:
        return EXIT_FAIL
    return EXIT_OK


def _cmd_list(a) -> int:
    recs = [r for r in _load(a) if r.matches(a.filter)]
    if a.format == "json":
        print(json.dumps([{"id": r.id, "citation": r.citation, "tags": list(r.tags)} for r in recs], indent=2))
    else:
        for r in recs:
            print(f"{r.id}\t{r.citation}")
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Run the CLI and return the exit code."""
    try:
        args = build_parser().parse_args(argv)
        cmd = args.command
        if cmd == "eval":
            return _cmd_eval(args)
        if cmd == "lattice":
            return _cmd_lattice(args)
        if cmd == "eisenstein":
            return _cmd_eisenstein(args)
        if cmd == "modular":
            return _cmd_modular(args)
        if cmd == "derive-e":
            return _cmd_derive_e(args)
        if cmd in ("verify", "report"):
            return _cmd_verify(args, cmd == "report")
        return _cmd_list(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RegistryParseError, SchemaError, DuplicateIdError) as exc:
        print(f"registry error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KelatticeError, ArithmeticError, ValueError, OverflowError) as exc:
        print(f"numeric failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
