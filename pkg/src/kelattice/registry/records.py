"""Identity records and the registry file loader."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, List, Optional, Tuple, Union

from ..errors import DuplicateIdError, RegistryParseError, SchemaError
from ..lattice import LatticeSumSpec
from ..quadrature import FACTORS, KIntegralSpec
from .expr import ClosedFormExpr, evaluate_closed_form, validate_tree

__all__ = [
    "TOLERANCES",
    "KIntegralLhs",
    "LatticeLhs",
    "KValueLhs",
    "IdentityRecord",
    "record_from_json",
    "load_registry",
    "parse_registry",
    "BUNDLED_REGISTRY",
]

TOLERANCES = {"STANDARD": 1e-8, "SINGULAR": 1e-7}
BUNDLED_REGISTRY = Path(__file__).with_name("data") / "registry.json"
LATTICE_METHODS = ("mellin", "dual", "direct")


def _rational(x, where: str) -> Fraction:
    try:
        if isinstance(x, float):
            raise TypeError
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise SchemaError(f"{where}: expected a rational, got {x!r}") from exc


@dataclass(frozen=True)
class KIntegralLhs:
    """prefactor * int_0^1 poly * factors * k^alpha k'^beta K^gamma_K K'^delta_Kp dk.

    The exponents and the prefactor are expression trees that may use s.
    """

    alpha: Any = 0
    beta: Any = 0
    gamma_K: Any = 0
    delta_Kp: Any = 0
    poly: Optional[Tuple[Fraction, ...]] = None
    factors: Tuple[Tuple[str, Fraction], ...] = ()
    prefactor: Any = 1

    kind = "kintegral"

    def spec(self, s: Optional[float]) -> KIntegralSpec:
        ev = lambda e: evaluate_closed_form(e, s)  # noqa: E731
        return KIntegralSpec(
            alpha=Fraction(ev(self.alpha)).limit_denominator(10 ** 6),
            beta=Fraction(ev(self.beta)).limit_denominator(10 ** 6),
            gamma_K=ev(self.gamma_K),
            delta_Kp=ev(self.delta_Kp),
            poly=self.poly,
            factors=self.factors,
            prefactor=ev(self.prefactor),
        )

    def to_json(self) -> dict:
        out = {"kind": self.kind, "alpha": self.alpha, "beta": self.beta,
               "gamma_K": self.gamma_K, "delta_Kp": self.delta_Kp}
        if self.poly is not None:
            out["poly"] = [str(c) for c in self.poly]
        if self.factors:
            out["factors"] = [[n, str(p)] for n, p in self.factors]
        out["prefactor"] = self.prefactor
        return out


@dataclass(frozen=True)
class LatticeLhs:
    """prefactor * L(m, n, p; s) evaluated by ``method``."""

    m: Fraction
    n: Fraction
    p: Fraction
    method: str = "mellin"
    prefactor: Any = 1

    kind = "lattice"

    def spec(self, s: float) -> LatticeSumSpec:
        return LatticeSumSpec(self.m, self.n, self.p, s)

    def to_json(self) -> dict:
        return {"kind": self.kind, "m": str(self.m), "n": str(self.n), "p": str(self.p),
                "method": self.method, "prefactor": self.prefactor}


@dataclass(frozen=True)
class KValueLhs:
    """K(k) at a single modulus given as an expression (used for singular values)."""

    k: Any

    kind = "kvalue"

    def to_json(self) -> dict:
        return {"kind": self.kind, "k": self.k}


Lhs = Union[KIntegralLhs, LatticeLhs, KValueLhs]


@dataclass(frozen=True)
class IdentityRecord:
    """lhs(s) = rhs(s) at each s in ``s_values`` (or once when it is None)."""

    id: str
    lhs: Lhs
    rhs: ClosedFormExpr
    citation: str
    s_values: Optional[Tuple[Fraction, ...]] = None
    tolerance_class: str = "STANDARD"
    regularize_s: Tuple[Fraction, ...] = ()
    skipped_s: Tuple[Tuple[Fraction, str], ...] = ()
    tags: Tuple[str, ...] = ()
    note: str = ""

    @property
    def tolerance(self) -> float:
        return TOLERANCES[self.tolerance_class]

    @property
    def generated(self) -> bool:
        return "GENERATED" in self.tags

    def matches(self, selector: Optional[str]) -> bool:
        """Selector match on id, id prefix or tag; None and "" match everything."""
        if not selector:
            return True
        return any(sel == self.id or self.id.startswith(sel + ":") or sel in self.tags
                   for sel in selector.split(","))

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "citation": self.citation,
            "tags": list(self.tags),
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "s_values": None if self.s_values is None else [str(s) for s in self.s_values],
            "tolerance_class": self.tolerance_class,
        }
        if self.regularize_s:
            out["regularize_s"] = [str(s) for s in self.regularize_s]
        if self.skipped_s:
            out["skipped_s"] = [{"s": str(s), "reason": r} for s, r in self.skipped_s]
        if self.note:
            out["note"] = self.note
        return out


def _lhs_from_json(obj: dict, where: str) -> Lhs:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: lhs must be an object")
    kind = obj.get("kind")
    if kind == "kintegral":
        for key in ("alpha", "beta", "gamma_K", "delta_Kp", "prefactor"):
            if key in obj:
                validate_tree(obj[key], f"{where}.lhs.{key}")
        poly = obj.get("poly")
        if poly is not None:
            if not isinstance(poly, list) or not poly:
                raise SchemaError(f"{where}: poly must be a nonempty list")
            poly = tuple(_rational(c, f"{where}.lhs.poly") for c in poly)
        factors = []
        for item in obj.get("factors", []):
            if not (isinstance(item, list) and len(item) == 2 and item[0] in FACTORS):
                raise SchemaError(f"{where}: bad factor entry {item!r}")
            factors.append((item[0], _rational(item[1], f"{where}.lhs.factors")))
        return KIntegralLhs(obj.get("alpha", 0), obj.get("beta", 0), obj.get("gamma_K", 0),
                            obj.get("delta_Kp", 0), poly, tuple(factors), obj.get("prefactor", 1))
    if kind == "lattice":
        try:
            m, n, p = (_rational(obj[x], f"{where}.lhs.{x}") for x in ("m", "n", "p"))
        except KeyError as exc:
            raise SchemaError(f"{where}: lattice lhs needs m, n and p") from exc
        method = obj.get("method", "mellin")
        if method not in LATTICE_METHODS:
            raise SchemaError(f"{where}: unknown lattice method {method!r}")
        pre = obj.get("prefactor", 1)
        validate_tree(pre, f"{where}.lhs.prefactor")
        return LatticeLhs(m, n, p, method, pre)
    if kind == "kvalue":
        if "k" not in obj:
            raise SchemaError(f"{where}: kvalue lhs needs k")
        validate_tree(obj["k"], f"{where}.lhs.k")
        return KValueLhs(obj["k"])
    raise SchemaError(f"{where}: unknown lhs kind {kind!r}")


def record_from_json(obj: Any, index: int = 0) -> IdentityRecord:
    """Validate one JSON object and build an `IdentityRecord`."""
    if not isinstance(obj, dict):
        raise SchemaError(f"record #{index}: expected an object")
    rid = obj.get("id")
    if not isinstance(rid, str) or not rid:
        raise SchemaError(f"record #{index}: missing id")
    where = f"record {rid!r}"
    for key in ("lhs", "rhs", "citation"):
        if key not in obj:
            raise SchemaError(f"{where}: missing field {key!r}")
    if not isinstance(obj["citation"], str) or not obj["citation"]:
        raise SchemaError(f"{where}: citation must be a nonempty string")
    lhs = _lhs_from_json(obj["lhs"], where)
    validate_tree(obj["rhs"], f"{where}.rhs")
    rhs = ClosedFormExpr(obj["rhs"], obj["citation"])
    sv = obj.get("s_values")
    if sv is not None:
        if not isinstance(sv, list):
            raise SchemaError(f"{where}: s_values must be a list or null")
        sv = tuple(_rational(s, f"{where}.s_values") for s in sv)
    elif isinstance(lhs, LatticeLhs):
        raise SchemaError(f"{where}: lattice records need s_values")
    tol = obj.get("tolerance_class", "STANDARD")
    if tol not in TOLERANCES:
        raise SchemaError(f"{where}: unknown tolerance class {tol!r}")
    reg = tuple(_rational(s, f"{where}.regularize_s") for s in obj.get("regularize_s", []))
    skipped = []
    for item in obj.get("skipped_s", []):
        if not isinstance(item, dict) or "s" not in item:
            raise SchemaError(f"{where}: skipped_s entries need an 's' field")
        skipped.append((_rational(item["s"], f"{where}.skipped_s"), str(item.get("reason", ""))))
    tags = obj.get("tags", [])
    if not isinstance(tags, list) or not all(isinstance(t, str) for t in tags):
        raise SchemaError(f"{where}: tags must be a list of strings")
    return IdentityRecord(rid, lhs, rhs, obj["citation"], sv, tol, reg, tuple(skipped),
                          tuple(tags), str(obj.get("note", "")))


def parse_registry(text: str, source: str = "<string>") -> List[IdentityRecord]:
    """Parse registry JSON text. An empty or whitespace-only text is an empty registry."""
    if not text.strip():
        return []
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RegistryParseError(f"{source}: {exc}") from exc
    if not isinstance(data, list):
        raise SchemaError(f"{source}: top level must be an array of records")
    records, seen = [], set()
    for i, obj in enumerate(data):
        rec = record_from_json(obj, i)
        if rec.id in seen:
            raise DuplicateIdError(f"{source}: duplicate id {rec.id!r}")
        seen.add(rec.id)
        records.append(rec)
    return records


def load_registry(path: Union[str, Path, None] = None, include_generated: bool = True) -> List[IdentityRecord]:
    """Load and validate a registry file (the bundled one by default).

    Records emitted by the symbolic module are appended when
    ``include_generated`` is true; their ids must not collide with the file.
    """
    path = BUNDLED_REGISTRY if path is None else Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise RegistryParseError(f"cannot read {path}: {exc}") from exc
    records = parse_registry(text, str(path))
    if include_generated:
        from .generated import generated_records

        ids = {r.id for r in records}
        for rec in generated_records():
            if rec.id in ids:
                raise DuplicateIdError(f"generated id {rec.id!r} collides with {path}")
            records.append(rec)
    return records
