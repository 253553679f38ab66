"""Closed-form expression trees: JSON form, infix parsing and evaluation.

A tree node is one of

* a JSON number, read as an exact rational;
* a JSON string, parsed as an infix expression (see `parse_expr`);
* ``{"op": name, "args": [...]}`` for an operator;
* ``{"const": name, "args": [...], "cite": text}`` for a leaf.

Leaves: ``rat`` (one string argument "p/q"), ``s`` (the free parameter),
``pi``, ``catalan``, ``gamma`` (one argument), ``L`` (character label and
argument) and ``pfq`` (two lists of rational strings; argument z = 1).
Operators: ``add``, ``sub``, ``mul``, ``div``, ``neg``, ``pow``, ``sqrt``,
``log``.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from ..errors import SchemaError
from ..lseries import CHARACTERS, lvalue
from ..specfun import gamma_fn, hypergeometric_pfq

__all__ = ["ClosedFormExpr", "parse_expr", "evaluate_closed_form", "validate_tree", "to_infix"]

OPS = {"add", "sub", "mul", "div", "neg", "pow", "sqrt", "log"}
LEAVES = {"rat", "s", "pi", "catalan", "gamma", "L", "pfq"}

# infix function names for L-series
_L_NAMES = {
    "zeta": "ZETA", "eta": "ETA", "lam": "LAMBDA", "beta": "BETA",
    "Lm3": "L-3", "Lm8": "L-8", "L8": "L8", "L12": "L12", "Lm24": "L-24", "L24": "L24",
}
_L_INFIX = {v: k for k, v in _L_NAMES.items()}
_BINOPS = {ast.Add: "add", ast.Sub: "sub", ast.Mult: "mul", ast.Div: "div", ast.Pow: "pow"}


def _rat(x) -> dict:
    return {"const": "rat", "args": [str(Fraction(x))]}


def _as_rat(node) -> Optional[Fraction]:
    if isinstance(node, dict) and node.get("const") == "rat":
        return Fraction(node["args"][0])
    return None


def parse_expr(text: str) -> Any:
    """Parse infix text such as ``"pi**s/gamma(s) * beta(s)"`` into a tree.

    Uses Python expression syntax via `ast`; ``^`` is accepted for ``**``.
    Rational arithmetic between literals is folded exactly.
    """
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval").body
    except SyntaxError as exc:
        raise SchemaError(f"cannot parse expression {text!r}: {exc.msg}") from exc
    return _from_ast(tree, text)


def _from_ast(node, text):
    if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
        if isinstance(node.value, float):
            raise SchemaError(f"float literal in {text!r}; write rationals as p/q")
        return _rat(node.value)
    if isinstance(node, ast.Name):
        if node.id in ("s", "pi"):
            return {"const": node.id}
        if node.id == "G":
            return {"const": "catalan"}
        raise SchemaError(f"unknown name {node.id!r} in {text!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _from_ast(node.operand, text)
        if isinstance(node.op, ast.UAdd):
            return inner
        r = _as_rat(inner)
        return _rat(-r) if r is not None else {"op": "neg", "args": [inner]}
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        a, b = _from_ast(node.left, text), _from_ast(node.right, text)
        op = _BINOPS[type(node.op)]
        ra, rb = _as_rat(a), _as_rat(b)
        if ra is not None and rb is not None:
            if op == "add":
                return _rat(ra + rb)
            if op == "sub":
                return _rat(ra - rb)
            if op == "mul":
                return _rat(ra * rb)
            if op == "div":
                return _rat(ra / rb)
            if op == "pow" and rb.denominator == 1:
                return _rat(ra ** int(rb))
        return {"op": op, "args": [a, b]}
    if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
        name = node.func.id
        args = node.args
        if name in ("sqrt", "log", "gamma") and len(args) == 1:
            inner = _from_ast(args[0], text)
            if name == "gamma":
                return {"const": "gamma", "args": [inner]}
            return {"op": name, "args": [inner]}
        if name in _L_NAMES and len(args) == 1:
            return {"const": "L", "args": [_L_NAMES[name], _from_ast(args[0], text)]}
        if name == "pfq" and len(args) == 2:
            lists = []
            for a in args:
                if not isinstance(a, ast.List):
                    raise SchemaError(f"pfq expects two lists in {text!r}")
                vals = []
                for e in a.elts:
                    r = _as_rat(_from_ast(e, text))
                    if r is None:
                        raise SchemaError(f"pfq parameters must be rational in {text!r}")
                    vals.append(str(r))
                lists.append(vals)
            return {"const": "pfq", "args": lists}
    raise SchemaError(f"unsupported construct in {text!r}")


def validate_tree(node, where: str = "expression") -> None:
    """Raise `SchemaError` if ``node`` is not a well-formed tree."""
    if isinstance(node, bool):
        raise SchemaError(f"{where}: boolean is not an expression")
    if isinstance(node, (int, str)):
        if isinstance(node, str):
            try:
                parse_expr(node)
            except SchemaError as exc:
                raise SchemaError(f"{where}: {exc}") from exc
        return
    if isinstance(node, float):
        raise SchemaError(f"{where}: float literal; use a rational string")
    if not isinstance(node, dict):
        raise SchemaError(f"{where}: expected number, string or object, got {type(node).__name__}")
    if "op" in node:
        if node["op"] not in OPS:
            raise SchemaError(f"{where}: unknown operator {node['op']!r}")
        args = node.get("args")
        want = 1 if node["op"] in ("neg", "sqrt", "log") else 2
        if not isinstance(args, list) or len(args) != want:
            raise SchemaError(f"{where}: operator {node['op']!r} takes {want} argument(s)")
        for a in args:
            validate_tree(a, where)
        return
    if "const" in node:
        name, args = node["const"], node.get("args", [])
        if name not in LEAVES:
            raise SchemaError(f"{where}: unknown constant {name!r}")
        if name == "rat":
            try:
                Fraction(args[0])
            except (IndexError, ValueError, ZeroDivisionError, TypeError) as exc:
                raise SchemaError(f"{where}: bad rational {args!r}") from exc
        elif name == "gamma":
            if len(args) != 1:
                raise SchemaError(f"{where}: gamma takes one argument")
            validate_tree(args[0], where)
        elif name == "L":
            if len(args) != 2 or args[0] not in CHARACTERS:
                raise SchemaError(f"{where}: L needs a known character label and an argument")
            validate_tree(args[1], where)
        elif name == "pfq":
            if len(args) != 2 or not all(isinstance(a, list) for a in args):
                raise SchemaError(f"{where}: pfq needs two parameter lists")
            for a in args[0] + args[1]:
                try:
                    Fraction(a)
                except (ValueError, ZeroDivisionError, TypeError) as exc:
                    raise SchemaError(f"{where}: bad pfq parameter {a!r}") from exc
        return
    raise SchemaError(f"{where}: object needs an 'op' or 'const' key")


def _eval(node, s):
    if isinstance(node, int):
        return float(node)
    if isinstance(node, str):
        return _eval(parse_expr(node), s)
    if "op" in node:
        op, args = node["op"], node["args"]
        v = [_eval(a, s) for a in args]
        if op == "add":
            return v[0] + v[1]
        if op == "sub":
            return v[0] - v[1]
        if op == "mul":
            return v[0] * v[1]
        if op == "div":
            return v[0] / v[1]
        if op == "neg":
            return -v[0]
        if op == "pow":
            return v[0] ** v[1]
        if op == "sqrt":
            return math.sqrt(v[0])
        if op == "log":
            return math.log(v[0])
    name, args = node["const"], node.get("args", [])
    if name == "rat":
        return float(Fraction(args[0]))
    if name == "s":
        if s is None:
            raise SchemaError("expression depends on s but no s was given")
        return float(s)
    if name == "pi":
        return math.pi
    if name == "catalan":
        return lvalue("BETA", 2.0)
    if name == "gamma":
        return gamma_fn(_eval(args[0], s))
    if name == "L":
        return lvalue(args[0], _eval(args[1], s))
    if name == "pfq":
        return hypergeometric_pfq([Fraction(a) for a in args[0]], [Fraction(b) for b in args[1]], 1.0)
    raise SchemaError(f"unknown node {node!r}")


def _depends_on_s(node) -> bool:
    if isinstance(node, int):
        return False
    if isinstance(node, str):
        return _depends_on_s(parse_expr(node))
    if "op" in node:
        return any(_depends_on_s(a) for a in node["args"])
    name, args = node["const"], node.get("args", [])
    if name == "s":
        return True
    if name == "gamma":
        return _depends_on_s(args[0])
    if name == "L":
        return _depends_on_s(args[1])
    return False


_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "neg": 3, "pow": 4}


def to_infix(node, parent: int = 0) -> str:
    """Readable infix form of a tree (inverse of `parse_expr` up to grouping)."""
    if isinstance(node, int):
        return str(node)
    if isinstance(node, str):
        return node
    if "op" in node:
        op, args = node["op"], node["args"]
        if op in ("sqrt", "log"):
            return f"{op}({to_infix(args[0])})"
        p = _PREC[op]
        if op == "neg":
            out = "-" + to_infix(args[0], p)
        else:
            sym = {"add": " + ", "sub": " - ", "mul": "*", "div": "/", "pow": "^"}[op]
            out = to_infix(args[0], p) + sym + to_infix(args[1], p + (op != "pow"))
        return f"({out})" if p < parent or (op == "pow" and parent == p) else out
    name, args = node["const"], node.get("args", [])
    if name == "rat":
        r = Fraction(args[0])
        txt = str(r)
        return f"({txt})" if (r.denominator != 1 or r < 0) and parent > 1 else txt
    if name in ("s", "pi"):
        return name
    if name == "catalan":
        return "G"
    if name == "gamma":
        return f"gamma({to_infix(args[0])})"
    if name == "L":
        return f"{_L_INFIX[args[0]]}({to_infix(args[1])})"
    if name == "pfq":
        return f"pfq([{', '.join(args[0])}], [{', '.join(args[1])}])"
    return repr(node)


@dataclass(frozen=True)
class ClosedFormExpr:
    """A closed-form right-hand side, possibly depending on s."""

    tree: Any
    cite: str = ""
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        validate_tree(self.tree)

    @classmethod
    def parse(cls, text: str, cite: str = "") -> "ClosedFormExpr":
        return cls(parse_expr(text), cite)

    @property
    def depends_on_s(self) -> bool:
        return _depends_on_s(self.tree)

    def evaluate(self, s: Optional[float] = None) -> float:
        """Numeric value; s-independent trees are cached (pFq leaves are slow)."""
        if not self.depends_on_s:
            if "v" not in self._cache:
                self._cache["v"] = _eval(self.tree, None)
            return self._cache["v"]
        return _eval(self.tree, s)

    def to_json(self):
        return self.tree

    def __str__(self) -> str:
        return to_infix(self.tree)


def evaluate_closed_form(expr, s: Optional[float] = None) -> float:
    """Evaluate a `ClosedFormExpr`, a tree or an infix string."""
    if isinstance(expr, ClosedFormExpr):
        return expr.evaluate(s)
    if isinstance(expr, str):
        expr = parse_expr(expr)
    validate_tree(expr)
    return _eval(expr, s)
