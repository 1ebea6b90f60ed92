"""Abstract syntax for the little language.

little is a small untyped lambda calculus with lists, pattern matching,
and s-expression concrete syntax, used to generate SVG canvases.  The
surface language has sugar (def, if, list literals, multi-argument
lambdas and applications); the AST here holds core forms only.  The
parser lowers sugar on the way in and the printer re-sugars on the way
out, so parse(unparse(e)) reproduces e node for node.

Every numeric literal carries a Location: a parser-assigned id that the
run-time trace machinery treats as the variable name of that literal.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Optional, Union


@dataclass(eq=False)
class Location:
    """Identity of one numeric literal in the source.

    ids are assigned in AST pre-order, prelude first, so they are stable
    across unparse/reparse of an unedited program.  `name` is a debug
    alias filled in when the literal is immediately bound to a variable
    (e.g. x0 in (def [x0 y0] [50 120])); `context` is the enclosing
    top-level definition, if any.
    """

    id: int
    origin: str = "user"  # "prelude" | "user"
    name: Optional[str] = None
    context: Optional[str] = None

    def __hash__(self) -> int:
        return hash(self.id)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Location) and other.id == self.id

    def __repr__(self) -> str:
        label = self.name if self.name else f"loc{self.id}"
        return f"<{label}#{self.id}>"


# ---------------------------------------------------------------------------
# Expressions (core forms)


@dataclass(eq=False)
class Expr:
    pos: Optional[tuple[int, int]] = field(default=None, compare=False, repr=False)

    def __eq__(self, other: object) -> bool:
        """Structural equality ignoring source positions.

        Locations compare by id, so two parses of the same source are
        equal while a reshuffled parse is not.
        """
        if type(self) is not type(other):
            return False
        for f in dataclasses.fields(self):
            if f.name == "pos":
                continue
            if getattr(self, f.name) != getattr(other, f.name):
                return False
        return True

    __hash__ = None  # type: ignore[assignment]


def _expr(cls):
    """Decorator: dataclass with position-insensitive equality."""
    return dataclass(eq=False)(cls)


@_expr
class ENum(Expr):
    value: float = 0.0
    loc: Location = None  # type: ignore[assignment]
    frozen: bool = False
    thawed: bool = False
    range: Optional[tuple[float, float]] = None


@_expr
class EStr(Expr):
    value: str = ""


@_expr
class EBool(Expr):
    value: bool = False


@_expr
class ENil(Expr):
    pass


@_expr
class ECons(Expr):
    head: Expr = None  # type: ignore[assignment]
    tail: Expr = None  # type: ignore[assignment]


@_expr
class EVar(Expr):
    name: str = ""


@_expr
class EFun(Expr):
    param: "Pattern" = None  # type: ignore[assignment]
    body: Expr = None  # type: ignore[assignment]


@_expr
class EApp(Expr):
    fn: Expr = None  # type: ignore[assignment]
    arg: Expr = None  # type: ignore[assignment]


@_expr
class EOp(Expr):
    """Fully applied primitive operator (arity 0, 1, or 2)."""

    op: str = ""
    args: tuple[Expr, ...] = ()


@_expr
class EOpRef(Expr):
    """A primitive operator in value position (partially applied or passed)."""

    op: str = ""


@_expr
class ELet(Expr):
    pattern: "Pattern" = None  # type: ignore[assignment]
    bound: Expr = None  # type: ignore[assignment]
    body: Expr = None  # type: ignore[assignment]
    rec: bool = False


@_expr
class ECase(Expr):
    scrutinee: Expr = None  # type: ignore[assignment]
    branches: tuple[tuple["Pattern", Expr], ...] = ()


# ---------------------------------------------------------------------------
# Patterns


@dataclass(eq=False)
class Pattern:
    pos: Optional[tuple[int, int]] = field(default=None, compare=False, repr=False)

    __eq__ = Expr.__eq__
    __hash__ = None  # type: ignore[assignment]


def _pat(cls):
    return dataclass(eq=False)(cls)


@_pat
class PVar(Pattern):
    name: str = ""


@_pat
class PNum(Pattern):
    value: float = 0.0


@_pat
class PStr(Pattern):
    value: str = ""


@_pat
class PBool(Pattern):
    value: bool = False


@_pat
class PNil(Pattern):
    pass


@_pat
class PCons(Pattern):
    head: Pattern = None  # type: ignore[assignment]
    tail: Pattern = None  # type: ignore[assignment]


# Operator arities.  Comparison and boolean operators never appear in
# traces (their results are not numbers); checkNat is the run-time guard
# used by the integer-friendly library functions in the prelude.
OPS0 = {"pi"}
OPS1 = {
    "not",
    "cos",
    "sin",
    "arccos",
    "arcsin",
    "round",
    "floor",
    "sqrt",
    "toString",
    "checkNat",
}
OPS2 = {"+", "-", "*", "/", "<", ">", "=", "mod", "pow"}
ALL_OPS = OPS0 | OPS1 | OPS2


def op_arity(op: str) -> int:
    if op in OPS0:
        return 0
    if op in OPS1:
        return 1
    if op in OPS2:
        return 2
    raise KeyError(op)


def pattern_vars(p: Pattern) -> list[str]:
    """Variables bound by a pattern, in left-to-right order."""
    if isinstance(p, PVar):
        return [p.name]
    if isinstance(p, PCons):
        return pattern_vars(p.head) + pattern_vars(p.tail)
    return []


LittleNode = Union[Expr, Pattern]
