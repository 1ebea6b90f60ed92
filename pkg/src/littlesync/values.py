"""Run-time values and traces.

Every number produced at run time carries a trace recording how it was
computed from numeric literals: a trace is either a location (the
literal itself) or a primitive operator applied to sub-traces.  Traces
record data flow only; control flow (comparisons, pattern matches) is
not recorded, which is what makes the value-trace equations solvable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional, Union

from .errors import LittleRuntimeError
from .syntax import Expr, Location, Pattern, op_arity


# ---------------------------------------------------------------------------
# Traces


@dataclass(frozen=True)
class TLoc:
    loc: Location

    def __repr__(self) -> str:
        return repr(self.loc)


@dataclass(frozen=True)
class TOp:
    op: str
    args: tuple["Trace", ...]

    def __repr__(self) -> str:
        inner = " ".join(repr(a) for a in self.args)
        return f"({self.op} {inner})" if inner else f"({self.op})"


Trace = Union[TLoc, TOp]


def trace_locations(t: Trace) -> set[Location]:
    """All locations mentioned by a trace, frozen or not."""
    if isinstance(t, TLoc):
        return {t.loc}
    out: set[Location] = set()
    for a in t.args:
        out |= trace_locations(a)
    return out


def locs_of(t: Trace, frozen: frozenset[Location] | set[Location] = frozenset()) -> set[Location]:
    """Locations a synthesizer may rebind: those in t minus the frozen set."""
    return {loc for loc in trace_locations(t) if loc not in frozen}


def count_location(t: Trace, loc: Location) -> int:
    """Occurrences of loc in t, with multiplicity."""
    if isinstance(t, TLoc):
        return 1 if t.loc == loc else 0
    return sum(count_location(a, loc) for a in t.args)


def trace_size(t: Trace) -> int:
    if isinstance(t, TLoc):
        return 1
    return 1 + sum(trace_size(a) for a in t.args)


def trace_to_sexp(t: Trace, names: bool = False) -> str:
    """Canonical serialization: locations as $id (or their alias)."""
    if isinstance(t, TLoc):
        if names and t.loc.name:
            return t.loc.name
        return f"${t.loc.id}"
    inner = " ".join(trace_to_sexp(a, names) for a in t.args)
    return f"({t.op} {inner})" if inner else f"({t.op})"


# ---------------------------------------------------------------------------
# Numeric primitives, shared by the evaluator and by trace evaluation so
# that re-evaluating a trace reproduces the evaluator's floats bitwise.


class NumericDomainError(Exception):
    """A primitive was applied outside its numeric domain."""


def _round_half_up(x: float) -> float:
    return float(math.floor(x + 0.5))


def _div(a: float, b: float) -> float:
    if b == 0.0:
        raise NumericDomainError("division by zero")
    return a / b


def _mod(a: float, b: float) -> float:
    if b == 0.0:
        raise NumericDomainError("mod by zero")
    return math.fmod(a, b)


def _acos(x: float) -> float:
    if x < -1.0 or x > 1.0:
        raise NumericDomainError(f"arccos of {x} is undefined")
    return math.acos(x)


def _asin(x: float) -> float:
    if x < -1.0 or x > 1.0:
        raise NumericDomainError(f"arcsin of {x} is undefined")
    return math.asin(x)


def _sqrt(x: float) -> float:
    if x < 0.0:
        raise NumericDomainError(f"sqrt of {x} is undefined")
    return math.sqrt(x)


def _pow(a: float, b: float) -> float:
    try:
        r = a**b
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise NumericDomainError(f"pow({a}, {b}) is undefined") from exc
    if isinstance(r, complex):
        raise NumericDomainError(f"pow({a}, {b}) is not a real number")
    return r


NUM_PRIMS: dict[str, Callable[..., float]] = {
    "pi": lambda: math.pi,
    "cos": math.cos,
    "sin": math.sin,
    "arccos": _acos,
    "arcsin": _asin,
    "round": _round_half_up,
    "floor": lambda x: float(math.floor(x)),
    "sqrt": _sqrt,
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": _div,
    "mod": _mod,
    "pow": _pow,
}


def apply_num_prim(op: str, args: list[float]) -> float:
    fn = NUM_PRIMS.get(op)
    if fn is None:
        raise NumericDomainError(f"{op} does not produce a number")
    return fn(*args)


class TraceEvalError(Exception):
    """A trace could not be re-evaluated under a substitution."""


def eval_trace(rho: Union[Mapping[Location, float], list], t: Trace) -> float:
    """Evaluate a trace under a substitution.

    rho may be a mapping or an ordered (Location, value) list; for the
    list form, later bindings shadow earlier ones.
    """
    rho_map = rho if isinstance(rho, Mapping) else dict(rho)

    def go(t: Trace) -> float:
        if isinstance(t, TLoc):
            try:
                return rho_map[t.loc]
            except KeyError:
                raise TraceEvalError(f"location {t.loc!r} is unbound") from None
        args = [go(a) for a in t.args]
        try:
            return apply_num_prim(t.op, args)
        except NumericDomainError as exc:
            raise TraceEvalError(str(exc)) from None

    return go(t)


# ---------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class VNum:
    value: float
    trace: Trace

    def __repr__(self) -> str:
        return f"VNum({self.value}, {self.trace!r})"


@dataclass(frozen=True)
class VStr:
    value: str


@dataclass(frozen=True)
class VBool:
    value: bool


@dataclass(frozen=True)
class VNil:
    pass


@dataclass(frozen=True)
class VCons:
    head: "Value"
    tail: "Value"


@dataclass(eq=False)
class VClosure:
    """Identity equality: closures capture environments, which may be
    self-referential for recursive bindings."""

    param: Pattern
    body: Expr
    env: "Env"
    name: Optional[str] = None


@dataclass(frozen=True)
class VOp:
    """A primitive operator as a first-class, possibly partially applied
    value; it computes once all its arguments are collected."""

    op: str
    collected: tuple["Value", ...] = ()


@dataclass(frozen=True)
class VHole:
    """A numbered hole in a value context (synthesis only, never produced
    by evaluation)."""

    index: int


Value = Union[VNum, VStr, VBool, VNil, VCons, VClosure, VOp, VHole]


class Env:
    """Chained lexical environment."""

    __slots__ = ("table", "parent")

    def __init__(self, table: dict[str, Value], parent: Optional["Env"] = None):
        self.table = table
        self.parent = parent

    def lookup(self, name: str) -> Value:
        env: Optional[Env] = self
        while env is not None:
            if name in env.table:
                return env.table[name]
            env = env.parent
        raise KeyError(name)

    def child(self, table: dict[str, Value]) -> "Env":
        return Env(table, self)


def cons_list(items: Iterable[Value]) -> Value:
    out: Value = VNil()
    for item in reversed(list(items)):
        out = VCons(item, out)
    return out


def iter_cons(value: Value, what: str = "list") -> list[Value]:
    """Destructure a cons chain into a Python list; errors on non-lists."""
    out: list[Value] = []
    cur = value
    while isinstance(cur, VCons):
        out.append(cur.head)
        cur = cur.tail
    if not isinstance(cur, VNil):
        raise LittleRuntimeError(f"expected a {what}, found {describe_value(cur)}")
    return out


def describe_value(v: Value) -> str:
    if isinstance(v, VNum):
        return f"the number {v.value}"
    if isinstance(v, VStr):
        return f"the string '{v.value}'"
    if isinstance(v, VBool):
        return "true" if v.value else "false"
    if isinstance(v, VNil):
        return "the empty list"
    if isinstance(v, VCons):
        return "a list"
    if isinstance(v, VClosure):
        return f"the function {v.name}" if v.name else "a function"
    if isinstance(v, VOp):
        return f"the operator {v.op}"
    if isinstance(v, VHole):
        return f"a hole #{v.index}"
    return repr(v)


# ---------------------------------------------------------------------------
# Value paths: structural addresses of numeric slots inside a value, as
# car ("a") / cdr ("d") steps from the root.


ValuePath = tuple[str, ...]


def value_at(v: Value, path: ValuePath) -> Value:
    cur = v
    for step in path:
        if not isinstance(cur, VCons):
            raise KeyError(f"path {path} does not exist")
        cur = cur.head if step == "a" else cur.tail
    return cur


def replace_at(v: Value, path: ValuePath, new: Value) -> Value:
    if not path:
        return new
    if not isinstance(v, VCons):
        raise KeyError(f"path {path} does not exist")
    if path[0] == "a":
        return VCons(replace_at(v.head, path[1:], new), v.tail)
    return VCons(v.head, replace_at(v.tail, path[1:], new))
