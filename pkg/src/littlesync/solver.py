"""Solver for univariate value-trace equations.

An equation n = t asks for a new value of one location l such that the
trace t re-evaluates to n while every other location keeps its value
from the substitution rho.  Two restricted solvers cover most traces in
practice:

  solve_a  counts occurrences through addition-only traces and divides:
           if t sums c copies of l plus a constant s, the answer is
           (n - s) / c.

  solve_b  handles one occurrence of l under arbitrary invertible
           operators by peeling them off top-down with partial inverses.

The overall solve tries the counting solver first and otherwise peels
the outermost operator and recurses on the subtree containing l, so a
multi-occurrence addition subtree buried under invertible operators
still solves.  Results are exact floats, never rounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Union

from .substitution import Substitution, subst_map
from .syntax import Location
from .values import TLoc, TOp, Trace, TraceEvalError, count_location, eval_trace

_EPS = 1e-12


class FailReason(Enum):
    MULTIPLE_OCCURRENCES = "MultipleOccurrences"
    NON_INVERTIBLE_OP = "NonInvertibleOp"
    DOMAIN_ERROR = "DomainError"
    LOC_ABSENT = "LocAbsent"
    NOT_IN_FRAGMENT = "NotInFragment"


@dataclass(frozen=True)
class Fail:
    reason: FailReason
    detail: str = ""

    def __bool__(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"Fail({self.reason.value}{': ' + self.detail if self.detail else ''})"


SolveResult = Union[float, Fail]


def solved(result: SolveResult) -> bool:
    return not isinstance(result, Fail)


class _OutsideFragment(Exception):
    pass


class _Domain(Exception):
    pass


def count_plus(rho: Union[Substitution, Mapping[Location, float]], loc: Location, t: Trace) -> Union[tuple[int, float], Fail]:
    """(c, s) such that t = c * loc + s, for addition-only traces.

    Fails with NotInFragment when t contains any operator other than +,
    and raises on locations unbound in rho (a malformed substitution).
    """
    rho_map = subst_map(rho)

    def go(t: Trace) -> tuple[int, float]:
        if isinstance(t, TLoc):
            if t.loc == loc:
                return (1, 0.0)
            try:
                return (0, rho_map[t.loc])
            except KeyError:
                raise TraceEvalError(f"location {t.loc!r} is unbound") from None
        if t.op == "+":
            c1, s1 = go(t.args[0])
            c2, s2 = go(t.args[1])
            return (c1 + c2, s1 + s2)
        raise _OutsideFragment()

    try:
        return go(t)
    except _OutsideFragment:
        return Fail(FailReason.NOT_IN_FRAGMENT, "trace uses operators other than +")


def in_fragment_a(t: Trace) -> bool:
    """Addition-only traces."""
    if isinstance(t, TLoc):
        return True
    return t.op == "+" and all(in_fragment_a(a) for a in t.args)


def in_fragment_b(t: Trace, loc: Location) -> bool:
    """Exactly one occurrence of loc."""
    return count_location(t, loc) == 1


def solve_a(rho, loc: Location, n: float, t: Trace) -> SolveResult:
    counted = count_plus(rho, loc, t)
    if isinstance(counted, Fail):
        return counted
    c, s = counted
    if c == 0:
        return Fail(FailReason.LOC_ABSENT, "location does not occur in the trace")
    return (n - s) / c


# -- inverses ---------------------------------------------------------------


def _inv1(op: str, n: float) -> float:
    """X such that op(X) = n, for invertible unary operators."""
    if op == "cos":
        if not -1.0 <= n <= 1.0:
            raise _Domain(f"cos(X) = {n} has no solution")
        return math.acos(n)
    if op == "arccos":
        if not 0.0 <= n <= math.pi:
            raise _Domain(f"arccos(X) = {n} is outside the range of arccos")
        return math.cos(n)
    if op == "sin":
        if not -1.0 <= n <= 1.0:
            raise _Domain(f"sin(X) = {n} has no solution")
        return math.asin(n)
    if op == "arcsin":
        if not -math.pi / 2.0 <= n <= math.pi / 2.0:
            raise _Domain(f"arcsin(X) = {n} is outside the range of arcsin")
        return math.sin(n)
    if op == "sqrt":
        if n < 0.0:
            raise _Domain(f"sqrt(X) = {n} has no solution")
        return n * n
    raise _NotInvertible(op)


def _inv_l(op: str, n1: float, n: float) -> float:
    """X such that op(n1, X) = n."""
    if op == "+":
        return n - n1
    if op == "-":
        return n1 - n
    if op == "*":
        if abs(n1) < _EPS:
            raise _Domain(f"{n1} * X = {n} has no solution")
        return n / n1
    if op == "/":
        if abs(n) < _EPS:
            raise _Domain(f"{n1} / X = {n} has no solution")
        return n1 / n
    if op == "pow":
        if n1 <= 0.0 or n1 == 1.0 or n <= 0.0:
            raise _Domain(f"pow({n1}, X) = {n} has no solution")
        return math.log(n) / math.log(n1)
    raise _NotInvertible(op)


def _inv_r(op: str, n2: float, n: float) -> float:
    """X such that op(X, n2) = n."""
    if op == "+":
        return n - n2
    if op == "-":
        return n + n2
    if op == "*":
        if abs(n2) < _EPS:
            raise _Domain(f"X * {n2} = {n} has no solution")
        return n / n2
    if op == "/":
        if abs(n2) < _EPS:
            raise _Domain(f"X / {n2} = {n} has no solution")
        return n * n2
    if op == "pow":
        if n2 == 0.0:
            raise _Domain(f"pow(X, 0) = {n} has no solution")
        try:
            r = n ** (1.0 / n2)
        except (ValueError, OverflowError, ZeroDivisionError):
            raise _Domain(f"pow(X, {n2}) = {n} has no solution") from None
        if isinstance(r, complex):
            raise _Domain(f"pow(X, {n2}) = {n} has no real solution")
        return r
    raise _NotInvertible(op)


class _NotInvertible(Exception):
    pass


def _const(rho_map: Mapping[Location, float], t: Trace) -> float:
    try:
        return eval_trace(rho_map, t)
    except TraceEvalError as exc:
        raise _Domain(str(exc)) from None


def solve_b(rho, loc: Location, n: float, t: Trace) -> SolveResult:
    """Single-occurrence solver: never returns a value when loc occurs
    zero or multiple times in t."""
    occurrences = count_location(t, loc)
    if occurrences == 0:
        return Fail(FailReason.LOC_ABSENT, "location does not occur in the trace")
    if occurrences > 1:
        return Fail(FailReason.MULTIPLE_OCCURRENCES, f"location occurs {occurrences} times")
    rho_map = subst_map(rho)

    def go(n: float, t: Trace) -> float:
        if isinstance(t, TLoc):
            # occurrences == 1 guarantees this is loc
            return n
        if len(t.args) == 1:
            return go(_inv1(t.op, n), t.args[0])
        if len(t.args) == 2:
            t1, t2 = t.args
            if count_location(t1, loc) == 0:
                return go(_inv_l(t.op, _const(rho_map, t1), n), t2)
            return go(_inv_r(t.op, _const(rho_map, t2), n), t1)
        raise _NotInvertible(t.op)  # nullary operator, loc cannot be inside

    return _run(go, n, t)


def solve(rho, loc: Location, n: float, t: Trace) -> SolveResult:
    """Overall solver: counting first, then operator peeling.

    The peeling step recurses into solve itself, so a subtree that
    re-enters the addition fragment (even with several occurrences of
    loc) is finished by the counting solver.
    """
    res = solve_a(rho, loc, n, t)
    if solved(res):
        return res
    if isinstance(t, TLoc):
        return res
    rho_map = subst_map(rho)

    def go(n: float, t: Trace) -> float:
        a = solve_a(rho_map, loc, n, t)
        if solved(a):
            return a  # type: ignore[return-value]
        if isinstance(t, TLoc):
            raise _Absent()
        if len(t.args) == 1:
            return go(_inv1(t.op, n), t.args[0])
        if len(t.args) == 2:
            t1, t2 = t.args
            left = count_location(t1, loc)
            right = count_location(t2, loc)
            if left == 0 and right == 0:
                raise _Absent()
            if left > 0 and right > 0:
                raise _Split()
            if left == 0:
                return go(_inv_l(t.op, _const(rho_map, t1), n), t2)
            return go(_inv_r(t.op, _const(rho_map, t2), n), t1)
        raise _Absent()

    return _run(go, n, t)


class _Absent(Exception):
    pass


class _Split(Exception):
    pass


def _run(go, n: float, t: Trace) -> SolveResult:
    try:
        return go(n, t)
    except _NotInvertible as exc:
        return Fail(FailReason.NON_INVERTIBLE_OP, f"{exc.args[0]} has no inverse")
    except _Domain as exc:
        return Fail(FailReason.DOMAIN_ERROR, str(exc.args[0]) if exc.args else "")
    except _Absent:
        return Fail(FailReason.LOC_ABSENT, "location does not occur in the trace")
    except _Split:
        return Fail(
            FailReason.MULTIPLE_OCCURRENCES,
            "location occurs on both sides of a non-addition operator",
        )
    except TraceEvalError as exc:
        return Fail(FailReason.DOMAIN_ERROR, str(exc))
