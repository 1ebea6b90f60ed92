"""Big-step tracing evaluator.

Evaluation follows the usual call-by-value rules for an untyped lambda
calculus; the one twist is that every primitive application whose result
is a number wraps the operand traces in a new operator trace.  Booleans,
strings, and lists carry no traces, so conditionals and pattern matches
sever the data-flow record on purpose.
"""

from __future__ import annotations

import sys
from typing import Optional

from .errors import LittleRuntimeError
from .parser import Def, Program
from .printer import format_num
from .syntax import (
    EApp,
    EBool,
    ECase,
    ECons,
    EFun,
    ELet,
    ENil,
    ENum,
    EOp,
    EOpRef,
    EStr,
    EVar,
    Expr,
    PBool,
    PCons,
    PNil,
    PNum,
    PStr,
    PVar,
    Pattern,
    op_arity,
)
from .values import (
    Env,
    NumericDomainError,
    TLoc,
    TOp,
    Value,
    VBool,
    VClosure,
    VCons,
    VNil,
    VNum,
    VOp,
    VStr,
    apply_num_prim,
    describe_value,
)

_MIN_RECURSION_LIMIT = 30000


def match_pattern(pat: Pattern, value: Value) -> Optional[dict[str, Value]]:
    """Bindings produced by matching value against pat, or None."""
    if isinstance(pat, PVar):
        return {pat.name: value}
    if isinstance(pat, PNum):
        return {} if isinstance(value, VNum) and value.value == pat.value else None
    if isinstance(pat, PStr):
        return {} if isinstance(value, VStr) and value.value == pat.value else None
    if isinstance(pat, PBool):
        return {} if isinstance(value, VBool) and value.value == pat.value else None
    if isinstance(pat, PNil):
        return {} if isinstance(value, VNil) else None
    if isinstance(pat, PCons):
        if not isinstance(value, VCons):
            return None
        left = match_pattern(pat.head, value.head)
        if left is None:
            return None
        right = match_pattern(pat.tail, value.tail)
        if right is None:
            return None
        left.update(right)
        return left
    raise TypeError(f"not a pattern: {pat!r}")


def eval_op(op: str, args: list[Value], pos) -> Value:
    """Apply a saturated primitive.

    Numeric results carry the operator trace over the operand traces;
    boolean and string results carry none.
    """

    def type_err() -> LittleRuntimeError:
        shown = ", ".join(describe_value(a) for a in args)
        return LittleRuntimeError(f"{op} cannot be applied to {shown}", pos)

    if op == "+" and len(args) == 2 and isinstance(args[0], VStr) and isinstance(args[1], VStr):
        return VStr(args[0].value + args[1].value)
    if op in ("<", ">"):
        if not (isinstance(args[0], VNum) and isinstance(args[1], VNum)):
            raise type_err()
        a, b = args[0].value, args[1].value
        return VBool(a < b if op == "<" else a > b)
    if op == "=":
        a, b = args
        if isinstance(a, VNum) and isinstance(b, VNum):
            return VBool(a.value == b.value)
        if isinstance(a, VStr) and isinstance(b, VStr):
            return VBool(a.value == b.value)
        if isinstance(a, VBool) and isinstance(b, VBool):
            return VBool(a.value == b.value)
        raise type_err()
    if op == "not":
        if not isinstance(args[0], VBool):
            raise type_err()
        return VBool(not args[0].value)
    if op == "toString":
        if not isinstance(args[0], VNum):
            raise type_err()
        return VStr(format_num(args[0].value))
    if op == "checkNat":
        v = args[0]
        if not isinstance(v, VNum):
            raise type_err()
        if v.value < 0 or v.value != int(v.value):
            raise LittleRuntimeError(
                f"expected a non-negative integer, got {format_num(v.value)}", pos
            )
        return VNum(v.value, TOp("checkNat", (v.trace,)))
    # Numeric primitives.
    if not all(isinstance(a, VNum) for a in args):
        raise type_err()
    try:
        result = apply_num_prim(op, [a.value for a in args])
    except NumericDomainError as exc:
        raise LittleRuntimeError(str(exc), pos) from None
    return VNum(result, TOp(op, tuple(a.trace for a in args)))


def apply_value(fn: Value, arg: Value, pos) -> Value:
    if isinstance(fn, VClosure):
        bindings = match_pattern(fn.param, arg)
        if bindings is None:
            who = f" of {fn.name}" if fn.name else ""
            raise LittleRuntimeError(
                f"argument {describe_value(arg)} does not match the parameter pattern{who}",
                pos,
            )
        return eval_expr(fn.body, fn.env.child(bindings))
    if isinstance(fn, VOp):
        collected = fn.collected + (arg,)
        arity = op_arity(fn.op)
        if len(collected) > arity:
            raise LittleRuntimeError(f"{fn.op} takes {arity} argument(s)", pos)
        if len(collected) == arity:
            return eval_op(fn.op, list(collected), pos)
        return VOp(fn.op, collected)
    raise LittleRuntimeError(f"cannot apply {describe_value(fn)} as a function", pos)


def eval_expr(e: Expr, env: Env) -> Value:
    if isinstance(e, ENum):
        return VNum(e.value, TLoc(e.loc))
    if isinstance(e, EStr):
        return VStr(e.value)
    if isinstance(e, EBool):
        return VBool(e.value)
    if isinstance(e, ENil):
        return VNil()
    if isinstance(e, ECons):
        return VCons(eval_expr(e.head, env), eval_expr(e.tail, env))
    if isinstance(e, EVar):
        try:
            return env.lookup(e.name)
        except KeyError:
            raise LittleRuntimeError(f"unbound variable {e.name!r}", e.pos) from None
    if isinstance(e, EOpRef):
        if op_arity(e.op) == 0:
            return eval_op(e.op, [], e.pos)
        return VOp(e.op)
    if isinstance(e, EOp):
        args = [eval_expr(a, env) for a in e.args]
        return eval_op(e.op, args, e.pos)
    if isinstance(e, EFun):
        return VClosure(e.param, e.body, env)
    if isinstance(e, EApp):
        fn = eval_expr(e.fn, env)
        arg = eval_expr(e.arg, env)
        return apply_value(fn, arg, e.pos)
    if isinstance(e, ELet):
        if e.rec:
            assert isinstance(e.pattern, PVar)
            env2 = env.child({})
            value = eval_expr(e.bound, env2)
            if isinstance(value, VClosure):
                value.name = value.name or e.pattern.name
            env2.table[e.pattern.name] = value
            return eval_expr(e.body, env2)
        value = eval_expr(e.bound, env)
        if isinstance(value, VClosure) and isinstance(e.pattern, PVar):
            value.name = value.name or e.pattern.name
        bindings = match_pattern(e.pattern, value)
        if bindings is None:
            raise LittleRuntimeError(
                f"let pattern {_pat_str(e.pattern)} does not match {describe_value(value)}",
                e.pos,
            )
        return eval_expr(e.body, env.child(bindings))
    if isinstance(e, ECase):
        scrutinee = eval_expr(e.scrutinee, env)
        for pat, body in e.branches:
            bindings = match_pattern(pat, scrutinee)
            if bindings is not None:
                return eval_expr(body, env.child(bindings))
        raise LittleRuntimeError(
            f"no case branch matches {describe_value(scrutinee)}", e.pos
        )
    raise TypeError(f"not an expression: {e!r}")


def _pat_str(p: Pattern) -> str:
    from .printer import unparse_pattern

    return unparse_pattern(p)


def bind_def(env: Env, d: Def) -> Env:
    if d.rec:
        assert isinstance(d.pattern, PVar)
        env2 = env.child({})
        value = eval_expr(d.bound, env2)
        if isinstance(value, VClosure):
            value.name = value.name or d.pattern.name
        env2.table[d.pattern.name] = value
        return env2
    value = eval_expr(d.bound, env)
    if isinstance(value, VClosure) and isinstance(d.pattern, PVar):
        value.name = value.name or d.pattern.name
    bindings = match_pattern(d.pattern, value)
    if bindings is None:
        raise LittleRuntimeError(
            f"definition pattern {_pat_str(d.pattern)} does not match {describe_value(value)}",
            d.pos,
        )
    return env.child(bindings)


def prelude_env(program: Program) -> Env:
    env = Env({})
    for d in program.prelude_defs:
        env = bind_def(env, d)
    return env


def eval_program(program: Program) -> Value:
    """Evaluate the user expression under the prelude environment."""
    if sys.getrecursionlimit() < _MIN_RECURSION_LIMIT:
        sys.setrecursionlimit(_MIN_RECURSION_LIMIT)
    return eval_expr(program.user, prelude_env(program))
