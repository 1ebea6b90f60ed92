"""Unparser for the little language.

The printer reconstructs surface sugar from core forms (top-level lets
print as defs, boolean cases as if, cons chains as list literals,
curried lambdas and applications as multi-argument forms), so parsing
its output yields the same core AST with the same location assignment.
Numbers print in their shortest round-tripping decimal form, which
keeps the textual diff of a synthesized update confined to the literals
that changed.
"""

from __future__ import annotations

from .parser import Program
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
)

_WIDTH = 78


def format_num(value: float) -> str:
    """Shortest decimal that round-trips; integers print without a point."""
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError(f"cannot print non-finite number {value}")
    if value == int(value) and abs(value) < 1e16:
        return str(int(value))
    return repr(value)


def _format_literal(e: ENum) -> str:
    out = format_num(e.value)
    if e.frozen:
        out += "!"
    elif e.thawed:
        out += "?"
    if e.range is not None:
        lo, hi = e.range
        out += "{" + format_num(lo) + "-" + format_num(hi) + "}"
    return out


def _quote(s: str) -> str:
    return "'" + s.replace("\\", "\\\\").replace("'", "\\'") + "'"


def unparse_pattern(p: Pattern) -> str:
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PNum):
        return format_num(p.value)
    if isinstance(p, PStr):
        return _quote(p.value)
    if isinstance(p, PBool):
        return "true" if p.value else "false"
    if isinstance(p, PNil):
        return "[]"
    if isinstance(p, PCons):
        elems = []
        cur: Pattern = p
        while isinstance(cur, PCons):
            elems.append(unparse_pattern(cur.head))
            cur = cur.tail
        inner = " ".join(elems)
        if isinstance(cur, PNil):
            return f"[{inner}]"
        return f"[{inner}|{unparse_pattern(cur)}]"
    raise TypeError(f"not a pattern: {p!r}")


def _fun_parts(e: EFun) -> tuple[list[Pattern], Expr]:
    params = [e.param]
    body = e.body
    while isinstance(body, EFun):
        params.append(body.param)
        body = body.body
    return params, body


def _app_spine(e: EApp) -> tuple[Expr, list[Expr]]:
    args: list[Expr] = []
    fn: Expr = e
    while isinstance(fn, EApp):
        args.append(fn.arg)
        fn = fn.fn
    return fn, list(reversed(args))


def _is_if(e: ECase) -> bool:
    return (
        len(e.branches) == 2
        and isinstance(e.branches[0][0], PBool)
        and e.branches[0][0].value is True
        and isinstance(e.branches[1][0], PBool)
        and e.branches[1][0].value is False
    )


def unparse_expr(e: Expr, indent: int = 0) -> str:
    flat = _flat(e)
    if len(flat) + indent <= _WIDTH:
        return flat
    return _broken(e, indent)


def _flat(e: Expr) -> str:
    if isinstance(e, ENum):
        return _format_literal(e)
    if isinstance(e, EStr):
        return _quote(e.value)
    if isinstance(e, EBool):
        return "true" if e.value else "false"
    if isinstance(e, ENil):
        return "[]"
    if isinstance(e, EVar):
        return e.name
    if isinstance(e, EOpRef):
        return e.op
    if isinstance(e, ECons):
        elems = []
        cur: Expr = e
        while isinstance(cur, ECons):
            elems.append(_flat(cur.head))
            cur = cur.tail
        inner = " ".join(elems)
        if isinstance(cur, ENil):
            return f"[{inner}]"
        return f"[{inner}|{_flat(cur)}]"
    if isinstance(e, EOp):
        if not e.args:
            return f"({e.op})"
        return "(" + e.op + " " + " ".join(_flat(a) for a in e.args) + ")"
    if isinstance(e, EApp):
        fn, args = _app_spine(e)
        return "(" + " ".join(_flat(x) for x in [fn] + args) + ")"
    if isinstance(e, EFun):
        params, body = _fun_parts(e)
        if len(params) == 1:
            return f"(\\{unparse_pattern(params[0])} {_flat(body)})"
        inner = " ".join(unparse_pattern(p) for p in params)
        return f"(\\({inner}) {_flat(body)})"
    if isinstance(e, ELet):
        kw = "letrec" if e.rec else "let"
        return f"({kw} {unparse_pattern(e.pattern)} {_flat(e.bound)} {_flat(e.body)})"
    if isinstance(e, ECase):
        if _is_if(e):
            c, a, b = e.scrutinee, e.branches[0][1], e.branches[1][1]
            return f"(if {_flat(c)} {_flat(a)} {_flat(b)})"
        parts = " ".join(
            f"({unparse_pattern(p)} {_flat(x)})" for p, x in e.branches
        )
        return f"(case {_flat(e.scrutinee)} {parts})"
    raise TypeError(f"not an expression: {e!r}")


def _broken(e: Expr, indent: int) -> str:
    pad = " " * (indent + 2)
    if isinstance(e, ELet):
        kw = "letrec" if e.rec else "let"
        bound = unparse_expr(e.bound, indent + 2)
        body = unparse_expr(e.body, indent)
        # Chained lets stay at the same depth so definition
        # sequences print flat instead of stair-stepping.
        sep = "\n" + " " * indent if isinstance(e.body, ELet) else "\n" + pad
        return f"({kw} {unparse_pattern(e.pattern)} {bound}{sep}{body})"
    if isinstance(e, EFun):
        params, body = _fun_parts(e)
        if len(params) == 1:
            head = f"(\\{unparse_pattern(params[0])}"
        else:
            head = "(\\(" + " ".join(unparse_pattern(p) for p in params) + ")"
        return f"{head}\n{pad}{unparse_expr(body, indent + 2)})"
    if isinstance(e, ECase):
        if _is_if(e):
            c, a, b = e.scrutinee, e.branches[0][1], e.branches[1][1]
            return (
                f"(if {unparse_expr(c, indent + 4)}"
                f"\n{pad}{unparse_expr(a, indent + 2)}"
                f"\n{pad}{unparse_expr(b, indent + 2)})"
            )
        branches = "".join(
            f"\n{pad}({unparse_pattern(p)} {unparse_expr(x, indent + 4)})"
            for p, x in e.branches
        )
        return f"(case {unparse_expr(e.scrutinee, indent + 6)}{branches})"
    if isinstance(e, EApp):
        fn, args = _app_spine(e)
        parts = [unparse_expr(x, indent + 2) for x in [fn] + args]
        return "(" + ("\n" + pad).join(parts) + ")"
    if isinstance(e, EOp) and e.args:
        parts = [unparse_expr(a, indent + 2) for a in e.args]
        return f"({e.op} " + ("\n" + pad + "   ").join(parts) + ")"
    if isinstance(e, ECons):
        elems = []
        cur: Expr = e
        while isinstance(cur, ECons):
            elems.append(cur.head)
            cur = cur.tail
        inner = ("\n" + pad).join(unparse_expr(x, indent + 2) for x in elems)
        if isinstance(cur, ENil):
            return f"[{inner}]"
        return f"[{inner}|{unparse_expr(cur, indent + 2)}]"
    return _flat(e)


def unparse_program(program: Program) -> str:
    """Render the user program (defs re-sugared from the let spine)."""
    lines: list[str] = []
    e = program.user
    while isinstance(e, ELet):
        kw = "defrec" if e.rec else "def"
        lines.append(f"({kw} {unparse_pattern(e.pattern)} {unparse_expr(e.bound, 2)})")
        e = e.body
    lines.append(unparse_expr(e, 0))
    return "\n".join(lines) + "\n"
