"""Substitutions: ordered (Location, value) bindings over a program.

A substitution is an association list applied left to right, so the
rightmost binding for a location wins and extending on the right
shadows earlier bindings.  Applying a substitution rewrites the program
text's numeric literals in place (annotations, structure, and location
identities are untouched), which is what turns a solver result back
into source code.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable, Mapping, Union

from .parser import Def, Program
from .syntax import (
    EApp,
    ECase,
    ECons,
    EFun,
    ELet,
    ENum,
    EOp,
    Expr,
    Location,
)

Substitution = list[tuple[Location, float]]


def subst_map(rho: Union[Substitution, Mapping[Location, float]]) -> dict[Location, float]:
    """Collapse to a map; dict() of the pairs makes the rightmost win."""
    if isinstance(rho, Mapping):
        return dict(rho)
    return dict(rho)


def subst_extend(rho: Substitution, *bindings: tuple[Location, float]) -> Substitution:
    """rho (+) bindings, appending on the right."""
    return list(rho) + list(bindings)


def subst_of_program(program: Program) -> Substitution:
    """rho0: every literal bound to its parsed value, in location order."""
    return list(program.rho0.items())


def _rewrite(e: Expr, table: Mapping[Location, float]) -> Expr:
    if isinstance(e, ENum):
        if e.loc in table and table[e.loc] != e.value:
            return dataclasses.replace(e, value=table[e.loc])
        return e
    if isinstance(e, ECons):
        return _node(e, head=_rewrite(e.head, table), tail=_rewrite(e.tail, table))
    if isinstance(e, EOp):
        return _node(e, args=_share(e.args, tuple(_rewrite(a, table) for a in e.args)))
    if isinstance(e, EApp):
        return _node(e, fn=_rewrite(e.fn, table), arg=_rewrite(e.arg, table))
    if isinstance(e, EFun):
        return _node(e, body=_rewrite(e.body, table))
    if isinstance(e, ELet):
        return _node(e, bound=_rewrite(e.bound, table), body=_rewrite(e.body, table))
    if isinstance(e, ECase):
        branches = tuple((p, _rewrite(b, table)) for p, b in e.branches)
        if all(nb is ob for (_, nb), (_, ob) in zip(branches, e.branches)):
            branches = e.branches
        return _node(e, scrutinee=_rewrite(e.scrutinee, table), branches=branches)
    return e


def _share(old: tuple, new: tuple) -> tuple:
    return old if all(a is b for a, b in zip(old, new)) else new


def _node(e: Expr, **changes) -> Expr:
    if all(changes[k] is getattr(e, k) for k in changes):
        return e
    return dataclasses.replace(e, **changes)


def apply_substitution(program: Program, rho: Substitution) -> Program:
    """A new Program whose literals take their values from rho.

    Locations absent from rho keep their current values; prelude
    literals are rewritten too (the unfrozen-prelude modes need this),
    though only the user text is ever printed back out.
    """
    table = subst_map(rho)
    prelude_defs = []
    for d in program.prelude_defs:
        bound = _rewrite(d.bound, table)
        prelude_defs.append(d if bound is d.bound else Def(d.pattern, bound, d.rec, d.pos))
    user = _rewrite(program.user, table)
    rho0 = {loc: table.get(loc, val) for loc, val in program.rho0.items()}
    literals = _collect_literals(prelude_defs, user)
    return Program(
        prelude_defs=prelude_defs,
        user=user,
        rho0=rho0,
        literals=literals,
        names=program.names,
        source=program.source,
        prelude_source=program.prelude_source,
    )


def _collect_literals(prelude_defs: Iterable[Def], user: Expr) -> dict[Location, ENum]:
    out: dict[Location, ENum] = {}

    def walk(e: Expr) -> None:
        if isinstance(e, ENum):
            out[e.loc] = e
        elif isinstance(e, ECons):
            walk(e.head)
            walk(e.tail)
        elif isinstance(e, EOp):
            for a in e.args:
                walk(a)
        elif isinstance(e, EApp):
            walk(e.fn)
            walk(e.arg)
        elif isinstance(e, EFun):
            walk(e.body)
        elif isinstance(e, ELet):
            walk(e.bound)
            walk(e.body)
        elif isinstance(e, ECase):
            walk(e.scrutinee)
            for _, b in e.branches:
                walk(b)

    for d in prelude_defs:
        walk(d.bound)
    walk(user)
    return dict(sorted(out.items(), key=lambda kv: kv[0].id))
