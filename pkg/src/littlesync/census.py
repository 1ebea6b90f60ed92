"""Manipulability and solvability statistics for a program.

Walks every zone of the evaluated canvas under the chosen heuristic,
collects the pre-equations (assigned location, current value, trace)
each drag would have to solve, and measures how many of them the solver
covers at small and large displacements.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

from .canvas import index_canvas
from .evaluator import eval_program
from .livesync import assign_zones, zone_attrs
from .parser import Program, parse_program
from .solver import in_fragment_a, in_fragment_b, solve, solved
from .substitution import subst_of_program
from .syntax import Location
from .values import Trace, trace_to_sexp


@dataclass(frozen=True)
class PreEquation:
    """One equation a drag trigger would pose: solve trace = value + d
    for loc."""

    loc: Location
    value: float
    trace: Trace


@dataclass
class CensusRow:
    name: str
    shapes: int = 0
    zones: int = 0
    inactive: int = 0
    unambiguous: int = 0
    ambiguous: int = 0
    mean_candidates: float = 0.0
    equations: int = 0
    fragment_a: int = 0
    fragment_b: int = 0
    in_fragment: int = 0
    outside_fragment: int = 0
    solved_d1: int = 0
    solved_d100: int = 0
    parse_ms: float = 0.0
    eval_ms: float = 0.0
    prepare_ms: float = 0.0
    solve_mean_ms: float = 0.0

    def as_json(self) -> dict:
        return {
            "name": self.name,
            "shapes": self.shapes,
            "zones": self.zones,
            "inactive": self.inactive,
            "unambiguous": self.unambiguous,
            "ambiguous": self.ambiguous,
            "meanCandidates": round(self.mean_candidates, 2),
            "equations": self.equations,
            "fragmentA": self.fragment_a,
            "fragmentB": self.fragment_b,
            "inFragment": self.in_fragment,
            "outsideFragment": self.outside_fragment,
            "solvedD1": self.solved_d1,
            "solvedD100": self.solved_d100,
            "timing": {
                "parseMs": round(self.parse_ms, 3),
                "evalMs": round(self.eval_ms, 3),
                "prepareMs": round(self.prepare_ms, 3),
                "solveMeanMs": round(self.solve_mean_ms, 4),
            },
        }


def census(
    source: str,
    prelude: Optional[str] = None,
    name: str = "",
    heuristic: str = "fair",
    freeze_default: bool = False,
    prelude_frozen: bool = True,
) -> CensusRow:
    if prelude is None:
        from . import default_prelude

        prelude = default_prelude()
    row = CensusRow(name=name)
    t0 = time.perf_counter()
    program = parse_program(source, prelude)
    t1 = time.perf_counter()
    value = eval_program(program)
    t2 = time.perf_counter()
    canvas = index_canvas(value)
    frozen = program.frozen_locs(freeze_default, prelude_frozen)
    states = assign_zones(canvas, frozen, heuristic)
    t3 = time.perf_counter()
    row.parse_ms = (t1 - t0) * 1000.0
    row.eval_ms = (t2 - t1) * 1000.0
    row.prepare_ms = (t3 - t2) * 1000.0

    row.shapes = len(canvas.shapes)
    ambiguous_counts: list[int] = []
    equations: dict[tuple[int, str], PreEquation] = {}
    for (shape_index, _zone_name), state in states.items():
        row.zones += 1
        if not state.active:
            row.inactive += 1
            continue
        if state.candidate_count == 1:
            row.unambiguous += 1
        else:
            row.ambiguous += 1
            ambiguous_counts.append(state.candidate_count)
        shape = canvas.shapes[shape_index]
        for attr in zone_attrs(state.zone):
            slot = shape.slots[attr]
            loc = state.theta[attr]
            key = (loc.id, trace_to_sexp(slot.trace))
            equations.setdefault(key, PreEquation(loc, slot.value, slot.trace))
    if ambiguous_counts:
        row.mean_candidates = sum(ambiguous_counts) / len(ambiguous_counts)

    rho0 = subst_of_program(program)
    row.equations = len(equations)
    solve_times: list[float] = []
    for eq in equations.values():
        a = in_fragment_a(eq.trace)
        b = in_fragment_b(eq.trace, eq.loc)
        row.fragment_a += a
        row.fragment_b += b
        if a or b:
            row.in_fragment += 1
        else:
            row.outside_fragment += 1
        s0 = time.perf_counter()
        d1 = solve(rho0, eq.loc, eq.value + 1.0, eq.trace)
        solve_times.append(time.perf_counter() - s0)
        if solved(d1):
            row.solved_d1 += 1
        if solved(solve(rho0, eq.loc, eq.value + 100.0, eq.trace)):
            row.solved_d100 += 1
    if solve_times:
        row.solve_mean_ms = sum(solve_times) / len(solve_times) * 1000.0
    return row


_COLUMNS = [
    ("name", "program"),
    ("shapes", "shapes"),
    ("zones", "zones"),
    ("inactive", "inactive"),
    ("unambiguous", "unambig"),
    ("ambiguous", "ambig"),
    ("mean_candidates", "mean"),
    ("equations", "eqs"),
    ("fragment_a", "fragA"),
    ("fragment_b", "fragB"),
    ("outside_fragment", "outside"),
    ("solved_d1", "d=1"),
    ("solved_d100", "d=100"),
]


def format_table(rows: list[CensusRow], timings: bool = False) -> str:
    cols = list(_COLUMNS)
    if timings:
        cols += [
            ("parse_ms", "parse(ms)"),
            ("eval_ms", "eval(ms)"),
            ("prepare_ms", "prep(ms)"),
            ("solve_mean_ms", "solve(ms)"),
        ]

    def cell(row: CensusRow, attr: str) -> str:
        v = getattr(row, attr)
        if isinstance(v, float):
            return f"{v:.2f}"
        return str(v)

    table = [[header for _, header in cols]]
    for row in rows:
        table.append([cell(row, attr) for attr, _ in cols])
    widths = [max(len(line[i]) for line in table) for i in range(len(cols))]
    out = []
    for k, line in enumerate(table):
        out.append(
            "  ".join(
                c.ljust(widths[i]) if i == 0 else c.rjust(widths[i])
                for i, c in enumerate(line)
            ).rstrip()
        )
        if k == 0:
            out.append("  ".join("-" * w for w in widths))
    return "\n".join(out)
