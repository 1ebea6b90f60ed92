"""Candidate program updates from hard value-trace equations.

Given hard constraints (the numbers the user changed) the synthesizer
enumerates, per constraint, the unfrozen locations in its trace, solves
each combination independently, and folds the solutions into candidate
substitutions.  Soft constraints (everything the user did not touch)
are never consulted during enumeration; they only matter afterwards,
when a candidate is classified by re-running the program:

  Faithful         structure unchanged, every changed number on target
  FaithfulVacuous  structure changed, so the guarantee holds vacuously
  Plausible        structure unchanged, some changed numbers on target
  Neither          structure unchanged, no changed number on target
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence

from .evaluator import eval_program
from .parser import Program
from .solver import solve, solved
from .substitution import Substitution, apply_substitution, subst_extend, subst_of_program
from .syntax import Location
from .values import (
    Trace,
    Value,
    ValuePath,
    VCons,
    VHole,
    VNum,
    locs_of,
    replace_at,
    value_at,
)

TUPLE_CAP = 10000
TARGET_TOL = 1e-9


@dataclass(frozen=True)
class Equation:
    """One hard constraint: make trace re-evaluate to target."""

    target: float
    trace: Trace


@dataclass
class UpdateRequest:
    hard: list[Equation]
    soft: list[Equation] = field(default_factory=list)


@dataclass
class CandidateUpdate:
    """A candidate rewrite: the delta bindings and the full substitution."""

    bindings: list[tuple[Location, float]]
    substitution: Substitution

    def binding_json(self) -> list[list]:
        return [[loc.id, value] for loc, value in self.bindings]


@dataclass
class InferResult:
    candidates: list[CandidateUpdate]
    truncated: bool = False


def infer_local_updates(
    program: Program,
    request: UpdateRequest,
    frozen: Optional[set[Location]] = None,
    disjoint: bool = False,
    cap: int = TUPLE_CAP,
) -> InferResult:
    """Candidate substitutions satisfying every hard equation.

    Enumerates location tuples from the per-equation unfrozen location
    sets in ascending id order, capped at `cap` tuples; a candidate is
    kept only when every equation solves for its chosen location.  With
    disjoint=True a location shared between two equations is dropped
    from both sets, trading completeness for a per-equation guarantee.
    """
    rho0 = subst_of_program(program)
    if frozen is None:
        frozen = program.frozen_locs()
    loc_sets: list[list[Location]] = []
    for eq in request.hard:
        locs = locs_of(eq.trace, frozen)
        loc_sets.append(sorted(locs, key=lambda l: l.id))
    if disjoint and len(loc_sets) > 1:
        pruned = []
        for i, locs in enumerate(loc_sets):
            others = set().union(*(set(s) for j, s in enumerate(loc_sets) if j != i)) if len(loc_sets) > 1 else set()
            pruned.append([l for l in locs if l not in others])
        loc_sets = pruned
    if not request.hard or any(not s for s in loc_sets):
        return InferResult([], False)

    candidates: list[CandidateUpdate] = []
    seen: set[tuple[tuple[int, float], ...]] = set()
    truncated = False
    for count, combo in enumerate(itertools.product(*loc_sets)):
        if count >= cap:
            truncated = True
            break
        bindings: list[tuple[Location, float]] = []
        ok = True
        for eq, loc in zip(request.hard, combo):
            result = solve(rho0, loc, eq.target, eq.trace)
            if not solved(result):
                ok = False
                break
            bindings.append((loc, result))
        if not ok:
            continue
        key = tuple((loc.id, value) for loc, value in bindings)
        if key in seen:
            continue
        seen.add(key)
        candidates.append(CandidateUpdate(bindings, subst_extend(rho0, *bindings)))
    return InferResult(candidates, truncated)


# ---------------------------------------------------------------------------
# Value contexts and update classification


def value_context_similar(v1: Value, v2: Value) -> bool:
    """Contexts are similar when they are identical, or are traced
    numbers with identical traces (values free to differ), or are cons
    cells with similar components."""
    if isinstance(v1, VNum) and isinstance(v2, VNum):
        return v1.trace == v2.trace
    if isinstance(v1, VCons) and isinstance(v2, VCons):
        return value_context_similar(v1.head, v2.head) and value_context_similar(
            v1.tail, v2.tail
        )
    return v1 == v2


def puncture(v: Value, paths: Sequence[ValuePath]) -> Value:
    """Replace the numeric slot at each path with a numbered hole."""
    out = v
    for i, path in enumerate(paths):
        out = replace_at(out, path, VHole(i))
    return out


class Classification(Enum):
    FAITHFUL = "Faithful"
    FAITHFUL_VACUOUS = "FaithfulVacuous"
    PLAUSIBLE = "Plausible"
    NEITHER = "Neither"


@dataclass
class ClassifyResult:
    kind: Classification
    hits: list[bool] = field(default_factory=list)
    note: str = ""


def classify_update(
    program: Program,
    rho: Substitution,
    hard: Sequence[tuple[ValuePath, float]],
    soft: Sequence[ValuePath] = (),
) -> ClassifyResult:
    """Re-run the program under rho and grade the update.

    hard pairs a value path (the number the user manipulated) with its
    target; soft paths are the remaining indexed numbers.  When the new
    output is not context-similar to the old one the faithfulness
    guarantee is vacuous, which is reported rather than silently
    accepted.
    """
    paths = [p for p, _ in hard] + list(soft)
    before = eval_program(program)
    after = eval_program(apply_substitution(program, rho))
    try:
        ctx_before = puncture(before, paths)
        ctx_after = puncture(after, paths)
    except KeyError:
        return ClassifyResult(
            Classification.FAITHFUL_VACUOUS,
            note="the update changed the structure of the output",
        )
    if not value_context_similar(ctx_before, ctx_after):
        return ClassifyResult(
            Classification.FAITHFUL_VACUOUS,
            note="the update changed the structure of the output",
        )
    hits: list[bool] = []
    for path, target in hard:
        got = value_at(after, path)
        hits.append(isinstance(got, VNum) and abs(got.value - target) <= TARGET_TOL)
    if all(hits):
        kind = Classification.FAITHFUL
    elif any(hits):
        kind = Classification.PLAUSIBLE
    else:
        kind = Classification.NEITHER
    return ClassifyResult(kind, hits)
