"""Preparing a canvas for direct manipulation and applying drags.

Every zone of every shape gets an attribute-to-location assignment
(theta) chosen ahead of time by a heuristic, so a drag needs no search:
each perturbed attribute yields one equation, solved for its assigned
location under the program's current bindings, and the solutions are
folded into the substitution left to right (a location solved twice
keeps the later value).
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Optional, Union

from .canvas import Canvas, IndexedShape, index_canvas
from .errors import LittleRuntimeError
from .evaluator import eval_program
from .printer import unparse_program
from .solver import Fail, SolveResult, solve, solved
from .substitution import (
    Substitution,
    apply_substitution,
    subst_extend,
    subst_of_program,
)
from .parser import Program
from .synthesis import Classification, ClassifyResult, classify_update
from .syntax import Location
from .values import TLoc, Trace, locs_of
from .zones import Zone, find_zone, zones_for

ASSIGNMENT_CAP = 10000
HEURISTICS = ("fair", "biased", "none")

Assignment = dict[str, Location]


@dataclass
class ZoneState:
    shape_index: int
    zone: Zone
    attr_locs: dict[str, list[Location]]
    theta: Optional[Assignment]
    candidate_count: int
    truncated: bool = False

    @property
    def active(self) -> bool:
        return self.theta is not None


def zone_attrs(zone: Zone) -> list[str]:
    seen: list[str] = []
    for off in zone.offsets:
        if off.attr not in seen:
            seen.append(off.attr)
    return seen


def candidate_locations(
    shape: IndexedShape, zone: Zone, frozen: set[Location]
) -> Optional[dict[str, list[Location]]]:
    """Per-attribute unfrozen locations in ascending id order, or None
    when some attribute is missing or has no unfrozen location."""
    out: dict[str, list[Location]] = {}
    for attr in zone_attrs(zone):
        slot = shape.slots.get(attr)
        if slot is None:
            return None
        locs = sorted(locs_of(slot.trace, frozen), key=lambda l: l.id)
        if not locs:
            return None
        out[attr] = locs
    return out


def enumerate_assignments(
    attr_locs: dict[str, list[Location]], cap: int = ASSIGNMENT_CAP
) -> tuple[list[Assignment], int, bool]:
    """All assignments in product order (first attribute varies
    slowest), plus the uncapped count and a truncation flag."""
    attrs = list(attr_locs)
    total = 1
    for locs in attr_locs.values():
        total *= len(locs)
    thetas: list[Assignment] = []
    for combo in itertools.product(*attr_locs.values()):
        thetas.append(dict(zip(attrs, combo)))
        if len(thetas) >= cap:
            break
    return thetas, total, total > cap


def location_use_counts(canvas: Canvas) -> Counter:
    """How many times each location occurs across all canvas traces,
    counting repeats within a single trace."""
    counts: Counter = Counter()

    def walk(t: Trace) -> None:
        if isinstance(t, TLoc):
            counts[t.loc] += 1
        else:
            for arg in t.args:
                walk(arg)

    for shape in canvas.shapes:
        for slot in shape.slots.values():
            walk(slot.trace)
    return counts


def _usage_key(theta: Assignment) -> frozenset:
    return frozenset(loc.id for loc in theta.values())


def _score(theta: Assignment, counts: Counter) -> int:
    score = 1
    for loc in set(theta.values()):
        score *= counts[loc]
    return score


def _probe_solvable(shape: IndexedShape, zone: Zone, theta: Assignment, rho) -> bool:
    for off in zone.offsets:
        slot = shape.slots[off.attr]
        target = slot.value + off.delta(1.0, 1.0)
        if not solved(solve(rho, theta[off.attr], target, slot.trace)):
            return False
    return True


def _assign_zone(
    shape: IndexedShape,
    zone: Zone,
    frozen: set[Location],
    heuristic: str,
    usage: dict,
    counts: Optional[Counter],
    rho,
    avoid_unsolvable: bool,
    cap: int,
) -> ZoneState:
    attr_locs = candidate_locations(shape, zone, frozen)
    if attr_locs is None:
        return ZoneState(shape.index, zone, {}, None, 0)
    thetas, total, truncated = enumerate_assignments(attr_locs, cap)
    if avoid_unsolvable:
        probed = [th for th in thetas if _probe_solvable(shape, zone, th, rho)]
        if probed:
            thetas = probed
    if counts is not None:
        best = min(_score(th, counts) for th in thetas)
        thetas = [th for th in thetas if _score(th, counts) == best]
    if heuristic == "none":
        theta = thetas[0]
    else:
        theta = min(
            thetas,
            key=lambda th: (usage[_usage_key(th)], tuple(l.id for l in th.values())),
        )
        usage[_usage_key(theta)] += 1
    return ZoneState(shape.index, zone, attr_locs, theta, total, truncated)


def assign_zones(
    canvas: Canvas,
    frozen: set[Location],
    heuristic: str = "fair",
    rho: Optional[Substitution] = None,
    avoid_unsolvable: bool = False,
    cap: int = ASSIGNMENT_CAP,
) -> dict[tuple[int, str], ZoneState]:
    """Assignments for every zone of every shape, in document order
    (shapes ascending, zones in table order)."""
    if heuristic not in HEURISTICS:
        raise ValueError(f"unknown heuristic {heuristic!r}; expected one of {HEURISTICS}")
    if avoid_unsolvable and rho is None:
        raise ValueError("avoid_unsolvable requires the program substitution")
    usage: dict = defaultdict(int)
    counts = location_use_counts(canvas) if heuristic == "biased" else None
    states: dict[tuple[int, str], ZoneState] = {}
    for shape in canvas.shapes:
        for zone in zones_for(shape):
            states[(shape.index, zone.name)] = _assign_zone(
                shape, zone, frozen, heuristic, usage, counts, rho, avoid_unsolvable, cap
            )
    return states


def _resolve_choice(program: Program, key) -> Location:
    try:
        return program.resolve_loc(key)
    except KeyError as exc:
        raise LittleRuntimeError(str(exc.args[0])) from None


def apply_choose(
    state: ZoneState, choose, program: Program
) -> Assignment:
    """Override a zone's assignment with explicitly chosen locations.

    choose is a location key (canonical name or id) applied to every
    attribute that has it among its candidates, or a mapping from
    attribute name to location key.  Attributes left unchosen take
    their smallest-id candidate.
    """
    assert state.theta is not None
    if isinstance(choose, dict):
        per_attr = {attr: _resolve_choice(program, key) for attr, key in choose.items()}
        theta = {}
        for attr, locs in state.attr_locs.items():
            want = per_attr.get(attr)
            if want is not None and want not in locs:
                names = ", ".join(l.name or f"${l.id}" for l in locs)
                raise LittleRuntimeError(
                    f"location {choose[attr]!r} is not a candidate for attribute"
                    f" {attr!r} (candidates: {names})"
                )
            theta[attr] = want if want is not None else locs[0]
        return theta
    loc = _resolve_choice(program, choose)
    return {
        attr: (loc if loc in locs else locs[0])
        for attr, locs in state.attr_locs.items()
    }


@dataclass
class AttrOutcome:
    attr: str
    loc: Location
    target: float
    result: SolveResult

    @property
    def ok(self) -> bool:
        return solved(self.result)


@dataclass
class TriggerResult:
    bindings: Substitution
    outcomes: list[AttrOutcome]

    @property
    def ok(self) -> bool:
        return bool(self.bindings)


def _rho_value(rho, loc: Location) -> Optional[float]:
    pairs = rho.items() if isinstance(rho, dict) else rho
    value = None
    for l, v in pairs:
        if l == loc:
            value = v
    return value


def run_trigger(
    shape: IndexedShape,
    zone: Zone,
    theta: Assignment,
    rho: Substitution,
    dx: float,
    dy: float,
) -> TriggerResult:
    """One equation per zone offset, each solved under the original
    bindings; failures are recorded and change nothing."""
    outcomes: list[AttrOutcome] = []
    bindings: Substitution = []
    for off in zone.offsets:
        slot = shape.slots[off.attr]
        loc = theta[off.attr]
        delta = off.delta(dx, dy)
        target = slot.value + delta
        result = solve(rho, loc, target, slot.trace)
        if solved(result) and delta == 0.0:
            # the current binding satisfies a zero-delta equation exactly;
            # prefer it over a re-derived value carrying rounding noise
            current = _rho_value(rho, loc)
            if current is not None:
                result = current
        outcomes.append(AttrOutcome(off.attr, loc, target, result))
        if solved(result):
            bindings.append((loc, result))
    return TriggerResult(bindings, outcomes)


@dataclass
class Highlights:
    yellow: list[Location] = field(default_factory=list)
    gray: list[Location] = field(default_factory=list)
    green: list[Location] = field(default_factory=list)
    red: list[Location] = field(default_factory=list)

    def as_json(self) -> dict:
        def ids(locs):
            return sorted(loc.id for loc in locs)

        return {
            "yellow": ids(self.yellow),
            "gray": ids(self.gray),
            "green": ids(self.green),
            "red": ids(self.red),
        }


def highlight_info(
    shape: IndexedShape, zone: Zone, state: ZoneState, frozen: set[Location]
) -> Highlights:
    """Hover feedback: chosen locations in yellow, other unfrozen
    contributors to the zone's traces in gray."""
    h = Highlights()
    if state.theta is None:
        return h
    chosen = set(state.theta.values())
    contributing: set[Location] = set()
    for attr in zone_attrs(zone):
        contributing |= locs_of(shape.slots[attr].trace, frozen)
    h.yellow = sorted(chosen, key=lambda l: l.id)
    h.gray = sorted(contributing - chosen, key=lambda l: l.id)
    return h


@dataclass
class ActionResult:
    status: str  # 'ok' | 'inactive' | 'unsolvable'
    program: Program
    source: str
    outcomes: list[AttrOutcome] = field(default_factory=list)
    bindings: Substitution = field(default_factory=list)
    classification: Optional[ClassifyResult] = None
    highlights: Highlights = field(default_factory=Highlights)
    theta: Optional[Assignment] = None
    prelude_note: str = ""

    @property
    def changed(self) -> bool:
        return self.status == "ok" and bool(self.bindings)


def apply_action(
    program: Program,
    shape_index: int,
    zone_name: str,
    dx: float,
    dy: float,
    heuristic: str = "fair",
    choose=None,
    freeze_default: bool = False,
    prelude_frozen: bool = True,
    avoid_unsolvable: bool = False,
    cap: int = ASSIGNMENT_CAP,
) -> ActionResult:
    """Evaluate, assign zones, run the drag trigger, and rewrite.

    Solver failures never raise: when every equation fails the program
    comes back unchanged with status 'unsolvable' and the per-attribute
    diagnostics; a zone with no assignable location reports 'inactive'.
    """
    canvas = index_canvas(eval_program(program))
    shape = canvas.shape(shape_index)
    try:
        zone = find_zone(shape, zone_name)
    except KeyError as exc:
        raise LittleRuntimeError(str(exc.args[0]))
    frozen = program.frozen_locs(freeze_default, prelude_frozen)
    rho0 = subst_of_program(program)
    states = assign_zones(
        canvas,
        frozen,
        heuristic,
        rho=rho0 if avoid_unsolvable else None,
        avoid_unsolvable=avoid_unsolvable,
        cap=cap,
    )
    state = states[(shape_index, zone_name)]
    source = unparse_program(program)
    if not state.active:
        return ActionResult("inactive", program, source)
    theta = apply_choose(state, choose, program) if choose is not None else state.theta
    highlights = highlight_info(shape, zone, state, frozen)
    highlights.yellow = sorted(set(theta.values()), key=lambda l: l.id)
    trig = run_trigger(shape, zone, theta, rho0, dx, dy)
    failed = [o.loc for o in trig.outcomes if not o.ok]
    succeeded = [o.loc for o in trig.outcomes if o.ok]
    highlights.green = sorted(set(succeeded), key=lambda l: l.id)
    highlights.red = sorted(set(failed) - set(succeeded), key=lambda l: l.id)
    if not trig.ok:
        return ActionResult(
            "unsolvable",
            program,
            source,
            outcomes=trig.outcomes,
            highlights=highlights,
            theta=theta,
        )
    rho = subst_extend(rho0, *trig.bindings)
    hard = [
        (shape.slots[o.attr].path, o.target) for o in trig.outcomes if o.ok
    ]
    hard_paths = {p for p, _ in hard}
    soft = [p for p in canvas.slot_paths() if p not in hard_paths]
    classification = classify_update(program, rho, hard, soft)
    new_program = apply_substitution(program, rho)
    prelude_note = ""
    if any(loc.origin == "prelude" for loc, _ in trig.bindings):
        prelude_note = (
            "some bindings target prelude locations; the rewritten source"
            " reflects them only in the in-memory prelude"
        )
    return ActionResult(
        "ok",
        new_program,
        unparse_program(new_program),
        outcomes=trig.outcomes,
        bindings=trig.bindings,
        classification=classification,
        highlights=highlights,
        theta=theta,
        prelude_note=prelude_note,
    )
