"""Command line interface.

Subcommands:
  run         evaluate a program and emit SVG (or canvas JSON)
  act         apply one direct-manipulation action and rewrite the program
  candidates  enumerate rewrites satisfying hard equations
  stats       manipulability/solvability census over program files

Exit codes: 0 success; 1 parse, evaluation, or input errors; 2 an acted
zone was inactive or every trigger equation failed.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from . import __version__, default_prelude, parse_program
from .canvas import Canvas, index_canvas
from .census import census, format_table
from .errors import LittleError
from .evaluator import eval_program
from .livesync import apply_action, assign_zones
from .parser import Program
from .solver import Fail
from .substitution import subst_of_program
from .svgout import to_svg_xml
from .synthesis import Equation, UpdateRequest, infer_local_updates, classify_update
from .values import trace_to_sexp

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_UPDATE = 2


def _read_prelude(args) -> str:
    if args.prelude:
        return Path(args.prelude).read_text()
    return default_prelude()


def _load_program(args) -> Program:
    source = Path(args.file).read_text()
    return parse_program(source, _read_prelude(args))


def _frozen(args, program: Program):
    return program.frozen_locs(
        freeze_default=args.freeze_default,
        prelude_frozen=not args.unfreeze_prelude,
    )


def _loc_json(program: Program, frozen) -> list[dict]:
    rho = dict(subst_of_program(program))
    return [
        {
            "id": loc.id,
            "name": loc.name,
            "origin": loc.origin,
            "value": rho[loc],
            "frozen": loc in frozen,
        }
        for loc in program.locations()
    ]


def _canvas_json(program: Program, canvas: Canvas, frozen) -> dict:
    shapes = []
    for shape in canvas.shapes:
        shapes.append(
            {
                "index": shape.index,
                "kind": shape.kind,
                "hidden": shape.hidden,
                "slots": {
                    name: {"value": slot.value, "trace": trace_to_sexp(slot.trace)}
                    for name, slot in shape.slots.items()
                },
            }
        )
    return {
        "shapes": shapes,
        "locations": _loc_json(program, frozen),
    }


def _json_arg(raw: str, what: str):
    text = Path(raw[1:]).read_text() if raw.startswith("@") else raw
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise LittleError(f"malformed {what} JSON: {exc}")


def cmd_run(args) -> int:
    program = _load_program(args)
    value = eval_program(program)
    canvas = index_canvas(value)
    frozen = _frozen(args, program)
    svg = to_svg_xml(value)
    if args.json:
        states = assign_zones(canvas, frozen, args.heuristic)
        active = sum(1 for s in states.values() if s.active)
        out = _canvas_json(program, canvas, frozen)
        out["svg"] = svg
        out["zones"] = {"total": len(states), "active": active, "inactive": len(states) - active}
        print(json.dumps(out, indent=2))
    elif args.out:
        Path(args.out).write_text(svg + "\n")
        print(f"wrote {args.out}: {len(canvas.shapes)} shapes", file=sys.stderr)
    else:
        print(svg)
    return EXIT_OK


def _action_result_json(res) -> dict:
    out = {
        "status": res.status,
        "bindings": [[loc.id, value] for loc, value in res.bindings],
        "source": res.source,
        "highlights": res.highlights.as_json(),
        "outcomes": [
            {
                "attr": o.attr,
                "loc": o.loc.id,
                "name": o.loc.name,
                "target": o.target,
                "ok": o.ok,
                **(
                    {"value": o.result}
                    if o.ok
                    else {"reason": o.result.reason.value, "detail": o.result.detail}
                ),
            }
            for o in res.outcomes
        ],
    }
    if res.theta is not None:
        out["assignment"] = {attr: loc.id for attr, loc in res.theta.items()}
    if res.classification is not None:
        out["classification"] = res.classification.kind.value
        out["targetsHit"] = res.classification.hits
        if res.classification.note:
            out["note"] = res.classification.note
    if res.prelude_note:
        out["preludeNote"] = res.prelude_note
    return out


def cmd_act(args) -> int:
    program = _load_program(args)
    action = _json_arg(args.action, "action")
    if not isinstance(action, dict):
        raise LittleError("the action must be a JSON object")
    try:
        shape_index = int(action["shapeIndex"])
        zone = str(action["zone"])
        dx = float(action.get("dx", 0.0))
        dy = float(action.get("dy", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise LittleError(f"bad action: {exc}")
    res = apply_action(
        program,
        shape_index,
        zone,
        dx,
        dy,
        heuristic=action.get("heuristic", args.heuristic),
        choose=action.get("choose"),
        freeze_default=args.freeze_default,
        prelude_frozen=not args.unfreeze_prelude,
        avoid_unsolvable=args.avoid_unsolvable,
    )
    if args.out:
        Path(args.out).write_text(res.source)
    if args.json:
        print(json.dumps(_action_result_json(res), indent=2))
    else:
        for o in res.outcomes:
            if o.ok:
                where = o.loc.name or f"${o.loc.id}"
                print(f"  {o.attr}: {where} <- {o.result:g}", file=sys.stderr)
            else:
                print(
                    f"  {o.attr}: failed ({o.result.reason.value}: {o.result.detail})",
                    file=sys.stderr,
                )
        if res.status == "ok":
            if res.classification is not None:
                print(f"  classification: {res.classification.kind.value}", file=sys.stderr)
            if res.prelude_note:
                print(f"  note: {res.prelude_note}", file=sys.stderr)
            if not args.out:
                print(res.source, end="")
        else:
            print(f"  no update applied: zone {res.status}", file=sys.stderr)
    return EXIT_OK if res.status == "ok" else EXIT_NO_UPDATE


def cmd_candidates(args) -> int:
    program = _load_program(args)
    specs = _json_arg(args.equations, "equations")
    if not isinstance(specs, list) or not specs:
        raise LittleError("equations must be a non-empty JSON list")
    canvas = index_canvas(eval_program(program))
    hard = []
    for spec in specs:
        try:
            shape = canvas.shape(int(spec["shape"]))
            attr = str(spec["attr"])
            target = float(spec["target"])
        except (KeyError, TypeError, ValueError) as exc:
            raise LittleError(f"bad equation {spec!r}: {exc}")
        slot = shape.slots.get(attr)
        if slot is None:
            have = ", ".join(shape.slots) or "none"
            raise LittleError(
                f"shape {shape.index} ({shape.kind!r}) has no numeric attribute"
                f" {attr!r}; available: {have}"
            )
        hard.append((Equation(target, slot.trace), slot.path))
    frozen = _frozen(args, program)
    result = infer_local_updates(
        program,
        UpdateRequest([eq for eq, _ in hard]),
        frozen=frozen,
        disjoint=args.disjoint,
    )
    hard_paths = {path for _, path in hard}
    soft = [p for p in canvas.slot_paths() if p not in hard_paths]
    cands = []
    for cand in result.candidates:
        cls = classify_update(
            program,
            cand.substitution,
            [(path, eq.target) for eq, path in hard],
            soft,
        )
        cands.append(
            {
                "bindings": [
                    {"loc": loc.id, "name": loc.name, "value": value}
                    for loc, value in cand.bindings
                ],
                "classification": cls.kind.value,
            }
        )
    print(json.dumps({"candidates": cands, "truncated": result.truncated}, indent=2))
    return EXIT_OK


def cmd_stats(args) -> int:
    prelude = _read_prelude(args)
    rows = []
    for path in args.files:
        rows.append(
            census(
                Path(path).read_text(),
                prelude,
                name=Path(path).stem,
                heuristic=args.heuristic,
                freeze_default=args.freeze_default,
                prelude_frozen=not args.unfreeze_prelude,
            )
        )
    if args.json:
        print(json.dumps([row.as_json() for row in rows], indent=2))
    else:
        print(format_table(rows, timings=args.timings))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--prelude", metavar="PATH", help="use a custom prelude file")
    p.add_argument(
        "--heuristic",
        choices=["fair", "biased", "none"],
        default="fair",
        help="zone assignment heuristic (default: fair)",
    )
    p.add_argument(
        "--freeze-default",
        action="store_true",
        help="treat unannotated literals as frozen (thaw with ?)",
    )
    p.add_argument(
        "--unfreeze-prelude",
        action="store_true",
        help="let solutions bind unannotated prelude literals",
    )
    p.add_argument(
        "--avoid-unsolvable",
        action="store_true",
        help="prefer assignments whose probe equations solve",
    )
    p.add_argument("--json", action="store_true", help="emit JSON on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="littlesync",
        description="evaluate, directly manipulate, and rewrite little SVG programs",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="evaluate a program and emit SVG")
    p_run.add_argument("file")
    p_run.add_argument("-o", "--out", metavar="SVG", help="write the SVG here instead of stdout")
    _add_common(p_run)
    p_run.set_defaults(fn=cmd_run)

    p_act = sub.add_parser("act", help="apply a direct-manipulation action")
    p_act.add_argument("file")
    p_act.add_argument(
        "action",
        help='JSON {"shapeIndex", "zone", "dx", "dy", "heuristic"?, "choose"?} or @file',
    )
    p_act.add_argument("-o", "--out", metavar="PATH", help="write the rewritten program here")
    _add_common(p_act)
    p_act.set_defaults(fn=cmd_act)

    p_cand = sub.add_parser("candidates", help="enumerate rewrites for hard equations")
    p_cand.add_argument("file")
    p_cand.add_argument(
        "equations",
        help='JSON [{"shape", "attr", "target"}, ...] or @file',
    )
    p_cand.add_argument(
        "--disjoint",
        action="store_true",
        help="never reuse one location across two equations",
    )
    _add_common(p_cand)
    p_cand.set_defaults(fn=cmd_candidates)

    p_stats = sub.add_parser("stats", help="census over program files")
    p_stats.add_argument("files", nargs="+")
    p_stats.add_argument("--timings", action="store_true", help="include timing columns")
    _add_common(p_stats)
    p_stats.set_defaults(fn=cmd_stats)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except LittleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
