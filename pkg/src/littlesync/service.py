"""Stateless HTTP JSON boundary used by the browser frontend.

Every request carries the full program text, so the server keeps no
session state and a commit is exactly the `act` CLI code path: the
response for op "act" is the same JSON `littlesync act --json` prints.

POST /api with a JSON body {"op": ..., ...}; responses are
{"ok": true, ...} or {"ok": false, "error": ..., "code": ...}.
GET serves the bundled frontend (when a static directory is given)
and /health.
"""

from __future__ import annotations

import argparse
import json
import mimetypes
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional

from . import default_prelude, parse_program, unparse_program
from .canvas import index_canvas
from .cli import _action_result_json, _canvas_json
from .census import census
from .errors import LittleError, LittleSyntaxError
from .evaluator import eval_program
from .livesync import apply_action, assign_zones, highlight_info, zone_attrs
from .substitution import subst_of_program
from .svgout import to_svg_xml
from .synthesis import Equation, UpdateRequest, classify_update, infer_local_updates
from .zones import zones_for


def _program_of(req: dict):
    source = req.get("source")
    if not isinstance(source, str):
        raise LittleError("the request needs a 'source' string")
    prelude = req.get("prelude")
    return parse_program(source, prelude if isinstance(prelude, str) else default_prelude())


def _frozen_of(req: dict, program):
    return program.frozen_locs(
        freeze_default=bool(req.get("freezeDefault")),
        prelude_frozen=not req.get("unfreezePrelude"),
    )


def op_parse(req: dict) -> dict:
    program = _program_of(req)
    frozen = _frozen_of(req, program)
    rho = dict(subst_of_program(program))
    return {
        "source": unparse_program(program),
        "locations": [
            {
                "id": loc.id,
                "name": loc.name,
                "origin": loc.origin,
                "value": rho[loc],
                "frozen": loc in frozen,
            }
            for loc in program.locations()
        ],
    }


def op_run(req: dict) -> dict:
    program = _program_of(req)
    canvas = index_canvas(eval_program(program))
    frozen = _frozen_of(req, program)
    heuristic = req.get("heuristic", "fair")
    states = assign_zones(canvas, frozen, heuristic)
    zones = []
    for (shape_index, zone_name), state in states.items():
        entry = {
            "shape": shape_index,
            "zone": zone_name,
            "active": state.active,
            "candidateCount": state.candidate_count,
        }
        if state.active:
            entry["assignment"] = {a: l.id for a, l in state.theta.items()}
            shape = canvas.shapes[shape_index]
            entry["highlights"] = highlight_info(shape, state.zone, state, frozen).as_json()
        zones.append(entry)
    out = _canvas_json(program, canvas, frozen)
    out["svg"] = to_svg_xml(canvas.root)
    out["zoneStates"] = zones
    return out


def op_act(req: dict) -> dict:
    program = _program_of(req)
    action = req.get("action")
    if not isinstance(action, dict):
        raise LittleError("the request needs an 'action' object")
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
        heuristic=action.get("heuristic", req.get("heuristic", "fair")),
        choose=action.get("choose"),
        freeze_default=bool(req.get("freezeDefault")),
        prelude_frozen=not req.get("unfreezePrelude"),
        avoid_unsolvable=bool(req.get("avoidUnsolvable")),
    )
    out = _action_result_json(res)
    out["svg"] = to_svg_xml(eval_program(res.program))
    return out


def op_candidates(req: dict) -> dict:
    program = _program_of(req)
    specs = req.get("equations")
    if not isinstance(specs, list) or not specs:
        raise LittleError("the request needs a non-empty 'equations' list")
    canvas = index_canvas(eval_program(program))
    hard = []
    for spec in specs:
        shape = canvas.shape(int(spec["shape"]))
        slot = shape.slots.get(str(spec["attr"]))
        if slot is None:
            raise LittleError(
                f"shape {shape.index} has no numeric attribute {spec['attr']!r}"
            )
        hard.append((Equation(float(spec["target"]), slot.trace), slot.path))
    frozen = _frozen_of(req, program)
    result = infer_local_updates(
        program,
        UpdateRequest([eq for eq, _ in hard]),
        frozen=frozen,
        disjoint=bool(req.get("disjoint")),
    )
    hard_paths = {p for _, p in hard}
    soft = [p for p in canvas.slot_paths() if p not in hard_paths]
    cands = []
    for cand in result.candidates:
        cls = classify_update(
            program, cand.substitution, [(p, eq.target) for eq, p in hard], soft
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
    return {"candidates": cands, "truncated": result.truncated}


def op_stats(req: dict) -> dict:
    source = req.get("source")
    if not isinstance(source, str):
        raise LittleError("the request needs a 'source' string")
    prelude = req.get("prelude")
    row = census(
        source,
        prelude if isinstance(prelude, str) else None,
        name=str(req.get("name", "")),
        heuristic=req.get("heuristic", "fair"),
        freeze_default=bool(req.get("freezeDefault")),
        prelude_frozen=not req.get("unfreezePrelude"),
    )
    return {"row": row.as_json()}


_OPS = {
    "parse": op_parse,
    "run": op_run,
    "act": op_act,
    "candidates": op_candidates,
    "stats": op_stats,
}


def handle_request(req: dict) -> dict:
    op = req.get("op")
    fn = _OPS.get(op)
    if fn is None:
        known = ", ".join(sorted(_OPS))
        return {"ok": False, "code": "input", "error": f"unknown op {op!r}; known ops: {known}"}
    try:
        out = fn(req)
    except LittleSyntaxError as exc:
        return {"ok": False, "code": "parse", "error": str(exc)}
    except LittleError as exc:
        return {"ok": False, "code": "eval", "error": str(exc)}
    except (KeyError, TypeError, ValueError) as exc:
        return {"ok": False, "code": "input", "error": f"bad request: {exc}"}
    out["ok"] = True
    return out


class _Handler(BaseHTTPRequestHandler):
    static_root: Optional[Path] = None

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, payload: dict, status: int = 200) -> None:
        body = json.dumps(payload).encode()
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.end_headers()
        self.wfile.write(body)

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "POST, GET, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()

    def do_POST(self):
        if self.path != "/api":
            self._send_json({"ok": False, "code": "input", "error": "POST /api only"}, 404)
            return
        try:
            length = int(self.headers.get("Content-Length", 0))
            req = json.loads(self.rfile.read(length).decode())
            if not isinstance(req, dict):
                raise ValueError("body must be a JSON object")
        except (ValueError, json.JSONDecodeError) as exc:
            self._send_json({"ok": False, "code": "input", "error": f"malformed request: {exc}"}, 400)
            return
        self._send_json(handle_request(req))

    def do_GET(self):
        if self.path == "/health":
            self._send_json({"ok": True})
            return
        root = self.static_root
        if root is None:
            self._send_json({"ok": False, "code": "input", "error": "no static files configured"}, 404)
            return
        rel = self.path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if not str(target).startswith(str(root.resolve())) or not target.is_file():
            self._send_json({"ok": False, "code": "input", "error": "not found"}, 404)
            return
        ctype = mimetypes.guess_type(target.name)[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", ctype)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


def serve(host: str = "127.0.0.1", port: int = 8037, static: Optional[str] = None) -> ThreadingHTTPServer:
    handler = type("Handler", (_Handler,), {"static_root": Path(static) if static else None})
    return ThreadingHTTPServer((host, port), handler)


def serve_in_thread(host: str = "127.0.0.1", port: int = 0, static: Optional[str] = None):
    """Start the server on a background thread; returns (server, port)."""
    server = serve(host, port, static)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server, server.server_address[1]


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="littlesync-service", description="HTTP JSON boundary for littlesync"
    )
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8037)
    parser.add_argument("--static", metavar="DIR", help="serve these files at GET /")
    args = parser.parse_args(argv)
    server = serve(args.host, args.port, args.static)
    print(f"listening on http://{args.host}:{server.server_address[1]}/")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    main()
