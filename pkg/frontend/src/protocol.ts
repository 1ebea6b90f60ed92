/**
 * Message schema for talking to the littlesync core.
 *
 * The UI never touches program state directly: everything flows through
 * a `CoreBoundary` carrying the JSON documents below.  The same schema
 * works over the local HTTP service or any embedded build of the core;
 * the documents are exactly what the CLI's `--json` mode prints, so a
 * commit made here is byte-identical to running `act` on the command
 * line with the same parameters.
 */

/** One draggable action: a zone of a shape displaced by (dx, dy). */
export interface Action {
  shapeIndex: number;
  zone: string;
  dx: number;
  dy: number;
  /** Zone-assignment heuristic; the server defaults to "fair". */
  heuristic?: Heuristic;
  /** Pin specific locations instead of the heuristic's picks: a single
   * location (name or id) or one per attribute, e.g. {"x": "sep"}. */
  choose?: string | number | Record<string, string | number>;
}

export type Heuristic = "fair" | "biased" | "none";

/** Request-level switches shared by every operation. */
export interface CoreOptions {
  heuristic?: Heuristic;
  freezeDefault?: boolean;
  unfreezePrelude?: boolean;
  avoidUnsolvable?: boolean;
  /** Custom prelude source; omit for the bundled one. */
  prelude?: string;
}

/** A numeric literal in the program: the unit of rewriting. */
export interface LocationInfo {
  id: number;
  name: string | null;
  origin: "user" | "prelude";
  value: number;
  frozen: boolean;
}

/** One numeric attribute of a rendered shape, with its data-flow trace. */
export interface SlotInfo {
  value: number;
  trace: string;
}

export interface ShapeInfo {
  index: number;
  kind: string;
  hidden: boolean;
  slots: Record<string, SlotInfo>;
}

/** Location ids to tint in the code pane / captions. */
export interface HighlightSets {
  yellow: number[];
  gray: number[];
  green: number[];
  red: number[];
}

/** Assignment and hover info for one zone of one shape. */
export interface ZoneStateInfo {
  shape: number;
  zone: string;
  active: boolean;
  candidateCount: number;
  /** attribute -> location id; present only when active. */
  assignment?: Record<string, number>;
  highlights?: HighlightSets;
}

export interface ParseDoc {
  source: string;
  locations: LocationInfo[];
}

/** Everything needed to render a session: canvas, zones, SVG text. */
export interface RunDoc {
  shapes: ShapeInfo[];
  locations: LocationInfo[];
  svg: string;
  zoneStates: ZoneStateInfo[];
}

export type UpdateStatus = "ok" | "inactive" | "unsolvable";

export type ClassificationKind =
  | "Faithful"
  | "Plausible"
  | "FaithfulVacuous"
  | "Neither";

/** Per-attribute solver outcome inside an act response. */
export interface AttrOutcomeInfo {
  attr: string;
  loc: number;
  name: string | null;
  target: number;
  ok: boolean;
  value?: number;
  reason?: string;
  detail?: string;
}

/** Result of a drag: the rewritten program and its diagnostics. */
export interface ActDoc {
  status: UpdateStatus;
  /** [location id, new value] pairs, in solve order (later wins). */
  bindings: [number, number][];
  source: string;
  highlights: HighlightSets;
  outcomes: AttrOutcomeInfo[];
  assignment?: Record<string, number>;
  classification?: ClassificationKind;
  targetsHit?: boolean[];
  note?: string;
  preludeNote?: string;
  svg: string;
}

export type ErrorCode = "parse" | "eval" | "input" | "network";

/** Errors crossing the boundary keep the server's code and message. */
export class CoreError extends Error {
  constructor(
    public readonly code: ErrorCode,
    message: string,
  ) {
    super(message);
    this.name = "CoreError";
  }
}

/**
 * The only way the UI reads or changes program state.
 *
 * `trigger` and `commit` carry identical wire messages — a drag action
 * against a source text.  The difference is purely client-side: the
 * session renders a trigger's result and throws it away, while it
 * adopts a commit's rewritten source as the new program.  `undo` is
 * resolved from the client's own history because the core is
 * stateless; it lives on the boundary so no caller rewrites program
 * text by any other route.
 */
export interface CoreBoundary {
  parse(source: string, options?: CoreOptions): Promise<ParseDoc>;
  run(source: string, options?: CoreOptions): Promise<RunDoc>;
  /** Re-derive zones and assignments for a freshly committed source. */
  prepare(source: string, options?: CoreOptions): Promise<RunDoc>;
  /** Mid-drag: solve for the action but do not adopt the rewrite. */
  trigger(source: string, action: Action, options?: CoreOptions): Promise<ActDoc>;
  /** Mouse-up: solve for the action; the caller adopts doc.source. */
  commit(source: string, action: Action, options?: CoreOptions): Promise<ActDoc>;
  /** Previous source in the caller's history, or null when empty. */
  undo(history: readonly string[]): string | null;
}
