/**
 * Session state and the drag loop.
 *
 * A Session owns the current program text, the prepared document
 * (shapes, zones, SVG), and an undo history.  A Drag turns a stream of
 * cumulative mouse offsets into trigger calls — at most one in flight,
 * later offsets replacing queued ones — and on release commits the
 * final offsets, adopting the rewritten source.  All reads and writes
 * of program state go through the CoreBoundary.
 */

import {
  Action,
  ActDoc,
  CoreBoundary,
  CoreError,
  CoreOptions,
  Heuristic,
  RunDoc,
  ZoneStateInfo,
} from "./protocol.js";

export interface SessionEvents {
  /** Prepared document replaced (load, commit, undo, options change). */
  onDocument?: (doc: RunDoc, source: string) => void;
  /** Mid-drag re-render: the freshly solved (uncommitted) result. */
  onPreview?: (doc: ActDoc) => void;
  /** A drag finished.  Null for a zero-length drag; a refused drag
   * (inactive/unsolvable) passes its diagnostics, uncommitted. */
  onCommit?: (doc: ActDoc | null) => void;
  onError?: (err: CoreError) => void;
}

export class Session {
  private currentSource = "";
  private currentDoc: RunDoc | null = null;
  private history: string[] = [];
  options: CoreOptions;

  constructor(
    private readonly boundary: CoreBoundary,
    options: CoreOptions = {},
    private readonly events: SessionEvents = {},
  ) {
    this.options = { ...options };
  }

  get source(): string {
    return this.currentSource;
  }

  get doc(): RunDoc | null {
    return this.currentDoc;
  }

  get canUndo(): boolean {
    return this.history.length > 0;
  }

  zoneState(shapeIndex: number, zone: string): ZoneStateInfo | undefined {
    return this.currentDoc?.zoneStates.find(
      (z) => z.shape === shapeIndex && z.zone === zone,
    );
  }

  /** Parse + evaluate + prepare `source`; replaces the session program. */
  async load(source: string): Promise<RunDoc> {
    const doc = await this.boundary.run(source, this.options);
    this.currentSource = source;
    this.currentDoc = doc;
    this.history = [];
    this.events.onDocument?.(doc, source);
    return doc;
  }

  /** Change heuristics/freezing and re-prepare the same program. */
  async setOptions(options: CoreOptions): Promise<void> {
    this.options = { ...options };
    if (!this.currentDoc) return;
    const doc = await this.boundary.prepare(this.currentSource, this.options);
    this.currentDoc = doc;
    this.events.onDocument?.(doc, this.currentSource);
  }

  /** Adopt a committed rewrite: push history, re-prepare, notify. */
  private async adopt(source: string): Promise<void> {
    this.history.push(this.currentSource);
    this.currentSource = source;
    const doc = await this.boundary.prepare(source, this.options);
    this.currentDoc = doc;
    this.events.onDocument?.(doc, source);
  }

  /** Restore the previous program text; false when history is empty. */
  async undo(): Promise<boolean> {
    const previous = this.boundary.undo(this.history);
    if (previous === null) return false;
    this.history.pop();
    this.currentSource = previous;
    const doc = await this.boundary.prepare(previous, this.options);
    this.currentDoc = doc;
    this.events.onDocument?.(doc, previous);
    return true;
  }

  /**
   * Start dragging a zone.  Returns null when the zone is inactive
   * (every candidate location frozen) — there is nothing to solve for.
   */
  beginDrag(shapeIndex: number, zone: string, choose?: Action["choose"]): Drag | null {
    const state = this.zoneState(shapeIndex, zone);
    if (!state || !state.active) return null;
    return new Drag(this, this.boundary, shapeIndex, zone, choose);
  }

  /** @internal */
  async finishDrag(doc: ActDoc | null): Promise<void> {
    if (doc && doc.status === "ok") {
      await this.adopt(doc.source);
    }
    this.events.onCommit?.(doc);
  }

  /** @internal */
  notifyPreview(doc: ActDoc): void {
    this.events.onPreview?.(doc);
  }

  /** @internal */
  notifyError(err: CoreError): void {
    this.events.onError?.(err);
  }
}

/**
 * One drag gesture.  `move` takes *cumulative* offsets from the
 * mouse-down point; calls coalesce so at most one trigger request is in
 * flight and intermediate offsets are dropped.  `end` waits for the
 * in-flight request, then commits the final offsets — unless the drag
 * never moved, which commits nothing.
 */
export class Drag {
  private dx = 0;
  private dy = 0;
  private pending: { dx: number; dy: number } | null = null;
  private inflight: Promise<void> | null = null;
  private ended = false;
  /** Last successful mid-drag solve; kept across failures so the app
   * can hold the previous good render when the solver says no. */
  lastGood: ActDoc | null = null;
  /** Most recent trigger outcome, failed or not (for red highlights). */
  lastResult: ActDoc | null = null;

  constructor(
    private readonly session: Session,
    private readonly boundary: CoreBoundary,
    readonly shapeIndex: number,
    readonly zone: string,
    private readonly choose?: Action["choose"],
  ) {}

  get moved(): boolean {
    return this.dx !== 0 || this.dy !== 0;
  }

  private action(dx: number, dy: number): Action {
    const action: Action = { shapeIndex: this.shapeIndex, zone: this.zone, dx, dy };
    const heuristic = this.session.options.heuristic as Heuristic | undefined;
    if (heuristic) action.heuristic = heuristic;
    if (this.choose !== undefined) action.choose = this.choose;
    return action;
  }

  move(dx: number, dy: number): void {
    if (this.ended) return;
    this.dx = dx;
    this.dy = dy;
    if (this.inflight) {
      this.pending = { dx, dy };
      return;
    }
    this.inflight = this.fire(dx, dy);
  }

  private async fire(dx: number, dy: number): Promise<void> {
    try {
      const doc = await this.boundary.trigger(
        this.session.source,
        this.action(dx, dy),
        this.session.options,
      );
      this.lastResult = doc;
      if (doc.status === "ok") this.lastGood = doc;
      this.session.notifyPreview(doc);
    } catch (err) {
      if (err instanceof CoreError) this.session.notifyError(err);
      else throw err;
    } finally {
      this.inflight = null;
      if (this.pending && !this.ended) {
        const next = this.pending;
        this.pending = null;
        this.inflight = this.fire(next.dx, next.dy);
      }
    }
  }

  /**
   * Release the mouse: commit the cumulative offsets and hand the
   * rewritten program to the session.  Returns the commit document, or
   * null when the drag never moved (nothing to change) or the final
   * solve was refused (the program is left as it was).
   */
  async end(): Promise<ActDoc | null> {
    if (this.ended) return null;
    this.ended = true;
    this.pending = null;
    if (this.inflight) await this.inflight;
    if (!this.moved) {
      await this.session.finishDrag(null);
      return null;
    }
    let doc: ActDoc;
    try {
      doc = await this.boundary.commit(
        this.session.source,
        this.action(this.dx, this.dy),
        this.session.options,
      );
    } catch (err) {
      if (err instanceof CoreError) {
        this.session.notifyError(err);
        await this.session.finishDrag(null);
        return null;
      }
      throw err;
    }
    await this.session.finishDrag(doc);
    return doc.status === "ok" ? doc : null;
  }
}
