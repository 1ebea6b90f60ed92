import { describe, expect, it } from "vitest";

import {
  Action,
  ActDoc,
  CoreBoundary,
  CoreOptions,
  ParseDoc,
  RunDoc,
} from "../src/protocol.js";
import { Session, SessionEvents } from "../src/session.js";

function runDoc(svg = "<svg />"): RunDoc {
  return {
    shapes: [{ index: 0, kind: "rect", hidden: false, slots: {} }],
    locations: [],
    svg,
    zoneStates: [
      {
        shape: 0,
        zone: "Interior",
        active: true,
        candidateCount: 2,
        assignment: { x: 33, y: 34 },
      },
      { shape: 0, zone: "RightEdge", active: false, candidateCount: 0 },
    ],
  };
}

function actDoc(source: string, ok = true): ActDoc {
  return {
    status: ok ? "ok" : "unsolvable",
    bindings: ok ? [[33, 95]] : [],
    source,
    highlights: { yellow: [], gray: [], green: ok ? [33] : [], red: ok ? [] : [33] },
    outcomes: [],
    svg: `<svg data-from="${source}" />`,
  };
}

/** Scripted boundary: records calls; trigger resolution can be held. */
class FakeBoundary implements CoreBoundary {
  triggers: Action[] = [];
  commits: Action[] = [];
  prepares: string[] = [];
  holdTriggers = false;
  private held: Array<(doc: ActDoc) => void> = [];
  triggerResult: (action: Action) => ActDoc = (a) => actDoc(`triggered ${a.dx},${a.dy}`);
  commitResult: (action: Action) => ActDoc = (a) => actDoc(`committed ${a.dx},${a.dy}`);

  async parse(source: string): Promise<ParseDoc> {
    return { source, locations: [] };
  }

  async run(): Promise<RunDoc> {
    return runDoc();
  }

  async prepare(source: string): Promise<RunDoc> {
    this.prepares.push(source);
    return runDoc(`<svg data-prepared="${this.prepares.length}" />`);
  }

  trigger(_source: string, action: Action, _options?: CoreOptions): Promise<ActDoc> {
    this.triggers.push(action);
    if (!this.holdTriggers) return Promise.resolve(this.triggerResult(action));
    return new Promise((resolve) => {
      this.held.push(resolve);
    });
  }

  releaseTrigger(): void {
    const resolve = this.held.shift();
    if (!resolve) throw new Error("no held trigger");
    resolve(this.triggerResult(this.triggers[this.triggers.length - 1]!));
  }

  async commit(_source: string, action: Action): Promise<ActDoc> {
    this.commits.push(action);
    return this.commitResult(action);
  }

  undo(history: readonly string[]): string | null {
    return history.length ? history[history.length - 1]! : null;
  }
}

function flush(): Promise<void> {
  return new Promise((resolve) => setTimeout(resolve, 0));
}

async function makeSession(events: SessionEvents = {}) {
  const boundary = new FakeBoundary();
  const session = new Session(boundary, {}, events);
  await session.load("(svg [])");
  return { boundary, session };
}

describe("session lifecycle", () => {
  it("load installs source and document", async () => {
    const { session } = await makeSession();
    expect(session.source).toBe("(svg [])");
    expect(session.doc?.zoneStates).toHaveLength(2);
    expect(session.canUndo).toBe(false);
  });

  it("refuses drags on inactive or unknown zones", async () => {
    const { session } = await makeSession();
    expect(session.beginDrag(0, "RightEdge")).toBeNull();
    expect(session.beginDrag(0, "NoSuchZone")).toBeNull();
    expect(session.beginDrag(5, "Interior")).toBeNull();
    expect(session.beginDrag(0, "Interior")).not.toBeNull();
  });

  it("undo with no history is a no-op", async () => {
    const { boundary, session } = await makeSession();
    expect(await session.undo()).toBe(false);
    expect(boundary.prepares).toHaveLength(0);
  });
});

describe("drag loop", () => {
  it("coalesces moves to one in-flight trigger, latest offsets win", async () => {
    const { boundary, session } = await makeSession();
    boundary.holdTriggers = true;
    const drag = session.beginDrag(0, "Interior")!;

    drag.move(1, 0);
    drag.move(2, 0);
    drag.move(3, 1);
    expect(boundary.triggers).toHaveLength(1);
    expect(boundary.triggers[0]).toMatchObject({ dx: 1, dy: 0 });

    boundary.releaseTrigger();
    await flush();
    expect(boundary.triggers).toHaveLength(2);
    expect(boundary.triggers[1]).toMatchObject({ dx: 3, dy: 1 });

    boundary.releaseTrigger();
    await flush();
    expect(boundary.triggers).toHaveLength(2);
  });

  it("keeps the last good result across solver failures", async () => {
    const { boundary, session } = await makeSession();
    const drag = session.beginDrag(0, "Interior")!;

    drag.move(5, 0);
    await flush();
    const good = drag.lastGood;
    expect(good?.status).toBe("ok");

    boundary.triggerResult = () => actDoc("failed", false);
    drag.move(9, 0);
    await flush();
    expect(drag.lastResult?.status).toBe("unsolvable");
    expect(drag.lastGood).toBe(good);
  });

  it("zero-length drags commit nothing", async () => {
    const commits: (ActDoc | null)[] = [];
    const { boundary, session } = await makeSession({
      onCommit: (doc) => commits.push(doc),
    });
    const drag = session.beginDrag(0, "Interior")!;
    expect(await drag.end()).toBeNull();
    expect(boundary.commits).toHaveLength(0);
    expect(session.source).toBe("(svg [])");
    expect(commits).toEqual([null]);
  });

  it("commits the final cumulative offsets and adopts the rewrite", async () => {
    const { boundary, session } = await makeSession();
    const drag = session.beginDrag(0, "Interior")!;
    drag.move(10, 2);
    await flush();
    drag.move(45, 0);
    await flush();

    const doc = await drag.end();
    expect(boundary.commits).toEqual([
      { shapeIndex: 0, zone: "Interior", dx: 45, dy: 0 },
    ]);
    expect(doc?.source).toBe("committed 45,0");
    expect(session.source).toBe("committed 45,0");
    expect(boundary.prepares).toEqual(["committed 45,0"]);
    expect(session.canUndo).toBe(true);
  });

  it("waits for the in-flight trigger before committing", async () => {
    const { boundary, session } = await makeSession();
    boundary.holdTriggers = true;
    const drag = session.beginDrag(0, "Interior")!;
    drag.move(5, 0);
    drag.move(7, 0); // queued; must be dropped by end()

    const ending = drag.end();
    let settled = false;
    void ending.then(() => {
      settled = true;
    });
    await flush();
    expect(settled).toBe(false);
    expect(boundary.commits).toHaveLength(0);

    boundary.releaseTrigger();
    await ending;
    expect(boundary.triggers).toHaveLength(1); // the queued move never fired
    expect(boundary.commits).toEqual([
      { shapeIndex: 0, zone: "Interior", dx: 7, dy: 0 },
    ]);
  });

  it("a refused commit leaves the program untouched", async () => {
    const commits: (ActDoc | null)[] = [];
    const { boundary, session } = await makeSession({
      onCommit: (doc) => commits.push(doc),
    });
    boundary.commitResult = () => actDoc("refused", false);
    const drag = session.beginDrag(0, "Interior")!;
    drag.move(3, 3);
    await flush();

    expect(await drag.end()).toBeNull();
    expect(session.source).toBe("(svg [])");
    expect(boundary.prepares).toHaveLength(0);
    expect(commits[0]?.status).toBe("unsolvable");
  });

  it("moves after end are ignored", async () => {
    const { boundary, session } = await makeSession();
    const drag = session.beginDrag(0, "Interior")!;
    drag.move(4, 4);
    await flush();
    await drag.end();
    const calls = boundary.triggers.length;
    drag.move(9, 9);
    await flush();
    expect(boundary.triggers).toHaveLength(calls);
    expect(await drag.end()).toBeNull();
    expect(boundary.commits).toHaveLength(1);
  });

  it("passes heuristic and choose through to the action", async () => {
    const boundary = new FakeBoundary();
    const session = new Session(boundary, { heuristic: "none" });
    await session.load("(svg [])");
    const drag = session.beginDrag(0, "Interior", { x: "sep" })!;
    drag.move(1, 1);
    await flush();
    await drag.end();
    expect(boundary.triggers[0]).toEqual({
      shapeIndex: 0, zone: "Interior", dx: 1, dy: 1,
      heuristic: "none", choose: { x: "sep" },
    });
    expect(boundary.commits[0]).toMatchObject({ heuristic: "none", choose: { x: "sep" } });
  });
});

describe("undo", () => {
  it("restores the previous program through the boundary", async () => {
    const { boundary, session } = await makeSession();
    const drag = session.beginDrag(0, "Interior")!;
    drag.move(45, 0);
    await flush();
    await drag.end();
    expect(session.source).toBe("committed 45,0");

    expect(await session.undo()).toBe(true);
    expect(session.source).toBe("(svg [])");
    expect(session.canUndo).toBe(false);
    expect(boundary.prepares).toEqual(["committed 45,0", "(svg [])"]);

    expect(await session.undo()).toBe(false);
  });

  it("two commits take two undos", async () => {
    const { session } = await makeSession();
    for (const dx of [10, 20]) {
      const drag = session.beginDrag(0, "Interior")!;
      drag.move(dx, 0);
      await flush();
      await drag.end();
    }
    expect(session.source).toBe("committed 20,0");
    await session.undo();
    expect(session.source).toBe("committed 10,0");
    await session.undo();
    expect(session.source).toBe("(svg [])");
    expect(session.canUndo).toBe(false);
  });
});

describe("events", () => {
  it("document, preview, and commit events fire in order", async () => {
    const log: string[] = [];
    const { session } = await makeSession({
      onDocument: (_doc, source) => log.push(`doc:${source}`),
      onPreview: (doc) => log.push(`preview:${doc.status}`),
      onCommit: (doc) => log.push(`commit:${doc ? doc.status : "none"}`),
    });
    const drag = session.beginDrag(0, "Interior")!;
    drag.move(45, 0);
    await flush();
    await drag.end();
    expect(log).toEqual([
      "doc:(svg [])", // initial load
      "preview:ok",
      "doc:committed 45,0",
      "commit:ok",
    ]);
  });
});
