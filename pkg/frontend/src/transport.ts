/**
 * HTTP transport: the CoreBoundary over the littlesync JSON service.
 *
 * Every call is one stateless POST to /api carrying the full program
 * source, so the server holds no session and the browser can be
 * reloaded at any point without losing anything but scroll position.
 */

import {
  Action,
  ActDoc,
  CoreBoundary,
  CoreError,
  CoreOptions,
  ErrorCode,
  ParseDoc,
  RunDoc,
} from "./protocol.js";

type Json = Record<string, unknown>;

function optionFields(options: CoreOptions): Json {
  const out: Json = {};
  if (options.heuristic) out.heuristic = options.heuristic;
  if (options.freezeDefault) out.freezeDefault = true;
  if (options.unfreezePrelude) out.unfreezePrelude = true;
  if (options.avoidUnsolvable) out.avoidUnsolvable = true;
  if (options.prelude !== undefined) out.prelude = options.prelude;
  return out;
}

export class HttpBoundary implements CoreBoundary {
  /** @param base service origin, e.g. "" (same origin) or "http://127.0.0.1:8037" */
  constructor(private readonly base: string = "") {}

  private async post(body: Json): Promise<Json> {
    let response: Response;
    try {
      response = await fetch(`${this.base}/api`, {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify(body),
      });
    } catch (err) {
      throw new CoreError("network", `service unreachable: ${err}`);
    }
    let doc: Json;
    try {
      doc = (await response.json()) as Json;
    } catch {
      throw new CoreError("network", `bad response (${response.status})`);
    }
    if (!doc.ok) {
      const code = (doc.code as ErrorCode) ?? "network";
      throw new CoreError(code, String(doc.error ?? `HTTP ${response.status}`));
    }
    return doc;
  }

  async health(): Promise<boolean> {
    try {
      const response = await fetch(`${this.base}/health`);
      return response.ok;
    } catch {
      return false;
    }
  }

  async parse(source: string, options: CoreOptions = {}): Promise<ParseDoc> {
    const doc = await this.post({ op: "parse", source, ...optionFields(options) });
    return doc as unknown as ParseDoc;
  }

  async run(source: string, options: CoreOptions = {}): Promise<RunDoc> {
    const doc = await this.post({ op: "run", source, ...optionFields(options) });
    return doc as unknown as RunDoc;
  }

  prepare(source: string, options: CoreOptions = {}): Promise<RunDoc> {
    // preparing a committed source is exactly a fresh run
    return this.run(source, options);
  }

  private act(source: string, action: Action, options: CoreOptions): Promise<Json> {
    return this.post({ op: "act", source, action, ...optionFields(options) });
  }

  async trigger(source: string, action: Action, options: CoreOptions = {}): Promise<ActDoc> {
    return (await this.act(source, action, options)) as unknown as ActDoc;
  }

  async commit(source: string, action: Action, options: CoreOptions = {}): Promise<ActDoc> {
    return (await this.act(source, action, options)) as unknown as ActDoc;
  }

  undo(history: readonly string[]): string | null {
    // the service is stateless; history lives with the client, so undo
    // resolves without a round trip
    return history.length ? history[history.length - 1]! : null;
  }
}
