/**
 * Browser app: code pane and live SVG canvas side by side.
 *
 * The rendered shapes carry transparent zone overlays; hovering one
 * shows a caption with its assignment, dragging one streams trigger
 * requests (re-rendering mid-drag) and commits the rewritten program on
 * release.  The service is same-origin by default (serve the built
 * files with `littlesync-service --static frontend/dist`) or set with
 * a `?service=http://host:port` query parameter.
 */

import { buildOverlays, highlightColors, ZoneOverlay } from "./overlays.js";
import { ActDoc, CoreError, Heuristic, HighlightSets, RunDoc } from "./protocol.js";
import { Drag, Session } from "./session.js";
import { HttpBoundary } from "./transport.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const PRESETS: Record<string, string> = {
  "sine wave of boxes": `(def [x0 y0 w h sep amp] [50 120 20 90 30 60])
(def n 12!{3-30})
(def boxi (\\i
  (let xi (+ x0 (* i sep))
  (let yi (- y0 (* amp (sin (* i (/ twoPi n)))))
    (rect 'lightblue' xi yi w h)))))
(svg (map boxi (zeroTo n)))
`,
  "overconstrained square": `; One literal feeds both x and y, so an Interior drag cannot satisfy
; both offsets: the last-solved attribute wins.
(def xy 100)
(svg [(rect 'red' xy xy 80 60)])
`,
  "three boxes": `(def [x0 sep] [40 110])
(def box (\\i (rect 250 (+ x0 (* i sep)) 60 80 130)))
(svg (map box [0 1 2]))
`,
};

function el<K extends keyof HTMLElementTagNameMap>(id: string): HTMLElementTagNameMap[K] {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing #${id}`);
  return found as HTMLElementTagNameMap[K];
}

class App {
  private readonly code = el<"textarea">("code");
  private readonly canvas = el<"div">("canvas");
  private readonly captionBar = el<"div">("caption");
  private readonly statusBar = el<"div">("status");
  private readonly heuristicSelect = el<"select">("heuristic");
  private readonly zonesToggle = el<"input">("zones");
  private readonly hiddenToggle = el<"input">("hidden");
  private readonly undoButton = el<"button">("undo");
  private readonly presetSelect = el<"select">("preset");

  private readonly session: Session;
  private drag: Drag | null = null;
  private dragStart: { x: number; y: number } | null = null;

  constructor() {
    const base = new URLSearchParams(location.search).get("service") ?? "";
    this.session = new Session(new HttpBoundary(base), { heuristic: "fair" }, {
      onDocument: (doc, source) => this.showDocument(doc, source),
      onPreview: (doc) => this.showPreview(doc),
      onCommit: (doc) => this.showCommit(doc),
      onError: (err) => this.showError(err),
    });
    this.wireControls();
    this.code.value = PRESETS["sine wave of boxes"]!;
    void this.run();
  }

  private wireControls(): void {
    for (const name of Object.keys(PRESETS)) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      this.presetSelect.append(option);
    }
    this.presetSelect.addEventListener("change", () => {
      this.code.value = PRESETS[this.presetSelect.value] ?? "";
      void this.run();
    });
    el<"button">("run").addEventListener("click", () => void this.run());
    document.addEventListener("keydown", (ev) => {
      if ((ev.ctrlKey || ev.metaKey) && ev.key === "Enter") {
        ev.preventDefault();
        void this.run();
      }
    });
    this.undoButton.addEventListener("click", () => void this.undo());
    this.heuristicSelect.addEventListener("change", () => {
      void this.session.setOptions({
        ...this.session.options,
        heuristic: this.heuristicSelect.value as Heuristic,
      });
    });
    this.zonesToggle.addEventListener("change", () => this.redraw());
    this.hiddenToggle.addEventListener("change", () => this.redraw());
    el<"button">("export").addEventListener("click", () => this.exportSvg());

    window.addEventListener("pointermove", (ev) => this.onPointerMove(ev));
    window.addEventListener("pointerup", (ev) => this.onPointerUp(ev));
  }

  private async run(): Promise<void> {
    this.status("running…");
    try {
      await this.session.load(this.code.value);
      this.status("ready — drag a shape to rewrite the program");
    } catch (err) {
      if (err instanceof CoreError) this.showError(err);
      else throw err;
    }
  }

  private async undo(): Promise<void> {
    if (await this.session.undo()) this.status("undid last commit");
    else this.status("nothing to undo");
  }

  // ------------------------------------------------------------------
  // rendering

  private showDocument(doc: RunDoc, source: string): void {
    this.code.value = source;
    this.undoButton.disabled = !this.session.canUndo;
    this.redraw();
  }

  private redraw(): void {
    const doc = this.session.doc;
    if (!doc) return;
    this.renderSvg(doc.svg, doc);
    if (this.zonesToggle.checked && !this.drag) this.attachOverlays(doc);
  }

  /** Parse the SVG text into the live canvas and apply layer toggles. */
  private renderSvg(svgText: string, doc: RunDoc | null): void {
    this.canvas.innerHTML = svgText;
    const svg = this.canvas.querySelector("svg");
    if (!svg || !doc) return;
    const shapes = this.shapeElements(svg);
    doc.shapes.forEach((shape, i) => {
      const elt = shapes[i];
      if (elt && shape.hidden) {
        elt.style.display = this.hiddenToggle.checked ? "" : "none";
      }
    });
  }

  /** Non-container descendants in document order — mirrors the canvas
   * index, so element i is shape i of the document. */
  private shapeElements(root: SVGElement): SVGGraphicsElement[] {
    const out: SVGGraphicsElement[] = [];
    const walk = (node: Element): void => {
      for (const child of Array.from(node.children)) {
        if (child.tagName === "svg" || child.tagName === "g") walk(child);
        else out.push(child as SVGGraphicsElement);
      }
    };
    walk(root);
    return out;
  }

  private attachOverlays(doc: RunDoc): void {
    const svg = this.canvas.querySelector("svg");
    if (!svg) return;
    const layer = document.createElementNS(SVG_NS, "g");
    layer.setAttribute("data-layer", "zones");
    for (const overlay of buildOverlays(doc, this.hiddenToggle.checked)) {
      layer.append(this.overlayElement(doc, overlay));
    }
    svg.append(layer);
  }

  private overlayElement(doc: RunDoc, overlay: ZoneOverlay): SVGElement {
    const geom = overlay.geom;
    let elt: SVGElement;
    switch (geom.kind) {
      case "rect":
        elt = document.createElementNS(SVG_NS, "rect");
        elt.setAttribute("x", String(geom.x));
        elt.setAttribute("y", String(geom.y));
        elt.setAttribute("width", String(geom.width));
        elt.setAttribute("height", String(geom.height));
        break;
      case "ellipse":
        elt = document.createElementNS(SVG_NS, "ellipse");
        elt.setAttribute("cx", String(geom.cx));
        elt.setAttribute("cy", String(geom.cy));
        elt.setAttribute("rx", String(geom.rx));
        elt.setAttribute("ry", String(geom.ry));
        break;
      case "line":
        elt = document.createElementNS(SVG_NS, "line");
        elt.setAttribute("x1", String(geom.x1));
        elt.setAttribute("y1", String(geom.y1));
        elt.setAttribute("x2", String(geom.x2));
        elt.setAttribute("y2", String(geom.y2));
        break;
      case "polygon":
        elt = document.createElementNS(SVG_NS, "polygon");
        elt.setAttribute("points", geom.points.map(([x, y]) => `${x},${y}`).join(" "));
        break;
      case "point":
        elt = document.createElementNS(SVG_NS, "circle");
        elt.setAttribute("cx", String(geom.cx));
        elt.setAttribute("cy", String(geom.cy));
        elt.setAttribute("r", "4");
        break;
    }
    elt.classList.add("zone", `zone-${geom.kind}`, overlay.active ? "active" : "inactive");
    elt.addEventListener("pointerenter", () => this.hoverZone(doc, overlay));
    elt.addEventListener("pointerleave", () => this.caption(""));
    elt.addEventListener("pointerdown", (ev) => this.onPointerDown(ev, overlay));
    return elt;
  }

  private hoverZone(doc: RunDoc, overlay: ZoneOverlay): void {
    const state = this.session.zoneState(overlay.shape, overlay.zone);
    this.caption(
      `shape ${overlay.shape} · ${overlay.caption}`,
      state?.highlights,
    );
  }

  /** Caption bar: text plus colored chips for highlighted literals. */
  private caption(text: string, highlights?: HighlightSets): void {
    this.captionBar.textContent = text;
    const doc = this.session.doc;
    if (!highlights || !doc) return;
    for (const [id, color] of highlightColors(highlights)) {
      const loc = doc.locations.find((l) => l.id === id);
      const chip = document.createElement("span");
      chip.className = `chip ${color}`;
      chip.textContent = loc?.name ?? `#${id}`;
      this.captionBar.append(" ", chip);
    }
  }

  // ------------------------------------------------------------------
  // dragging

  private onPointerDown(ev: PointerEvent, overlay: ZoneOverlay): void {
    if (!overlay.active) {
      this.status(`${overlay.zone} is inactive: every candidate literal is frozen`);
      return;
    }
    ev.preventDefault();
    this.drag = this.session.beginDrag(overlay.shape, overlay.zone);
    if (!this.drag) return;
    this.dragStart = { x: ev.clientX, y: ev.clientY };
    this.canvas.querySelector('[data-layer="zones"]')?.remove();
    this.status(`dragging shape ${overlay.shape} ${overlay.zone}…`);
  }

  private onPointerMove(ev: PointerEvent): void {
    if (!this.drag || !this.dragStart) return;
    // the canvas has no viewBox scaling, so screen px are user units
    this.drag.move(ev.clientX - this.dragStart.x, ev.clientY - this.dragStart.y);
  }

  private onPointerUp(ev: PointerEvent): void {
    if (!this.drag) return;
    const drag = this.drag;
    this.drag = null;
    this.dragStart = null;
    void drag.end();
  }

  private showPreview(doc: ActDoc): void {
    if (doc.status === "ok") {
      this.renderSvg(doc.svg, this.session.doc);
      const moves = doc.bindings
        .map(([id, value]) => {
          const loc = this.session.doc?.locations.find((l) => l.id === id);
          return `${loc?.name ?? `#${id}`} ← ${value}`;
        })
        .join(", ");
      this.caption(moves, doc.highlights);
    } else {
      // keep the last good render; just surface the failure
      this.caption(`no solution: ${doc.outcomes.find((o) => !o.ok)?.reason ?? ""}`,
        doc.highlights);
    }
  }

  private showCommit(doc: ActDoc | null): void {
    if (!doc) {
      this.status("no change committed");
      this.redraw();
      return;
    }
    if (doc.status !== "ok") {
      this.status(`drag refused (${doc.status}); program unchanged`);
      this.redraw();
      return;
    }
    const extra = [doc.note, doc.preludeNote].filter(Boolean).join("; ");
    this.status(
      `committed — ${doc.classification ?? "?"}${extra ? ` (${extra})` : ""}`,
    );
  }

  private showError(err: CoreError): void {
    this.status(`${err.code} error: ${err.message}`, true);
  }

  private status(text: string, isError = false): void {
    this.statusBar.textContent = text;
    this.statusBar.classList.toggle("error", isError);
  }

  private exportSvg(): void {
    const doc = this.session.doc;
    if (!doc) return;
    const blob = new Blob([doc.svg], { type: "image/svg+xml" });
    const a = document.createElement("a");
    a.href = URL.createObjectURL(blob);
    a.download = "canvas.svg";
    a.click();
    URL.revokeObjectURL(a.href);
  }
}

new App();
