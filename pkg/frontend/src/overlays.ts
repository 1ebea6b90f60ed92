/**
 * Zone overlay geometry and hover captions.
 *
 * Pure functions from the prepared document to drawable primitives:
 * the app lays these over the rendered SVG (same user-unit coordinate
 * system) and wires pointer events to them.  Interiors come first and
 * point handles last so small targets stay clickable.
 */

import { HighlightSets, RunDoc, ShapeInfo, ZoneStateInfo } from "./protocol.js";

/** Radius of point/corner grab handles, in SVG user units. */
export const HANDLE_RADIUS = 4;
/** Hit thickness for edge lines, in SVG user units. */
export const EDGE_WIDTH = 6;

export type OverlayGeom =
  | { kind: "rect"; x: number; y: number; width: number; height: number }
  | { kind: "ellipse"; cx: number; cy: number; rx: number; ry: number }
  | { kind: "line"; x1: number; y1: number; x2: number; y2: number }
  | { kind: "polygon"; points: [number, number][] }
  | { kind: "point"; cx: number; cy: number };

export interface ZoneOverlay {
  shape: number;
  zone: string;
  active: boolean;
  caption: string;
  geom: OverlayGeom;
}

function slot(shape: ShapeInfo, name: string): number {
  const s = shape.slots[name];
  if (!s) throw new Error(`shape ${shape.index} has no numeric attribute '${name}'`);
  return s.value;
}

function pointCount(shape: ShapeInfo): number {
  let n = 0;
  while (shape.slots[`x${n + 1}`] && shape.slots[`y${n + 1}`]) n += 1;
  return n;
}

function rectGeom(shape: ShapeInfo, zone: string): OverlayGeom | null {
  const x = slot(shape, "x");
  const y = slot(shape, "y");
  const w = slot(shape, "width");
  const h = slot(shape, "height");
  switch (zone) {
    case "Interior":
      return { kind: "rect", x, y, width: w, height: h };
    case "TopEdge":
      return { kind: "line", x1: x, y1: y, x2: x + w, y2: y };
    case "BotEdge":
      return { kind: "line", x1: x, y1: y + h, x2: x + w, y2: y + h };
    case "LeftEdge":
      return { kind: "line", x1: x, y1: y, x2: x, y2: y + h };
    case "RightEdge":
      return { kind: "line", x1: x + w, y1: y, x2: x + w, y2: y + h };
    case "TopLeftCorner":
      return { kind: "point", cx: x, cy: y };
    case "TopRightCorner":
      return { kind: "point", cx: x + w, cy: y };
    case "BotLeftCorner":
      return { kind: "point", cx: x, cy: y + h };
    case "BotRightCorner":
      return { kind: "point", cx: x + w, cy: y + h };
    default:
      return null;
  }
}

function lineGeom(shape: ShapeInfo, zone: string): OverlayGeom | null {
  const x1 = slot(shape, "x1");
  const y1 = slot(shape, "y1");
  const x2 = slot(shape, "x2");
  const y2 = slot(shape, "y2");
  switch (zone) {
    case "Point1":
      return { kind: "point", cx: x1, cy: y1 };
    case "Point2":
      return { kind: "point", cx: x2, cy: y2 };
    case "Edge":
      return { kind: "line", x1, y1, x2, y2 };
    default:
      return null;
  }
}

function roundGeom(shape: ShapeInfo, zone: string): OverlayGeom | null {
  const cx = slot(shape, "cx");
  const cy = slot(shape, "cy");
  const rx = shape.kind === "circle" ? slot(shape, "r") : slot(shape, "rx");
  const ry = shape.kind === "circle" ? slot(shape, "r") : slot(shape, "ry");
  switch (zone) {
    case "Interior":
      return { kind: "ellipse", cx, cy, rx, ry };
    case "RightEdge":
      return { kind: "point", cx: cx + rx, cy };
    case "BotEdge":
      return { kind: "point", cx, cy: cy + ry };
    default:
      return null;
  }
}

function polyGeom(shape: ShapeInfo, zone: string): OverlayGeom | null {
  const n = pointCount(shape);
  const point = (i: number): [number, number] => [
    slot(shape, `x${i}`),
    slot(shape, `y${i}`),
  ];
  let m: RegExpMatchArray | null;
  if ((m = zone.match(/^Point(\d+)$/))) {
    const [cx, cy] = point(Number(m[1]));
    return { kind: "point", cx, cy };
  }
  if ((m = zone.match(/^Edge(\d+)$/))) {
    const i = Number(m[1]);
    const j = shape.kind === "polygon" ? (i % n) + 1 : i + 1;
    const [x1, y1] = point(i);
    const [x2, y2] = point(j);
    return { kind: "line", x1, y1, x2, y2 };
  }
  if (zone === "Interior") {
    const points: [number, number][] = [];
    for (let i = 1; i <= n; i += 1) points.push(point(i));
    return { kind: "polygon", points };
  }
  return null;
}

function geomFor(shape: ShapeInfo, zone: string): OverlayGeom | null {
  switch (shape.kind) {
    case "rect":
      return rectGeom(shape, zone);
    case "line":
      return lineGeom(shape, zone);
    case "circle":
    case "ellipse":
      return roundGeom(shape, zone);
    case "polygon":
    case "polyline":
    case "path":
      return polyGeom(shape, zone);
    default:
      return null;
  }
}

function locationLabel(doc: RunDoc, id: number): string {
  const loc = doc.locations.find((l) => l.id === id);
  return loc?.name ?? `#${id}`;
}

/**
 * Hover caption: zone name, Active/Inactive, and for active zones the
 * chosen location per attribute plus how many assignments were
 * possible — e.g. "Interior · Active · x: sep, y: amp · 4 options".
 */
export function caption(doc: RunDoc, state: ZoneStateInfo): string {
  const parts = [state.zone, state.active ? "Active" : "Inactive"];
  if (state.active && state.assignment) {
    const chosen = Object.entries(state.assignment)
      .map(([attr, id]) => `${attr}: ${locationLabel(doc, id)}`)
      .join(", ");
    parts.push(chosen);
    if (state.candidateCount > 1) parts.push(`${state.candidateCount} options`);
  }
  return parts.join(" · ");
}

const GEOM_LAYER: Record<OverlayGeom["kind"], number> = {
  rect: 0,
  ellipse: 0,
  polygon: 0,
  line: 1,
  point: 2,
};

/**
 * All drawable zone overlays for the document, big regions first and
 * grab handles last (paint order doubles as hit-test priority).
 */
export function buildOverlays(doc: RunDoc, hiddenLayer = false): ZoneOverlay[] {
  const overlays: ZoneOverlay[] = [];
  for (const state of doc.zoneStates) {
    const shape = doc.shapes[state.shape];
    if (!shape) continue;
    if (shape.hidden && !hiddenLayer) continue;
    const geom = geomFor(shape, state.zone);
    if (!geom) continue;
    overlays.push({
      shape: state.shape,
      zone: state.zone,
      active: state.active,
      caption: caption(doc, state),
      geom,
    });
  }
  overlays.sort(
    (a, b) => GEOM_LAYER[a.geom.kind] - GEOM_LAYER[b.geom.kind] || a.shape - b.shape,
  );
  return overlays;
}

export type HighlightColor = "yellow" | "gray" | "green" | "red";

/**
 * Location id -> tint.  Later sets win so a location that failed during
 * a drag shows red even if it was also the hover choice.
 */
export function highlightColors(sets: HighlightSets): Map<number, HighlightColor> {
  const colors = new Map<number, HighlightColor>();
  for (const [color, ids] of [
    ["gray", sets.gray],
    ["yellow", sets.yellow],
    ["green", sets.green],
    ["red", sets.red],
  ] as const) {
    for (const id of ids) colors.set(id, color);
  }
  return colors;
}
