"""Zone tables: which numeric attributes each draggable region of a
shape perturbs, and with which sign of the mouse delta."""

from __future__ import annotations

from dataclasses import dataclass

from .canvas import IndexedShape


@dataclass(frozen=True)
class Offset:
    attr: str
    axis: str  # 'x' or 'y'
    sign: float  # +1.0 or -1.0

    def delta(self, dx: float, dy: float) -> float:
        return self.sign * (dx if self.axis == "x" else dy)


@dataclass(frozen=True)
class Zone:
    name: str
    offsets: tuple[Offset, ...]


def _z(name: str, *offs: tuple[str, str, float]) -> Zone:
    return Zone(name, tuple(Offset(a, ax, s) for a, ax, s in offs))


_RECT = [
    _z("Interior", ("x", "x", 1.0), ("y", "y", 1.0)),
    _z("RightEdge", ("width", "x", 1.0)),
    _z("BotRightCorner", ("width", "x", 1.0), ("height", "y", 1.0)),
    _z("BotEdge", ("height", "y", 1.0)),
    _z("BotLeftCorner", ("x", "x", 1.0), ("width", "x", -1.0), ("height", "y", -1.0)),
    _z("LeftEdge", ("x", "x", 1.0), ("width", "x", -1.0)),
    _z(
        "TopLeftCorner",
        ("x", "x", 1.0),
        ("y", "y", 1.0),
        ("width", "x", -1.0),
        ("height", "y", -1.0),
    ),
    _z("TopEdge", ("y", "y", 1.0), ("height", "y", -1.0)),
    _z("TopRightCorner", ("y", "y", 1.0), ("width", "x", 1.0), ("height", "y", -1.0)),
]

_LINE = [
    _z("Point1", ("x1", "x", 1.0), ("y1", "y", 1.0)),
    _z("Point2", ("x2", "x", 1.0), ("y2", "y", 1.0)),
    _z("Edge", ("x1", "x", 1.0), ("y1", "y", 1.0), ("x2", "x", 1.0), ("y2", "y", 1.0)),
]

_ELLIPSE = [
    _z("Interior", ("cx", "x", 1.0), ("cy", "y", 1.0)),
    _z("RightEdge", ("rx", "x", 1.0)),
    _z("BotEdge", ("ry", "y", 1.0)),
]

_CIRCLE = [
    _z("Interior", ("cx", "x", 1.0), ("cy", "y", 1.0)),
    _z("RightEdge", ("r", "x", 1.0)),
    _z("BotEdge", ("r", "y", 1.0)),
]


def _point(i: int) -> list[tuple[str, str, float]]:
    return [(f"x{i}", "x", 1.0), (f"y{i}", "y", 1.0)]


def _poly_zones(n: int, closed: bool) -> list[Zone]:
    zones = [_z(f"Point{i}", *_point(i)) for i in range(1, n + 1)]
    edges = n if closed else n - 1
    for i in range(1, max(edges, 0) + 1):
        j = i % n + 1 if closed else i + 1
        zones.append(_z(f"Edge{i}", *_point(i), *_point(j)))
    interior: list[tuple[str, str, float]] = []
    for i in range(1, n + 1):
        interior.extend(_point(i))
    zones.append(_z("Interior", *interior))
    return zones


def zones_for(shape: IndexedShape) -> list[Zone]:
    kind = shape.kind
    if kind == "rect":
        return list(_RECT)
    if kind == "line":
        return list(_LINE)
    if kind == "ellipse":
        return list(_ELLIPSE)
    if kind == "circle":
        return list(_CIRCLE)
    if kind in ("polygon", "polyline"):
        if shape.point_count == 0:
            return []
        return _poly_zones(shape.point_count, closed=(kind == "polygon"))
    if kind == "path":
        return [_z(f"Point{i}", *_point(i)) for i in range(1, shape.point_count + 1)]
    return []


def find_zone(shape: IndexedShape, name: str) -> Zone:
    for zone in zones_for(shape):
        if zone.name == name:
            return zone
    kinds = ", ".join(z.name for z in zones_for(shape)) or "none"
    raise KeyError(f"shape {shape.index} ({shape.kind!r}) has no zone {name!r}; available: {kinds}")
