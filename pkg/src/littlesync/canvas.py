"""Indexing an evaluated canvas value.

An SVG node is the little list [kind attrs children].  indexCanvas
walks the output value, assigns every shape a document-order index, and
records each numeric attribute as a slot: its float value, its trace,
and its structural path from the root value (so a later re-evaluation
can be compared at the same address).  'svg' and 'g' nodes are
containers, not shapes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .errors import LittleRuntimeError
from .values import (
    Trace,
    Value,
    ValuePath,
    VCons,
    VNil,
    VNum,
    VStr,
    describe_value,
)

_CONTAINERS = {"svg", "g"}


@dataclass
class NumSlot:
    name: str
    value: float
    trace: Trace
    path: ValuePath


@dataclass
class IndexedShape:
    index: int
    kind: str
    slots: dict[str, NumSlot] = field(default_factory=dict)
    point_count: int = 0
    hidden: bool = False
    zones_attr: Optional[str] = None
    node_path: ValuePath = ()


@dataclass
class Canvas:
    root: Value
    shapes: list[IndexedShape]

    def shape(self, index: int) -> IndexedShape:
        if index < 0 or index >= len(self.shapes):
            raise LittleRuntimeError(
                f"no shape with index {index}; the canvas has {len(self.shapes)} shapes"
            )
        return self.shapes[index]

    def slot_paths(self) -> list[ValuePath]:
        return [slot.path for shape in self.shapes for slot in shape.slots.values()]


def _fail(msg: str) -> LittleRuntimeError:
    return LittleRuntimeError(f"the output is not an SVG canvas: {msg}")


def _node_parts(v: Value, path: ValuePath) -> tuple[str, list, list, ValuePath, ValuePath]:
    """Destructure [kind attrs children]; returns values with the paths
    of the attrs and children list heads."""
    if not isinstance(v, VCons) or not isinstance(v.head, VStr):
        raise _fail(f"expected an SVG node [kind attrs children], found {describe_value(v)}")
    kind = v.head.value
    rest = v.tail
    if not isinstance(rest, VCons):
        raise _fail(f"node {kind!r} is missing its attribute list")
    attrs_path = path + ("d", "a")
    rest2 = rest.tail
    if not isinstance(rest2, VCons) or not isinstance(rest2.tail, VNil):
        raise _fail(f"node {kind!r} must be a three-element list [kind attrs children]")
    children_path = path + ("d", "d", "a")
    attrs = _expect_list(rest.head, f"attributes of {kind!r}")
    children = _expect_list(rest2.head, f"children of {kind!r}")
    return kind, attrs, children, attrs_path, children_path


def _expect_list(v: Value, what: str) -> list[Value]:
    out = []
    cur = v
    while isinstance(cur, VCons):
        out.append(cur.head)
        cur = cur.tail
    if not isinstance(cur, VNil):
        raise _fail(f"{what} must form a proper list")
    return out


def _attr_pair(v: Value) -> tuple[str, Value]:
    if (
        isinstance(v, VCons)
        and isinstance(v.head, VStr)
        and isinstance(v.tail, VCons)
        and isinstance(v.tail.tail, VNil)
    ):
        return v.head.value, v.tail.head
    raise _fail(f"an attribute must be a [key value] pair, found {describe_value(v)}")


def _index_points(shape: IndexedShape, pts: Value, path: ValuePath) -> None:
    i = 0
    cur = pts
    cur_path = path
    while isinstance(cur, VCons):
        i += 1
        pair = cur.head
        pair_path = cur_path + ("a",)
        if not (
            isinstance(pair, VCons)
            and isinstance(pair.head, VNum)
            and isinstance(pair.tail, VCons)
            and isinstance(pair.tail.head, VNum)
            and isinstance(pair.tail.tail, VNil)
        ):
            raise _fail(f"point {i} of {shape.kind!r} must be an [x y] pair of numbers")
        x, y = pair.head, pair.tail.head
        shape.slots[f"x{i}"] = NumSlot(f"x{i}", x.value, x.trace, pair_path + ("a",))
        shape.slots[f"y{i}"] = NumSlot(f"y{i}", y.value, y.trace, pair_path + ("d", "a"))
        cur = cur.tail
        cur_path = cur_path + ("d",)
    if not isinstance(cur, VNil):
        raise _fail(f"'points' of {shape.kind!r} must form a proper list")
    shape.point_count = i


def _index_path_d(shape: IndexedShape, d: Value, path: ValuePath) -> None:
    """Pair up the numeric elements of a d-command list as coordinate
    points (command letters reset nothing: pairs are positional)."""
    nums: list[tuple[VNum, ValuePath]] = []
    cur = d
    cur_path = path
    while isinstance(cur, VCons):
        if isinstance(cur.head, VNum):
            nums.append((cur.head, cur_path + ("a",)))
        cur = cur.tail
        cur_path = cur_path + ("d",)
    if not isinstance(cur, VNil):
        raise _fail(f"'d' of {shape.kind!r} must form a proper list")
    pairs = len(nums) // 2
    for i in range(pairs):
        x, xp = nums[2 * i]
        y, yp = nums[2 * i + 1]
        shape.slots[f"x{i + 1}"] = NumSlot(f"x{i + 1}", x.value, x.trace, xp)
        shape.slots[f"y{i + 1}"] = NumSlot(f"y{i + 1}", y.value, y.trace, yp)
    if len(nums) % 2 == 1:
        v, p = nums[-1]
        shape.slots[f"d{len(nums)}"] = NumSlot(f"d{len(nums)}", v.value, v.trace, p)
    shape.point_count = pairs


def _index_shape(index: int, kind: str, attrs: list[Value], attrs_path: ValuePath, node_path: ValuePath) -> IndexedShape:
    shape = IndexedShape(index=index, kind=kind, node_path=node_path)
    for j, attr in enumerate(attrs):
        key, value = _attr_pair(attr)
        value_path = attrs_path + ("d",) * j + ("a", "d", "a")
        if key == "HIDDEN":
            shape.hidden = True
        elif key == "ZONES":
            shape.zones_attr = value.value if isinstance(value, VStr) else None
        elif key == "points":
            _index_points(shape, value, value_path)
        elif key == "d":
            _index_path_d(shape, value, value_path)
        elif isinstance(value, VNum):
            shape.slots[key] = NumSlot(key, value.value, value.trace, value_path)
        elif isinstance(value, VCons) and key in ("fill", "stroke"):
            # rgba components are addressable numeric slots too
            comps = _expect_list(value, f"{key!r} of {kind!r}")
            for k, comp in enumerate(comps):
                if isinstance(comp, VNum):
                    name = f"{key}.{k}"
                    shape.slots[name] = NumSlot(
                        name, comp.value, comp.trace, value_path + ("d",) * k + ("a",)
                    )
    return shape


def index_canvas(value: Value) -> Canvas:
    kind, _attrs, children, _ap, children_path = _node_parts(value, ())
    if kind != "svg":
        raise _fail(f"the root node must be 'svg', found {kind!r}")
    shapes: list[IndexedShape] = []

    def walk_children(children: list[Value], children_path: ValuePath) -> None:
        for i, child in enumerate(children):
            child_path = children_path + ("d",) * i + ("a",)
            if isinstance(child, VStr):
                continue  # text content
            ckind, cattrs, cchildren, cattrs_path, cchildren_path = _node_parts(
                child, child_path
            )
            if ckind in _CONTAINERS:
                walk_children(cchildren, cchildren_path)
            else:
                shapes.append(
                    _index_shape(len(shapes), ckind, cattrs, cattrs_path, child_path)
                )

    walk_children(children, children_path)
    return Canvas(root=value, shapes=shapes)
