"""Rendering an evaluated canvas value to SVG markup."""

from __future__ import annotations

import colorsys
from xml.etree import ElementTree as ET

from .errors import LittleRuntimeError
from .values import Value, VCons, VNil, VNum, VStr, describe_value

_DROPPED_ATTRS = {"HIDDEN", "ZONES"}


def format_attr_num(x: float) -> str:
    """At most four decimal places, trailing zeros trimmed."""
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    s = f"{x:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def color_string(n: float) -> str:
    """Numeric color code: 0..360 picks a hue (full saturation, half
    lightness), 361..500 a grayscale ramp."""
    n = min(500.0, max(0.0, n))
    if n <= 360.0:
        r, g, b = colorsys.hls_to_rgb(n / 360.0, 0.5, 1.0)
        return f"rgb({round(r * 255)},{round(g * 255)},{round(b * 255)})"
    g = round((n - 361.0) / 139.0 * 255.0)
    return f"rgb({g},{g},{g})"


def _fail(msg: str) -> LittleRuntimeError:
    return LittleRuntimeError(f"cannot render SVG: {msg}")


def _to_list(v: Value, what: str) -> list[Value]:
    out = []
    cur = v
    while isinstance(cur, VCons):
        out.append(cur.head)
        cur = cur.tail
    if not isinstance(cur, VNil):
        raise _fail(f"{what} must form a proper list")
    return out


def _points_string(v: Value) -> str:
    parts = []
    for pair in _to_list(v, "'points'"):
        xy = _to_list(pair, "a point")
        if len(xy) != 2 or not all(isinstance(c, VNum) for c in xy):
            raise _fail("each point must be an [x y] pair of numbers")
        parts.append(f"{format_attr_num(xy[0].value)},{format_attr_num(xy[1].value)}")
    return " ".join(parts)


def _d_string(v: Value) -> str:
    parts = []
    for tok in _to_list(v, "'d'"):
        if isinstance(tok, VStr):
            parts.append(tok.value)
        elif isinstance(tok, VNum):
            parts.append(format_attr_num(tok.value))
        else:
            raise _fail(f"'d' elements must be strings or numbers, found {describe_value(tok)}")
    return " ".join(parts)


def _color_value(v: Value, key: str) -> str:
    if isinstance(v, VStr):
        return v.value
    if isinstance(v, VNum):
        return color_string(v.value)
    if isinstance(v, (VCons, VNil)):
        comps = _to_list(v, f"{key!r}")
        if len(comps) == 4 and all(isinstance(c, VNum) for c in comps):
            r, g, b, a = (c.value for c in comps)
            return (
                f"rgba({format_attr_num(r)},{format_attr_num(g)},"
                f"{format_attr_num(b)},{format_attr_num(a)})"
            )
        raise _fail(f"a {key!r} list must be four numbers [r g b a]")
    raise _fail(f"unsupported {key!r} value: {describe_value(v)}")


def _attr_string(key: str, v: Value) -> str:
    if key in ("fill", "stroke"):
        return _color_value(v, key)
    if key == "points":
        return _points_string(v)
    if key == "d":
        return _d_string(v)
    if isinstance(v, VStr):
        return v.value
    if isinstance(v, VNum):
        return format_attr_num(v.value)
    raise _fail(f"unsupported value for attribute {key!r}: {describe_value(v)}")


def _build(v: Value, is_root: bool) -> ET.Element:
    node = _to_list(v, "an SVG node")
    if len(node) != 3 or not isinstance(node[0], VStr):
        raise _fail(f"expected [kind attrs children], found {describe_value(v)}")
    kind = node[0].value
    if is_root and kind != "svg":
        raise _fail(f"the root node must be 'svg', found {kind!r}")
    el = ET.Element(kind)
    if is_root:
        el.set("xmlns", "http://www.w3.org/2000/svg")
    for attr in _to_list(node[1], f"attributes of {kind!r}"):
        pair = _to_list(attr, "an attribute")
        if len(pair) != 2 or not isinstance(pair[0], VStr):
            raise _fail(f"an attribute must be a [key value] pair, found {describe_value(attr)}")
        key = pair[0].value
        if key in _DROPPED_ATTRS:
            continue
        el.set(key, _attr_string(key, pair[1]))
    last_child = None
    for child in _to_list(node[2], f"children of {kind!r}"):
        if isinstance(child, VStr):
            if last_child is None:
                el.text = (el.text or "") + child.value
            else:
                last_child.tail = (last_child.tail or "") + child.value
        else:
            last_child = _build(child, False)
            el.append(last_child)
    return el


def to_svg_xml(value: Value) -> str:
    root = _build(value, True)
    return ET.tostring(root, encoding="unicode")
