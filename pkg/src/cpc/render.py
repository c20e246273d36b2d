"""Deterministic SVG export and the canonical geometry JSON.

Byte-for-byte reproducibility is the contract here: fixed element order
(boxes, axes, labels, polylines, emphasized polylines, edit line on top),
fixed attribute order, and all coordinates rounded to three decimals.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

from .interaction import Emphasis
from .layout import (
    AxisGeom,
    BranchBox,
    Canvas,
    LayoutGeometry,
    OptionAnchor,
    Rect,
)
from .model import AxisPath, CpcError, NUMERIC


class RenderError(CpcError):
    """Geometry that cannot be drawn on its own canvas."""


@dataclass(frozen=True)
class Style:
    background: str = "#ffffff"
    axis_color: str = "#444444"
    axis_width: float = 1.0
    label_color: str = "#222222"
    font_family: str = "sans-serif"
    font_size: float = 11.0
    option_color: str = "#444444"
    expandable_color: str = "#9aa0a6"
    marker_radius: float = 3.0
    box_fill: str = "#f4f6f8"
    box_stroke: str = "#b9c2cc"
    box_stroke_width: float = 1.0
    line_color: str = "#4682b4"
    line_width: float = 1.2
    emphasis_color: str = "#e0690f"
    emphasis_width: float = 2.4
    edit_color: str = "#d62728"
    edit_width: float = 2.4


DEFAULT_STYLE = Style()


def _fmt(value: float) -> str:
    text = f"{value:.3f}"
    return text.rstrip("0").rstrip(".") if "." in text else text


def _points_attr(points: Sequence[tuple[float, float]]) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)


def _check_bounds(geometry: LayoutGeometry) -> None:
    width, height = geometry.canvas.width, geometry.canvas.height
    eps = 1e-6

    def inside(x: float, y: float) -> bool:
        return -eps <= x <= width + eps and -eps <= y <= height + eps

    for axis in geometry.axes:
        if not (inside(axis.x, axis.y_top) and inside(axis.x, axis.y_bottom)):
            raise RenderError(f"axis {axis.path} exceeds the canvas")
    for box in geometry.branch_boxes:
        rect = box.rect
        if not (inside(rect.x0, rect.y0) and inside(rect.x1, rect.y1)):
            raise RenderError(f"branch box {box.branch_path} exceeds the canvas")
    for obs_id, points in geometry.polylines.items():
        for x, y in points:
            if not inside(x, y):
                raise RenderError(f"polyline {obs_id!r} exceeds the canvas")


def to_svg(
    geometry: LayoutGeometry,
    emphasis: Emphasis | None = None,
    edit_points: Sequence[tuple[float, float]] | None = None,
    style: Style | None = None,
) -> bytes:
    """Render geometry (plus optional emphasis and edit overlay) to SVG."""
    style = style or DEFAULT_STYLE
    _check_bounds(geometry)
    width, height = geometry.canvas.width, geometry.canvas.height
    out: list[str] = []
    out.append('<?xml version="1.0" encoding="UTF-8"?>')
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" '
        f'height="{_fmt(height)}" viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
    )
    out.append(
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'fill="{style.background}"/>'
    )

    for box in geometry.branch_boxes:
        rect = box.rect
        out.append(
            f'<rect x="{_fmt(rect.x0)}" y="{_fmt(rect.y0)}" '
            f'width="{_fmt(rect.width)}" height="{_fmt(rect.height)}" '
            f'fill="{style.box_fill}" stroke="{style.box_stroke}" '
            f'stroke-width="{_fmt(style.box_stroke_width)}"/>'
        )

    for axis in geometry.axes:
        out.append(
            f'<line x1="{_fmt(axis.x)}" y1="{_fmt(axis.y_top)}" '
            f'x2="{_fmt(axis.x)}" y2="{_fmt(axis.y_bottom)}" '
            f'stroke="{style.axis_color}" stroke-width="{_fmt(style.axis_width)}"/>'
        )
        out.append(_text(axis.x, axis.y_top - 8.0, axis.label, style, anchor="middle"))
        if axis.kind == NUMERIC and axis.domain is not None:
            vmin, vmax = axis.domain
            out.append(_text(axis.x + 4.0, axis.y_top + style.font_size * 0.4,
                             _fmt_value(vmax), style))
            out.append(_text(axis.x + 4.0, axis.y_bottom, _fmt_value(vmin), style))

    for axis in geometry.axes:
        for anchor in axis.options:
            color = style.expandable_color if anchor.expandable else style.option_color
            out.append(
                f'<circle cx="{_fmt(axis.x)}" cy="{_fmt(anchor.y)}" '
                f'r="{_fmt(style.marker_radius)}" fill="{color}"/>'
            )
            out.append(
                _text(
                    axis.x + style.marker_radius + 3.0,
                    anchor.y + style.font_size * 0.35,
                    anchor.value,
                    style,
                    color=color,
                )
            )

    for obs_id, points in geometry.polylines.items():
        if len(points) < 2:
            continue
        out.append(
            f'<polyline points="{_points_attr(points)}" fill="none" '
            f'stroke="{style.line_color}" stroke-width="{_fmt(style.line_width)}"/>'
        )

    if emphasis is not None:
        for obs_id in sorted(emphasis.highlighted):
            points = geometry.polylines.get(obs_id)
            if points is None or len(points) < 2:
                continue
            out.append(
                f'<polyline points="{_points_attr(points)}" fill="none" '
                f'stroke="{style.emphasis_color}" '
                f'stroke-width="{_fmt(style.emphasis_width)}"/>'
            )

    if edit_points:
        for x, y in edit_points:
            out.append(
                f'<circle cx="{_fmt(x)}" cy="{_fmt(y)}" '
                f'r="{_fmt(style.marker_radius + 1.0)}" fill="{style.edit_color}"/>'
            )
        if len(edit_points) >= 2:
            out.append(
                f'<polyline points="{_points_attr(edit_points)}" fill="none" '
                f'stroke="{style.edit_color}" stroke-width="{_fmt(style.edit_width)}"/>'
            )

    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def _fmt_value(value: float) -> str:
    return _fmt(value) if value == round(value, 3) else f"{value:g}"


def _text(x: float, y: float, content: str, style: Style, anchor: str = "start",
          color: str | None = None) -> str:
    return (
        f'<text x="{_fmt(x)}" y="{_fmt(y)}" font-family="{style.font_family}" '
        f'font-size="{_fmt(style.font_size)}" fill="{color or style.label_color}" '
        f'text-anchor="{anchor}">{escape(content)}</text>'
    )


# ---------------------------------------------------------------------------
# Geometry JSON
# ---------------------------------------------------------------------------

def _r3(value: float) -> float:
    rounded = round(value, 3)
    return rounded + 0.0  # normalizes -0.0


def geometry_to_dict(geometry: LayoutGeometry) -> dict:
    return {
        "canvas": {
            "width": _r3(geometry.canvas.width),
            "height": _r3(geometry.canvas.height),
            "margin": _r3(geometry.canvas.margin),
        },
        "totalWeight": geometry.total_weight,
        "axes": [
            {
                "path": str(axis.path),
                "label": axis.label,
                "x": _r3(axis.x),
                "yTop": _r3(axis.y_top),
                "yBottom": _r3(axis.y_bottom),
                "kind": axis.kind,
                "domain": None if axis.domain is None else [_r3(axis.domain[0]), _r3(axis.domain[1])],
                "options": [
                    {
                        "value": anchor.value,
                        "y": _r3(anchor.y),
                        "band": [_r3(anchor.band[0]), _r3(anchor.band[1])],
                        "expandable": anchor.expandable,
                    }
                    for anchor in axis.options
                ],
            }
            for axis in geometry.axes
        ],
        "branchBoxes": [
            {
                "path": str(box.branch_path),
                "rect": [_r3(box.rect.x0), _r3(box.rect.y0), _r3(box.rect.x1), _r3(box.rect.y1)],
            }
            for box in geometry.branch_boxes
        ],
        "polylines": [
            {
                "id": obs_id,
                "points": [_r3(c) for point in points for c in point],
            }
            for obs_id, points in geometry.polylines.items()
        ],
    }


def geometry_to_json(geometry: LayoutGeometry) -> bytes:
    """Canonical JSON: sorted keys, 3-decimal coordinates, stable order."""
    return json.dumps(geometry_to_dict(geometry), sort_keys=True,
                      separators=(",", ":")).encode("utf-8")


def geometry_from_dict(document: Mapping) -> LayoutGeometry:
    canvas = Canvas(
        width=document["canvas"]["width"],
        height=document["canvas"]["height"],
        margin=document["canvas"]["margin"],
    )
    axes = tuple(
        AxisGeom(
            path=AxisPath.parse(axis["path"]),
            label=axis["label"],
            x=axis["x"],
            y_top=axis["yTop"],
            y_bottom=axis["yBottom"],
            kind=axis["kind"],
            domain=None if axis["domain"] is None else (axis["domain"][0], axis["domain"][1]),
            options=tuple(
                OptionAnchor(
                    value=opt["value"],
                    y=opt["y"],
                    band=(opt["band"][0], opt["band"][1]),
                    expandable=opt["expandable"],
                )
                for opt in axis["options"]
            ),
        )
        for axis in document["axes"]
    )
    boxes = tuple(
        BranchBox(
            branch_path=AxisPath.parse(box["path"]),
            rect=Rect(*box["rect"]),
        )
        for box in document["branchBoxes"]
    )
    polylines = {}
    for line in document["polylines"]:
        flat = line["points"]
        polylines[line["id"]] = tuple(
            (flat[i], flat[i + 1]) for i in range(0, len(flat), 2)
        )
    return LayoutGeometry(
        canvas=canvas,
        total_weight=document["totalWeight"],
        axes=axes,
        branch_boxes=boxes,
        polylines=polylines,
    )


def geometry_from_json(data: bytes | str) -> LayoutGeometry:
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return geometry_from_dict(json.loads(data))
