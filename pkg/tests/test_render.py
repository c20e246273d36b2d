from __future__ import annotations

import json
import xml.etree.ElementTree as ET
from dataclasses import replace
from pathlib import Path

import pytest

from cpc.interaction import Emphasis, begin_edit, duplicate_of, edit_polyline_points
from cpc.layout import Canvas, ExpansionState, compute_layout, expand_all
from cpc.model import Dataset
from cpc.render import (
    DEFAULT_STYLE,
    RenderError,
    Style,
    geometry_from_json,
    geometry_to_dict,
    geometry_to_json,
    to_svg,
)

GOLDEN = Path(__file__).parent / "golden" / "demo_expanded.svg"
SVG_NS = "{http://www.w3.org/2000/svg}"


def _tags(svg: bytes) -> list[str]:
    root = ET.fromstring(svg)
    return [child.tag.replace(SVG_NS, "") for child in root]


# ---------------------------------------------------------------------------
# SVG export
# ---------------------------------------------------------------------------

def test_same_inputs_byte_identical(demo, demo_expansion, canvas):
    geometry = compute_layout(demo, demo_expansion, canvas)
    first = to_svg(geometry)
    second = to_svg(compute_layout(demo, demo_expansion, canvas))
    assert first == second


def test_empty_dataset_renders_axes_only(demo, canvas):
    empty = Dataset(demo.schema, ())
    geometry = compute_layout(empty, ExpansionState.empty(), canvas)
    svg = to_svg(geometry)
    tags = _tags(svg)
    assert "polyline" not in tags
    assert tags.count("line") == 4


def test_golden_fully_expanded(demo):
    geometry = compute_layout(demo, expand_all(demo.schema), Canvas(1200, 640, 40))
    assert to_svg(geometry) == GOLDEN.read_bytes()


def test_svg_is_well_formed_and_inside_viewbox(demo, demo_expansion, canvas):
    svg = to_svg(compute_layout(demo, demo_expansion, canvas))
    root = ET.fromstring(svg)
    assert root.get("viewBox") == "0 0 1200 640"
    for line in root.iter(f"{SVG_NS}line"):
        for attr in ("x1", "x2"):
            assert 0.0 <= float(line.get(attr)) <= 1200.0
        for attr in ("y1", "y2"):
            assert 0.0 <= float(line.get(attr)) <= 640.0
    for poly in root.iter(f"{SVG_NS}polyline"):
        for pair in poly.get("points").split(" "):
            x, y = pair.split(",")
            assert 0.0 <= float(x) <= 1200.0
            assert 0.0 <= float(y) <= 640.0


def test_element_order_back_to_front(demo, demo_expansion, canvas):
    geometry = compute_layout(demo, demo_expansion, canvas)
    emphasis = Emphasis(frozenset({"line-3"}), "hover")
    session = begin_edit(demo, duplicate_of("line-1"))
    overlay = edit_polyline_points(geometry, session)
    svg = to_svg(geometry, emphasis=emphasis, edit_points=overlay)
    tags = _tags(svg)
    last_rect = max(i for i, t in enumerate(tags) if t == "rect")
    first_line = min(i for i, t in enumerate(tags) if t == "line")
    polyline_indexes = [i for i, t in enumerate(tags) if t == "polyline"]
    assert last_rect < first_line < polyline_indexes[0]
    # 3 base lines + 1 emphasized + 1 edit overlay, overlay last
    assert len(polyline_indexes) == 5
    root = ET.fromstring(svg)
    polylines = [c for c in root if c.tag == f"{SVG_NS}polyline"]
    assert polylines[-1].get("stroke") == DEFAULT_STYLE.edit_color
    assert polylines[-2].get("stroke") == DEFAULT_STYLE.emphasis_color


def test_expandable_options_use_affordance_color(demo, canvas):
    geometry = compute_layout(demo, ExpansionState.empty(), canvas)
    root = ET.fromstring(to_svg(geometry))
    circles = [c for c in root if c.tag == f"{SVG_NS}circle"]
    fills = {c.get("fill") for c in circles}
    assert DEFAULT_STYLE.expandable_color in fills  # Option_A/B, Enabled
    assert DEFAULT_STYLE.option_color in fills  # Disabled has no children


def test_custom_style_applied(demo, canvas):
    geometry = compute_layout(demo, ExpansionState.empty(), canvas)
    style = Style(line_color="#123456", background="#000000")
    svg = to_svg(geometry, style=style).decode()
    assert 'stroke="#123456"' in svg
    assert 'fill="#000000"' in svg


def test_text_is_escaped(canvas):
    from cpc.model import Schema, categorical, observation

    schema = Schema((categorical("d", ["a<b&c"], label='quo"te'),))
    data = Dataset(schema, (observation("o", {"d": "a<b&c"}),))
    svg = to_svg(compute_layout(data, ExpansionState.empty(), canvas))
    assert b"a&lt;b&amp;c" in svg
    ET.fromstring(svg)


def test_render_error_on_out_of_canvas_geometry(demo, canvas):
    geometry = compute_layout(demo, ExpansionState.empty(), canvas)
    broken = replace(geometry, polylines={"line-1": ((-50.0, 10.0), (10.0, 10.0))})
    with pytest.raises(RenderError):
        to_svg(broken)


# ---------------------------------------------------------------------------
# Geometry JSON
# ---------------------------------------------------------------------------

def test_geometry_json_round_trip(demo, demo_expansion, canvas):
    geometry = compute_layout(demo, demo_expansion, canvas)
    payload = geometry_to_json(geometry)
    assert geometry_to_json(geometry_from_json(payload)) == payload


def test_geometry_json_flat_axis_count(cars, canvas):
    geometry = compute_layout(cars, ExpansionState.empty(), canvas)
    document = json.loads(geometry_to_json(geometry))
    assert len(document["axes"]) == len(cars.schema.dimensions)
    assert document["totalWeight"] == len(cars.schema.dimensions)


def test_geometry_json_expanded_grid(demo, demo_expansion, canvas):
    geometry = compute_layout(demo, demo_expansion, canvas)
    document = json.loads(geometry_to_json(geometry))
    assert document["totalWeight"] == 8
    unit = (canvas.width - 2 * canvas.margin) / 8
    xs = {axis["path"]: axis["x"] for axis in document["axes"]}
    assert xs["Axis_1"] == pytest.approx(canvas.margin + 0.5 * unit, abs=1e-3)
    assert xs["Axis_4"] == pytest.approx(canvas.margin + 7.5 * unit, abs=1e-3)


def test_geometry_json_rounds_to_three_decimals(demo, demo_expansion):
    geometry = compute_layout(demo, demo_expansion, Canvas(1000, 633, 37))
    document = json.loads(geometry_to_json(geometry))

    def assert_rounded(value):
        assert value == round(value, 3)

    for axis in document["axes"]:
        assert_rounded(axis["x"])
        assert_rounded(axis["yTop"])
        for anchor in axis["options"]:
            assert_rounded(anchor["y"])
    for line in document["polylines"]:
        for coordinate in line["points"]:
            assert_rounded(coordinate)


def test_geometry_json_sorted_keys(demo, canvas):
    geometry = compute_layout(demo, ExpansionState.empty(), canvas)
    payload = geometry_to_json(geometry).decode()
    document = json.loads(payload)
    assert list(document) == sorted(document)
    assert json.dumps(document, sort_keys=True, separators=(",", ":")) == payload


def test_geometry_dict_polyline_order_follows_observations(demo, canvas):
    geometry = compute_layout(demo, ExpansionState.empty(), canvas)
    document = geometry_to_dict(geometry)
    assert [line["id"] for line in document["polylines"]] == ["line-1", "line-2", "line-3"]
