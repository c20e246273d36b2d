from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cpc.layout import (
    Canvas,
    ExpansionState,
    LayoutError,
    Rect,
    axis_value_y,
    collapse,
    compute_layout,
    dimension_weight,
    expand,
    expand_all,
    total_weight,
)
from cpc.model import (
    Dataset,
    Schema,
    StateError,
    categorical,
    numeric,
    observation,
    option,
    as_path,
)
from cpc.render import geometry_to_json
from generators import random_dataset, random_expansion, random_schema
from oracles import brute_force_total_weight, brute_force_weight, flat_pc_layout


def nested_schema():
    return Schema((
        categorical("A", [
            option("x", [
                categorical("B", [option("y", [numeric("C", 0, 1)]), option("z")]),
            ]),
        ]),
    ))


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

def test_collapsed_dimension_weight_is_one(demo):
    for dim in demo.schema.dimensions:
        assert dimension_weight(demo.schema, dim.id, ExpansionState.empty()) == 1


def test_expanded_branch_weight():
    schema = Schema((categorical("d", [option("a", [numeric("p", 0, 1), numeric("q", 0, 1)])]),))
    state = ExpansionState.of(schema, ["d/a"])
    assert dimension_weight(schema, "d", state) == 3


def test_two_branch_weight_takes_maximum(demo, demo_expansion):
    # both Axis_2 branches hold two collapsed children: 1 + max(2, 2)
    assert dimension_weight(demo.schema, "Axis_2", demo_expansion) == 3
    assert dimension_weight(demo.schema, "Axis_3", demo_expansion) == 3
    assert total_weight(demo.schema, demo_expansion) == 8


def test_weight_matches_brute_force_oracle():
    rng = random.Random(23)
    for _ in range(60):
        schema = random_schema(rng)
        for _ in range(6):
            state = random_expansion(rng, schema)
            expanded = {str(p) for p in state.expanded}
            for dim in schema.dimensions:
                assert dimension_weight(schema, dim.id, state) == brute_force_weight(
                    dim, dim.id, expanded
                )
            assert total_weight(schema, state) == brute_force_total_weight(schema, expanded)


# ---------------------------------------------------------------------------
# Expansion state
# ---------------------------------------------------------------------------

def test_expand_collapse_inverse(demo):
    state = ExpansionState.empty()
    grown = expand(demo.schema, state, "Axis_2/Option_A")
    assert collapse(grown, "Axis_2/Option_A") == state


def test_expand_idempotent(demo):
    once = expand(demo.schema, ExpansionState.empty(), "Axis_3/Enabled")
    assert expand(demo.schema, once, "Axis_3/Enabled") == once


def test_collapse_removes_nested_descendants():
    schema = nested_schema()
    state = ExpansionState.of(schema, ["A/x", "A/x/B/y"])
    assert collapse(state, "A/x") == ExpansionState.empty()


def test_expand_requires_expanded_ancestor():
    schema = nested_schema()
    with pytest.raises(StateError):
        expand(schema, ExpansionState.empty(), "A/x/B/y")
    with pytest.raises(StateError):
        ExpansionState.of(schema, ["A/x/B/y"])


def test_expand_rejects_childless_branch(demo):
    with pytest.raises(StateError):
        expand(demo.schema, ExpansionState.empty(), "Axis_3/Disabled")


def test_collapse_is_pure_set_operation(demo):
    state = ExpansionState.of(demo.schema, ["Axis_2/Option_A"])
    assert collapse(state, "Axis_3/Disabled") == state


# ---------------------------------------------------------------------------
# Layout: flat equivalence
# ---------------------------------------------------------------------------

def test_flat_layout_equals_classic_pc(cars, canvas):
    geometry = compute_layout(cars, ExpansionState.empty(), canvas)
    xs, lines = flat_pc_layout(cars, canvas.width, canvas.height, canvas.margin)
    assert len(geometry.axes) == len(xs)
    for axis, expected_x in zip(geometry.axes, xs):
        assert abs(axis.x - expected_x) <= 1e-9
    for obs_id, expected_points in lines.items():
        actual = geometry.polylines[obs_id]
        assert len(actual) == len(expected_points)
        for (ax, ay), (ex, ey) in zip(actual, expected_points):
            assert abs(ax - ex) <= 1e-9 and abs(ay - ey) <= 1e-9


def test_option_anchors_offset_by_half_band():
    schema = Schema((categorical("d", ["a", "b"]),))
    data = Dataset(schema, ())
    geometry = compute_layout(data, ExpansionState.empty(), Canvas(300, 100, 0))
    axis = geometry.axes[0]
    assert [round(a.y, 9) for a in axis.options] == [25.0, 75.0]


def test_numeric_value_maps_max_at_top():
    schema = Schema((numeric("d", 0, 10),))
    data = Dataset(schema, (observation("o", {"d": 10.0}),))
    geometry = compute_layout(data, ExpansionState.empty(), Canvas(300, 100, 0))
    axis = geometry.axes[0]
    assert axis_value_y(axis, 10.0) == axis.y_top
    assert axis_value_y(axis, 0.0) == axis.y_bottom
    assert axis_value_y(axis, 5.0) == pytest.approx((axis.y_top + axis.y_bottom) / 2)


# ---------------------------------------------------------------------------
# Layout: expanded geometry
# ---------------------------------------------------------------------------

def test_demo_expanded_grid(demo, demo_expansion, canvas):
    geometry = compute_layout(demo, demo_expansion, canvas)
    assert geometry.total_weight == 8
    unit = (canvas.width - 2 * canvas.margin) / 8
    expected = {
        "Axis_1": canvas.margin + 0.5 * unit,
        "Axis_2": canvas.margin + 1.5 * unit,
        "Axis_3": canvas.margin + 4.5 * unit,
        "Axis_4": canvas.margin + 7.5 * unit,
    }
    for path, x in expected.items():
        assert geometry.axis(path).x == pytest.approx(x, abs=1e-9)
    # sub-axes of both Axis_2 branches land on the shared column grid
    assert geometry.axis("Axis_2/Option_A/Sub_A1").x > geometry.axis("Axis_2").x
    assert len(geometry.branch_boxes) == 3


def test_box_confined_to_option_band(demo, demo_expansion, canvas):
    geometry = compute_layout(demo, demo_expansion, canvas)
    axis = geometry.axis("Axis_2")
    band_a = next(a.band for a in axis.options if a.value == "Option_A")
    box = geometry.box("Axis_2/Option_A").rect
    assert band_a[0] <= box.y0 < box.y1 <= band_a[1]
    anchor_a = next(a.y for a in axis.options if a.value == "Option_A")
    assert (box.y0 + box.y1) / 2 == pytest.approx(anchor_a)


def test_polyline_vertices_and_box_skipping(demo, canvas):
    state = ExpansionState.of(demo.schema, ["Axis_2/Option_A"])
    geometry = compute_layout(demo, state, canvas)
    # line-1 matches Option_A: axis vertex, two sub-axes, exit, and 3 flat axes
    assert len(geometry.polylines["line-1"]) == 3 + 1 + 2 + 1
    # line-3 is Option_B: bypass vertex at its own height instead of the box
    points = geometry.polylines["line-3"]
    assert len(points) == 3 + 1 + 1
    axis2 = geometry.axis("Axis_2")
    y_b = next(a.y for a in axis2.options if a.value == "Option_B")
    bypass = points[2]
    assert bypass[1] == pytest.approx(y_b)
    assert not geometry.box("Axis_2/Option_A").rect.contains(*bypass)


def test_monotone_x(demo, demo_expansion, canvas):
    geometry = compute_layout(demo, demo_expansion, canvas)
    for points in geometry.polylines.values():
        xs = [x for x, _ in points]
        assert all(a < b for a, b in zip(xs, xs[1:]))


def test_layout_error_reports_feasible_width(demo, demo_expansion):
    with pytest.raises(LayoutError) as info:
        compute_layout(demo, demo_expansion, Canvas(300, 640, 40))
    message = str(info.value)
    assert "8 columns" in message and "400" in message  # 8 * 40 + 2 * 40


def test_layout_deterministic(demo, demo_expansion, canvas):
    first = compute_layout(demo, demo_expansion, canvas)
    second = compute_layout(demo, demo_expansion, canvas)
    assert first == second
    assert geometry_to_json(first) == geometry_to_json(second)


# ---------------------------------------------------------------------------
# Random-state properties
# ---------------------------------------------------------------------------

def _no_overlap_check(geometry):
    boxes = list(geometry.branch_boxes)
    canvas_rect = Rect(0.0, 0.0, geometry.canvas.width, geometry.canvas.height)
    for box in boxes:
        assert canvas_rect.contains_rect(box.rect), f"{box.branch_path} outside canvas"
        assert box.rect.width > 0 and box.rect.height > 0
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            a, b = boxes[i], boxes[j]
            if a.branch_path.is_prefix_of(b.branch_path):
                assert a.rect.contains_rect(b.rect)
            elif b.branch_path.is_prefix_of(a.branch_path):
                assert b.rect.contains_rect(a.rect)
            else:
                assert not a.rect.intersects(b.rect), (
                    f"{a.branch_path} intersects {b.branch_path}"
                )


def test_no_overlap_random_states():
    rng = random.Random(31)
    for _ in range(10):
        schema = random_schema(rng)
        data = random_dataset(rng, schema, 5)
        for _ in range(20):
            state = random_expansion(rng, schema)
            weight = total_weight(schema, state)
            width = 2 * 40 + weight * rng.uniform(45.0, 90.0)
            canvas = Canvas(width, rng.uniform(400.0, 900.0), 40.0)
            geometry = compute_layout(data, state, canvas)
            _no_overlap_check(geometry)
            for points in geometry.polylines.values():
                xs = [x for x, _ in points]
                assert all(a < b for a, b in zip(xs, xs[1:]))


def test_axes_inside_their_branch_boxes():
    rng = random.Random(37)
    for _ in range(10):
        schema = random_schema(rng)
        data = Dataset(schema, ())
        state = random_expansion(rng, schema, p=0.9)
        weight = total_weight(schema, state)
        canvas = Canvas(2 * 40 + weight * 60.0, 700.0, 40.0)
        geometry = compute_layout(data, state, canvas)
        for axis in geometry.axes:
            if len(axis.path.tokens) == 1:
                continue
            owning_branch = as_path("/".join(axis.path.tokens[:-1]))
            box = geometry.box(owning_branch).rect
            assert box.x0 <= axis.x <= box.x1
            assert box.y0 <= axis.y_top <= axis.y_bottom <= box.y1


@given(data=st.data())
@settings(max_examples=30, deadline=None)
def test_weight_oracle_hypothesis(data):
    seed = data.draw(st.integers(min_value=0, max_value=10_000))
    rng = random.Random(seed)
    schema = random_schema(rng)
    state = random_expansion(rng, schema)
    expanded = {str(p) for p in state.expanded}
    assert total_weight(schema, state) == brute_force_total_weight(schema, expanded)


def test_expand_all_covers_every_branch(demo):
    state = expand_all(demo.schema)
    assert as_path("Axis_2/Option_A") in state.expanded
    assert as_path("Axis_2/Option_B") in state.expanded
    assert as_path("Axis_3/Enabled") in state.expanded
    assert len(state.expanded) == 3
