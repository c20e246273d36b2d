"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines. Criteria 1-7 cover the engine; criterion 8 (the browser client's
interaction loop) lives in frontend/tests and runs under vitest — this
suite deliberately has no dependency on the web UI being built.
"""

from __future__ import annotations

import hashlib
import json
import random
import subprocess
import sys
from contextlib import contextmanager

from fastapi.testclient import TestClient

from cpc import samples
from cpc.ingest import dataset_to_dict, from_flat_csv, parse_cpc_json
from cpc.interaction import (
    BranchBoxHit,
    IncompleteEditError,
    begin_edit,
    commit_edit,
    duplicate_of,
    resolve_highlight,
    select_value,
)
from cpc.layout import Canvas, ExpansionState, Rect, compute_layout, total_weight
from cpc.model import as_path, validate_observation
from cpc.server import ServerConfig, SessionStore, create_app
from generators import random_dataset, random_expansion, random_schema
from oracles import brute_force_total_weight, brute_force_weight, flat_pc_layout, polyline_cuts_rect
from test_interaction import assert_session_invariants


@contextmanager
def criterion(number: int, name: str):
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE {number} {name}: FAIL")
        raise
    print(f"ACCEPTANCE {number} {name}: PASS")


# ---------------------------------------------------------------------------
# 1. PC-equivalence on the flat cars table, tolerance 1e-9 px
# ---------------------------------------------------------------------------

def test_criterion_1_pc_equivalence():
    with criterion(1, "PC-equivalence"):
        cars = from_flat_csv(samples.cars_csv(), samples.CARS_KINDS)
        canvas = Canvas(1180.0, 620.0, 35.0)
        geometry = compute_layout(cars, ExpansionState.empty(), canvas)
        xs, lines = flat_pc_layout(cars, canvas.width, canvas.height, canvas.margin)

        worst = 0.0
        assert len(geometry.axes) == len(xs)
        for axis, expected_x in zip(geometry.axes, xs):
            worst = max(worst, abs(axis.x - expected_x))
        for obs_id, expected_points in lines.items():
            actual = geometry.polylines[obs_id]
            assert len(actual) == len(expected_points)
            for (ax, ay), (ex, ey) in zip(actual, expected_points):
                worst = max(worst, abs(ax - ex), abs(ay - ey))
        assert worst <= 1e-9, f"max deviation {worst} exceeds 1e-9 px"


# ---------------------------------------------------------------------------
# 2. Weight oracle: 500 schemas x 20 expansion states, exact
# ---------------------------------------------------------------------------

def test_criterion_2_weight_oracle():
    with criterion(2, "weight oracle"):
        rng = random.Random(2024)
        for _ in range(500):
            schema = random_schema(rng, max_dims=6, max_depth=3, max_options=4)
            for _ in range(20):
                state = random_expansion(rng, schema)
                expanded = {str(p) for p in state.expanded}
                assert total_weight(schema, state) == brute_force_total_weight(schema, expanded)
                for dim in schema.dimensions:
                    from cpc.layout import dimension_weight

                    assert dimension_weight(schema, dim.id, state) == brute_force_weight(
                        dim, dim.id, expanded
                    )

        # the example configuration: two 2-child branches on one axis, one
        # 2-child branch on another, two flat axes -> 1 + 3 + 3 + 1
        demo = samples.demo_dataset()
        state = ExpansionState.of(
            demo.schema, ["Axis_2/Option_A", "Axis_2/Option_B", "Axis_3/Enabled"]
        )
        assert total_weight(demo.schema, state) == 8


# ---------------------------------------------------------------------------
# 3. No-overlap: 1000 random expansion states on 20 random schemas
# ---------------------------------------------------------------------------

def test_criterion_3_no_overlap():
    with criterion(3, "no-overlap"):
        rng = random.Random(3033)
        boxes_checked = 0
        for _ in range(20):
            schema = random_schema(rng)
            data = random_dataset(rng, schema, 3)
            for _ in range(50):
                state = random_expansion(rng, schema)
                weight = total_weight(schema, state)
                canvas = Canvas(
                    2 * 40 + weight * rng.uniform(45.0, 90.0),
                    rng.uniform(400.0, 900.0),
                    40.0,
                )
                geometry = compute_layout(data, state, canvas)
                canvas_rect = Rect(0.0, 0.0, canvas.width, canvas.height)
                boxes = geometry.branch_boxes
                for box in boxes:
                    assert canvas_rect.contains_rect(box.rect)
                for axis in geometry.axes:
                    assert 0.0 <= axis.x <= canvas.width
                    assert 0.0 <= axis.y_top < axis.y_bottom <= canvas.height
                for points in geometry.polylines.values():
                    for x, y in points:
                        assert 0.0 <= x <= canvas.width and 0.0 <= y <= canvas.height
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
                        boxes_checked += 1
        assert boxes_checked > 1000


# ---------------------------------------------------------------------------
# 4. Highlight equivalence: 100 random datasets, exact set equality
# ---------------------------------------------------------------------------

def test_criterion_4_highlight_equivalence():
    with criterion(4, "highlight equivalence"):
        rng = random.Random(4044)
        datasets_done = 0
        while datasets_done < 100:
            schema = random_schema(rng)
            state = random_expansion(rng, schema, p=0.8)
            if not state.expanded:
                continue
            data = random_dataset(rng, schema, rng.randint(1, 50))
            width = 2 * 40 + total_weight(schema, state) * rng.uniform(48.0, 80.0)
            geometry = compute_layout(data, state, Canvas(width, 700.0, 40.0))
            for box in geometry.branch_boxes:
                predicate_set = resolve_highlight(data, BranchBoxHit(box.branch_path)).highlighted
                geometric_set = {
                    obs_id
                    for obs_id, points in geometry.polylines.items()
                    if polyline_cuts_rect(points, box.rect, shrink=1e-6)
                }
                assert predicate_set == geometric_set, (
                    f"branch {box.branch_path}: predicate {sorted(predicate_set)} "
                    f"!= geometric {sorted(geometric_set)}"
                )
            datasets_done += 1

        # shipped example answers, verbatim
        demo = samples.demo_dataset()
        box_hover = resolve_highlight(demo, BranchBoxHit(as_path("Axis_2/Option_A")))
        assert box_hover.highlighted == {"line-1", "line-2"}, "expected the two upper polylines"
        from cpc.interaction import OptionHit

        sub_option = resolve_highlight(
            demo, OptionHit(as_path("Axis_3/Enabled/Subaxis_1"), "Suboption_2")
        )
        assert sub_option.highlighted == {"line-1", "line-3"}, "expected the upper and lower polyline"


# ---------------------------------------------------------------------------
# 5. Edit-state fuzzing: 10,000 events, commit soundness, duplicate fidelity
# ---------------------------------------------------------------------------

def test_criterion_5_edit_fuzzing():
    with criterion(5, "edit-state fuzzing"):
        rng = random.Random(5055)
        events_total = 0
        commits_checked = 0
        while events_total < 10_000:
            schema = random_schema(rng)
            data = random_dataset(rng, schema, 2)
            session = begin_edit(data)
            paths = [p for p, _ in schema.iter_dimension_paths()]
            for _ in range(500):
                if rng.random() < 0.85:
                    path = rng.choice(paths)
                    dim = schema.resolve_dimension(path)
                    if dim.kind == "categorical":
                        value = rng.choice([o.value for o in dim.options])
                    else:
                        value = round(rng.uniform(dim.range.min, dim.range.max), 4)
                    session = select_value(schema, session, path, value)
                else:
                    from cpc.interaction import clear_value

                    session = clear_value(session, rng.choice(paths))
                events_total += 1
                assert_session_invariants(schema, session)
                if events_total % 100 == 0:
                    try:
                        new_data, new_id = commit_edit(data, session)
                    except IncompleteEditError:
                        continue
                    report = validate_observation(schema, new_data.observation(new_id))
                    assert report.ok, report.describe()
                    commits_checked += 1
        assert events_total >= 10_000
        assert commits_checked > 10

        # duplicate-then-commit reproduces the source line's values
        demo = samples.demo_dataset()
        for source_id in ("line-1", "line-2", "line-3"):
            session = begin_edit(demo, duplicate_of(source_id))
            new_data, new_id = commit_edit(demo, session)
            copy = new_data.observation(new_id)
            assert dict(copy.values) == dict(demo.observation(source_id).values)
            assert validate_observation(new_data.schema, copy).ok


# ---------------------------------------------------------------------------
# 6. Determinism: cpc render byte-identical, layout responses hash-equal x10
# ---------------------------------------------------------------------------

def test_criterion_6_determinism(tmp_path):
    with criterion(6, "determinism"):
        samples.write_all(tmp_path)
        outputs = []
        for name in ("a.svg", "b.svg"):
            result = subprocess.run(
                [sys.executable, "-m", "cpc.cli", "render", str(tmp_path / "demo.json"),
                 "--expand", "all", "--out", str(tmp_path / name)],
                capture_output=True, text=True,
            )
            assert result.returncode == 0, result.stderr
            outputs.append((tmp_path / name).read_bytes())
        assert outputs[0] == outputs[1], "repeated cpc render produced different bytes"

        client = TestClient(create_app(SessionStore(), ServerConfig()))
        response = client.post("/api/datasets", json=dataset_to_dict(samples.demo_dataset()))
        dataset_id = response.json()["datasetId"]
        body = {"expansion": ["Axis_2/Option_A", "Axis_3/Enabled"],
                "canvas": {"width": 1100, "height": 615, "margin": 37}}
        digests = {
            hashlib.sha256(
                client.post(f"/api/datasets/{dataset_id}/layout", json=body).content
            ).hexdigest()
            for _ in range(10)
        }
        assert len(digests) == 1, "layout endpoint responses differ across repeats"


# ---------------------------------------------------------------------------
# 7. Pipeline-search flow: convert, render both views, edit round-trip
# ---------------------------------------------------------------------------

def test_criterion_7_automl_flow(tmp_path):
    with criterion(7, "pipeline-search flow"):
        log_path = tmp_path / "runs.jsonl"
        log_path.write_text(samples.automl_log())
        converted = tmp_path / "runs.json"
        result = subprocess.run(
            [sys.executable, "-m", "cpc.cli", "convert", "--from", "automl",
             str(log_path), "--out", str(converted)],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr
        data = parse_cpc_json(converted.read_bytes())
        assert len(data.observations) == 5, "expected the five tested pipelines"

        collapsed = tmp_path / "collapsed.svg"
        result = subprocess.run(
            [sys.executable, "-m", "cpc.cli", "render", str(converted),
             "--width", "1400", "--out", str(collapsed)],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr
        collapsed_svg = collapsed.read_bytes()
        assert collapsed_svg.count(b"<polyline") == 5
        assert b"learning_rate" not in collapsed_svg, "collapsed view must hide hyperparameters"

        expanded = tmp_path / "expanded.svg"
        result = subprocess.run(
            [sys.executable, "-m", "cpc.cli", "render", str(converted),
             "--expand", "all", "--width", "2200", "--out", str(expanded)],
            capture_output=True, text=True,
        )
        assert result.returncode == 0, result.stderr
        expanded_svg = expanded.read_bytes()
        for label in (b"learning_rate", b"max_depth", b"n_estimators", b"with_centering", b"k"):
            assert label in expanded_svg, f"hyperparameter sub-axis {label!r} missing"

        # close the loop: draw a new configuration in edit mode, export it
        client = TestClient(create_app(SessionStore(), ServerConfig()))
        response = client.post("/api/datasets", json=json.loads(converted.read_text()))
        dataset_id = response.json()["datasetId"]
        begin = client.post(f"/api/datasets/{dataset_id}/edit", json={
            "action": "begin", "origin": "duplicate", "sourceId": "run-3"})
        session_id = begin.json()["sessionId"]
        select = client.post(f"/api/datasets/{dataset_id}/edit", json={
            "action": "select", "sessionId": session_id,
            "path": "model/xgboost/learning_rate", "value": 0.08})
        assert select.status_code == 200, select.text
        commit = client.post(f"/api/datasets/{dataset_id}/edit", json={
            "action": "commit", "sessionId": session_id})
        assert commit.status_code == 200, commit.text
        new_id = commit.json()["observationId"]

        export = client.get(f"/api/datasets/{dataset_id}/observations/export")
        exported = parse_cpc_json(export.content)  # the export itself re-validates
        drawn = exported.observation(new_id)
        assert drawn.values[as_path("model/xgboost/learning_rate")] == 0.08
        assert drawn.values[as_path("model")] == "xgboost"
        assert len(exported.observations) == 6


# ---------------------------------------------------------------------------
# 8. UI loop (secondary): exercised by frontend/tests under vitest
# ---------------------------------------------------------------------------

def test_criterion_8_primary_suite_is_ui_free():
    with criterion(8, "primary suite runs with no web UI built"):
        # the engine modules must not reach for frontend assets
        import cpc
        import cpc.server

        for module in (cpc, cpc.server):
            assert "frontend" not in (module.__file__ or "")
        # the API serves without a static directory configured
        client = TestClient(create_app(SessionStore(), ServerConfig(static_dir=None)))
        assert client.get("/api/datasets").status_code == 200
