"""Readers and writers for the supported data formats.

CPC-JSON is the native document format::

    {
      "schema": {"dimensions": [
        {"id": "Axis_2", "kind": "categorical", "label": "Axis 2",
         "options": [{"value": "Option_A", "children": [ ...dimensions... ]}]},
        {"id": "Axis_1", "kind": "numeric",
         "range": {"min": 0, "max": 10, "step": 0.5},
         "rangeBranches": [{"low": 0, "high": 5, "children": [ ... ]}]}
      ]},
      "observations": [
        {"id": "line-1", "values": {"Axis_1": 7.5, "Axis_2": "Option_A",
                                    "Axis_2/Option_A/Sub_A1": 0.8}}
      ]
    }

Value keys are canonical '/'-joined paths; range branch keys render as
``[low,high]`` with a '.' decimal separator.

The machine-learning search-log adapter reads JSON lines, one run per
line: ``{"runId": ..., "steps": [{"stepName", "blockId",
"hyperparameters": {...}}], "metrics": {...}}``. Pipeline steps become
categorical dimensions left to right, block ids become options, each
block's hyperparameters become its child dimensions, and metrics become
trailing numeric axes.

The CSV reader builds a flat, branch-free schema (header row required,
one declared kind per column).
"""

from __future__ import annotations

import csv
import io
import json
from typing import Mapping, Sequence

from .model import (
    Dataset,
    DimensionSpec,
    Observation,
    OptionSpec,
    ParseError,
    RangeBranch,
    Schema,
    Value,
    as_path,
    categorical,
    is_number,
    numeric,
    observation,
    option,
)

KINDS = ("categorical", "numeric")
_KIND_ALIASES = {"c": "categorical", "n": "numeric", "categorical": "categorical", "numeric": "numeric"}


def _decode_text(data: bytes | str) -> str:
    if isinstance(data, bytes):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    return data


# ---------------------------------------------------------------------------
# CPC-JSON
# ---------------------------------------------------------------------------

def _expect(obj, types, context: str, what: str):
    if not isinstance(obj, types):
        names = types.__name__ if isinstance(types, type) else "/".join(t.__name__ for t in types)
        raise ParseError(f"{context}: expected {what} ({names}), got {type(obj).__name__}")
    return obj


def _parse_dimension(obj, context: str) -> DimensionSpec:
    _expect(obj, dict, context, "a dimension object")
    dim_id = _expect(obj.get("id"), str, f"{context}.id", "a string")
    label = obj.get("label", dim_id)
    _expect(label, str, f"{context}.label", "a string")
    kind = _expect(obj.get("kind"), str, f"{context}.kind", "a string")
    if kind == "categorical":
        options_raw = _expect(obj.get("options"), list, f"{context}.options", "a list")
        options = []
        for index, opt in enumerate(options_raw):
            opt_ctx = f"{context}.options[{index}]"
            _expect(opt, dict, opt_ctx, "an option object")
            value = _expect(opt.get("value"), str, f"{opt_ctx}.value", "a string")
            children_raw = opt.get("children", [])
            _expect(children_raw, list, f"{opt_ctx}.children", "a list")
            children = [
                _parse_dimension(child, f"{opt_ctx}.children[{i}]")
                for i, child in enumerate(children_raw)
            ]
            options.append(OptionSpec(value=value, children=tuple(children)))
        return DimensionSpec(id=dim_id, label=label, kind="categorical", options=tuple(options))
    if kind == "numeric":
        range_raw = _expect(obj.get("range"), dict, f"{context}.range", "an object")
        vmin = _expect(range_raw.get("min"), (int, float), f"{context}.range.min", "a number")
        vmax = _expect(range_raw.get("max"), (int, float), f"{context}.range.max", "a number")
        step = range_raw.get("step")
        if step is not None:
            _expect(step, (int, float), f"{context}.range.step", "a number")
        branches = []
        for index, rb in enumerate(obj.get("rangeBranches", [])):
            rb_ctx = f"{context}.rangeBranches[{index}]"
            _expect(rb, dict, rb_ctx, "a range branch object")
            low = _expect(rb.get("low"), (int, float), f"{rb_ctx}.low", "a number")
            high = _expect(rb.get("high"), (int, float), f"{rb_ctx}.high", "a number")
            children_raw = rb.get("children", [])
            _expect(children_raw, list, f"{rb_ctx}.children", "a list")
            children = [
                _parse_dimension(child, f"{rb_ctx}.children[{i}]")
                for i, child in enumerate(children_raw)
            ]
            branches.append(RangeBranch(low=float(low), high=float(high), children=tuple(children)))
        return numeric(dim_id, float(vmin), float(vmax),
                       step=None if step is None else float(step),
                       branches=branches, label=label)
    raise ParseError(f"{context}.kind: expected 'categorical' or 'numeric', got {kind!r}")


def parse_cpc_json(data: bytes | str | dict) -> Dataset:
    """Parse and fully validate a CPC-JSON document."""
    if isinstance(data, dict):
        document = data
    else:
        text = _decode_text(data)
        try:
            document = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(
                f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    _expect(document, dict, "$", "a document object")
    schema_raw = _expect(document.get("schema"), dict, "$.schema", "an object")
    dims_raw = _expect(schema_raw.get("dimensions"), list, "$.schema.dimensions", "a list")
    dimensions = [
        _parse_dimension(dim, f"$.schema.dimensions[{i}]") for i, dim in enumerate(dims_raw)
    ]
    schema = Schema(tuple(dimensions))

    observations = []
    for index, obs_raw in enumerate(document.get("observations", [])):
        ctx = f"$.observations[{index}]"
        _expect(obs_raw, dict, ctx, "an observation object")
        obs_id = _expect(obs_raw.get("id"), str, f"{ctx}.id", "a string")
        values_raw = _expect(obs_raw.get("values"), dict, f"{ctx}.values", "an object")
        values: dict = {}
        for key, value in values_raw.items():
            try:
                values[as_path(key)] = value
            except Exception as exc:
                raise ParseError(f"{ctx}.values: bad path key {key!r}: {exc}") from exc
        observations.append(Observation(obs_id, values))

    return Dataset(schema, tuple(observations))


def _dimension_to_dict(dim: DimensionSpec) -> dict:
    out: dict = {"id": dim.id, "label": dim.label, "kind": dim.kind}
    if dim.kind == "categorical":
        out["options"] = [
            {"value": opt.value, "children": [_dimension_to_dict(c) for c in opt.children]}
            for opt in dim.options
        ]
    else:
        rng = dim.range
        assert rng is not None
        out["range"] = {"min": rng.min, "max": rng.max}
        if rng.step is not None:
            out["range"]["step"] = rng.step
        out["rangeBranches"] = [
            {"low": rb.low, "high": rb.high,
             "children": [_dimension_to_dict(c) for c in rb.children]}
            for rb in dim.range_branches
        ]
    return out


def schema_to_dict(schema: Schema) -> dict:
    return {"dimensions": [_dimension_to_dict(d) for d in schema.dimensions]}


def dataset_to_dict(data: Dataset) -> dict:
    return {
        "schema": schema_to_dict(data.schema),
        "observations": [
            {"id": obs.id, "values": {str(k): v for k, v in obs.values.items()}}
            for obs in data.observations
        ],
    }


def dataset_to_json(data: Dataset, pretty: bool = False) -> bytes:
    """Canonical serialization: sorted keys, stable list orders."""
    document = dataset_to_dict(data)
    if pretty:
        text = json.dumps(document, sort_keys=True, indent=2)
    else:
        text = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return text.encode("utf-8")


# ---------------------------------------------------------------------------
# Search-log adapter
# ---------------------------------------------------------------------------

def _pad_range(values: Sequence[float]) -> tuple[float, float]:
    """Observed extent widened by 5% per side; degenerate spans get a floor."""
    lo, hi = min(values), max(values)
    span = hi - lo
    pad = 0.05 * span if span > 0 else max(0.05 * abs(hi), 0.5)
    return lo - pad, hi + pad


def from_automl_log(data: bytes | str) -> Dataset:
    """Build a dataset from a JSON-lines search log, one run per line."""
    text = _decode_text(data)
    runs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            run = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {lineno}: invalid JSON: {exc.msg}") from exc
        _expect(run, dict, f"line {lineno}", "a run object")
        runs.append((lineno, run))
    if not runs:
        raise ParseError("empty log: no runs")

    step_names: list[str] | None = None
    metric_names: list[str] | None = None
    # (step, block) -> hyperparameter name -> observed values
    block_params: dict[tuple[str, str], dict[str, list]] = {}
    block_order: dict[str, list[str]] = {}
    parsed = []

    for lineno, run in runs:
        ctx = f"line {lineno}"
        run_id = _expect(run.get("runId"), str, f"{ctx}.runId", "a string")
        steps_raw = _expect(run.get("steps"), list, f"{ctx}.steps", "a list")
        metrics = _expect(run.get("metrics"), dict, f"{ctx}.metrics", "an object")

        names = []
        steps = []
        for i, step_raw in enumerate(steps_raw):
            step_ctx = f"{ctx}.steps[{i}]"
            _expect(step_raw, dict, step_ctx, "a step object")
            step_name = _expect(step_raw.get("stepName"), str, f"{step_ctx}.stepName", "a string")
            block_id = _expect(step_raw.get("blockId"), str, f"{step_ctx}.blockId", "a string")
            params = step_raw.get("hyperparameters", {})
            _expect(params, dict, f"{step_ctx}.hyperparameters", "an object")
            names.append(step_name)
            steps.append((step_name, block_id, params))
        if step_names is None:
            step_names = names
        elif names != step_names:
            raise ParseError(f"{ctx}: inconsistent step list {names} (expected {step_names})")

        if metric_names is None:
            metric_names = list(metrics.keys())
        elif set(metrics.keys()) != set(metric_names):
            raise ParseError(f"{ctx}: inconsistent metric names {sorted(metrics.keys())}")
        for metric, value in metrics.items():
            if not is_number(value):
                raise ParseError(f"{ctx}: metric {metric!r} is not numeric: {value!r}")

        for step_name, block_id, params in steps:
            block_order.setdefault(step_name, [])
            if block_id not in block_order[step_name]:
                block_order[step_name].append(block_id)
            known = block_params.setdefault((step_name, block_id), {})
            for name, value in params.items():
                known.setdefault(name, []).append(value)
        parsed.append((ctx, run_id, steps, metrics))

    assert step_names is not None and metric_names is not None

    # Every run of a block must carry the same hyperparameter names.
    run_counts: dict[tuple[str, str], int] = {}
    for _ctx, _run_id, steps, _metrics in parsed:
        for step_name, block_id, _params in steps:
            key = (step_name, block_id)
            run_counts[key] = run_counts.get(key, 0) + 1
    for (step_name, block_id), params in block_params.items():
        for name, values in params.items():
            if len(values) != run_counts[(step_name, block_id)]:
                raise ParseError(
                    f"hyperparameter {name!r} of block {block_id!r} in step "
                    f"{step_name!r} is missing from some runs"
                )

    def param_dimension(step_name: str, block_id: str, name: str) -> DimensionSpec:
        values = block_params[(step_name, block_id)][name]
        if all(is_number(v) for v in values):
            lo, hi = _pad_range([float(v) for v in values])
            return numeric(name, lo, hi)
        if all(isinstance(v, str) for v in values):
            seen: list[str] = []
            for v in values:
                if v not in seen:
                    seen.append(v)
            return categorical(name, seen)
        raise ParseError(
            f"hyperparameter {name!r} of block {block_id!r} in step {step_name!r} "
            f"mixes numeric and text values"
        )

    dimensions = []
    for step_name in step_names:
        options = []
        for block_id in block_order[step_name]:
            children = [
                param_dimension(step_name, block_id, name)
                for name in sorted(block_params[(step_name, block_id)].keys())
            ]
            options.append(option(block_id, children))
        dimensions.append(categorical(step_name, options))

    metric_values = {name: [] for name in metric_names}
    for _ctx, _run_id, _steps, metrics in parsed:
        for name in metric_names:
            metric_values[name].append(float(metrics[name]))
    for name in metric_names:
        lo, hi = _pad_range(metric_values[name])
        dimensions.append(numeric(name, lo, hi))

    observations = []
    for _ctx, run_id, steps, metrics in parsed:
        values: dict[str, Value] = {}
        for step_name, block_id, params in steps:
            values[step_name] = block_id
            for name, value in params.items():
                values[f"{step_name}/{block_id}/{name}"] = value
        for name in metric_names:
            values[name] = metrics[name]
        observations.append(observation(run_id, values))

    return Dataset(Schema(tuple(dimensions)), tuple(observations))


# ---------------------------------------------------------------------------
# Flat CSV
# ---------------------------------------------------------------------------

def parse_kinds(spec: str, columns: Sequence[str]) -> dict[str, str]:
    """Parse a column-kind spec: 'a=numeric,b=categorical' or positional 'n,c'."""
    parts = [p.strip() for p in spec.split(",") if p.strip()]
    if not parts:
        raise ParseError("empty column kind spec")
    if all("=" in p for p in parts):
        kinds = {}
        for part in parts:
            name, _, kind = part.partition("=")
            if kind.lower() not in _KIND_ALIASES:
                raise ParseError(f"unknown column kind {kind!r} for {name!r}")
            kinds[name.strip()] = _KIND_ALIASES[kind.lower()]
        return kinds
    if any("=" in p for p in parts):
        raise ParseError("mix of named and positional column kinds")
    if len(parts) != len(columns):
        raise ParseError(f"{len(parts)} kinds for {len(columns)} columns")
    out = {}
    for name, kind in zip(columns, parts):
        if kind.lower() not in _KIND_ALIASES:
            raise ParseError(f"unknown column kind {kind!r} for {name!r}")
        out[name] = _KIND_ALIASES[kind.lower()]
    return out


def from_flat_csv(data: bytes | str, kinds: Mapping[str, str] | str) -> Dataset:
    """Build a flat (branch-free) dataset from CSV with a header row."""
    text = _decode_text(data)
    rows = list(csv.reader(io.StringIO(text)))
    rows = [row for row in rows if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError("empty file")
    header, body = rows[0], rows[1:]
    if not body:
        raise ParseError("no data rows")

    if isinstance(kinds, str):
        kinds = parse_kinds(kinds, header)
    resolved = {}
    for column in header:
        kind = kinds.get(column)
        if kind is None:
            raise ParseError(f"no kind declared for column {column!r}")
        if kind not in _KIND_ALIASES:
            raise ParseError(f"unknown column kind {kind!r} for {column!r}")
        resolved[column] = _KIND_ALIASES[kind]

    numeric_cells: dict[str, list[float]] = {c: [] for c in header}
    option_cells: dict[str, list[str]] = {c: [] for c in header}
    table: list[dict[str, Value]] = []
    for row_index, row in enumerate(body, start=1):
        if len(row) != len(header):
            raise ParseError(f"data row {row_index}: {len(row)} cells for {len(header)} columns")
        record: dict[str, Value] = {}
        for column, cell in zip(header, row):
            cell = cell.strip()
            if not cell:
                raise ParseError(f"data row {row_index}, column {column!r}: empty cell")
            if resolved[column] == "numeric":
                try:
                    value: Value = float(cell)
                except ValueError:
                    raise ParseError(
                        f"data row {row_index}, column {column!r}: {cell!r} is not numeric"
                    ) from None
                numeric_cells[column].append(value)
            else:
                value = cell
                if cell not in option_cells[column]:
                    option_cells[column].append(cell)
            record[column] = value
        table.append(record)

    dimensions = []
    for column in header:
        if resolved[column] == "numeric":
            values = numeric_cells[column]
            lo, hi = min(values), max(values)
            if lo == hi:
                lo, hi = _pad_range(values)
            dimensions.append(numeric(column, lo, hi))
        else:
            dimensions.append(categorical(column, option_cells[column]))

    observations = [
        observation(f"row-{i}", record) for i, record in enumerate(table, start=1)
    ]
    return Dataset(Schema(tuple(dimensions)), tuple(observations))
