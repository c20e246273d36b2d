"""Pointer resolution, highlighting, brushing, and the edit mode.

Hit-testing walks the geometry with a fixed priority: option anchors beat
branch-box backgrounds, which beat polylines, which beat bare axis lines.
Highlight resolution is value-based and authoritative: a branch box
highlights exactly the observations satisfying its predicate, which by the
layout's routing rules is also exactly the set of polylines entering the
box.

An edit session is an immutable working set of per-path selections. Two
rules keep it consistent at every step: selecting inside a branch clears
every sibling branch of the same dimension and forces the parent value to
satisfy the branch, and selecting a dimension value clears the selections
under every branch that value fails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Sequence, Union

from .layout import AxisGeom, LayoutGeometry, axis_value_y
from .model import (
    AxisPath,
    Branch,
    CATEGORICAL,
    Dataset,
    DimensionSpec,
    NUMERIC,
    Observation,
    OptionSpec,
    PathError,
    PathLike,
    ResolutionError,
    Schema,
    UsageError,
    ValidationError,
    Value,
    as_path,
    conditional_subset,
    evaluate_predicate,
)

# Fraction of a numeric axis span treated as "at this value" when resolving
# a bare axis hover; numeric axes are otherwise selected by brushing.
VALUE_WINDOW = 0.005


# ---------------------------------------------------------------------------
# Hit targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PolylineHit:
    observation_id: str


@dataclass(frozen=True)
class OptionHit:
    axis_path: AxisPath
    option_value: str


@dataclass(frozen=True)
class BranchBoxHit:
    branch_path: AxisPath


@dataclass(frozen=True)
class AxisRangeHit:
    axis_path: AxisPath
    value: float


@dataclass(frozen=True)
class NoHit:
    pass


HitTarget = Union[PolylineHit, OptionHit, BranchBoxHit, AxisRangeHit, NoHit]


@dataclass(frozen=True)
class Emphasis:
    highlighted: frozenset[str] = frozenset()
    mode: str = "none"  # hover | brush | none
    edit_line: bool = False


def _segment_distance(px: float, py: float, ax: float, ay: float, bx: float, by: float) -> float:
    vx, vy = bx - ax, by - ay
    length_sq = vx * vx + vy * vy
    if length_sq == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * vx + (py - ay) * vy) / length_sq
    t = max(0.0, min(1.0, t))
    return math.hypot(px - (ax + t * vx), py - (ay + t * vy))


def hit_test(
    geometry: LayoutGeometry,
    point: tuple[float, float],
    tolerance: float = 6.0,
) -> HitTarget:
    """Resolve a canvas point to the most specific interactive target."""
    if tolerance < 0:
        raise UsageError("tolerance must be >= 0")
    px, py = point

    option_best: tuple[float, str, str] | None = None
    option_hit: OptionHit | None = None
    for axis in geometry.axes:
        for anchor in axis.options:
            dist = math.hypot(px - axis.x, py - anchor.y)
            key = (dist, str(axis.path), anchor.value)
            if dist <= tolerance and (option_best is None or key < option_best):
                option_best = key
                option_hit = OptionHit(axis.path, anchor.value)
    if option_hit is not None:
        return option_hit

    containing = [b for b in geometry.branch_boxes if b.rect.contains(px, py)]
    if containing:
        deepest = max(containing, key=lambda b: (len(b.branch_path.tokens), str(b.branch_path)))
        return BranchBoxHit(deepest.branch_path)

    line_best: tuple[float, str] | None = None
    for obs_id, points in geometry.polylines.items():
        for (ax, ay), (bx, by) in zip(points, points[1:]):
            dist = _segment_distance(px, py, ax, ay, bx, by)
            if dist <= tolerance and (line_best is None or (dist, obs_id) < line_best):
                line_best = (dist, obs_id)
    if line_best is not None:
        return PolylineHit(line_best[1])

    axis_best: tuple[float, str] | None = None
    axis_hit: AxisRangeHit | None = None
    for axis in geometry.axes:
        dist = _segment_distance(px, py, axis.x, axis.y_top, axis.x, axis.y_bottom)
        key = (dist, str(axis.path))
        if dist <= tolerance and (axis_best is None or key < axis_best):
            axis_best = key
            axis_hit = AxisRangeHit(axis.path, _axis_coordinate(axis, py))
    if axis_hit is not None:
        return axis_hit

    return NoHit()


def _axis_coordinate(axis: AxisGeom, y: float) -> float:
    """Inverse of the axis scale: data value (numeric) or option index (categorical)."""
    fraction = (y - axis.y_top) / axis.height
    fraction = max(0.0, min(1.0, fraction))
    if axis.kind == NUMERIC:
        assert axis.domain is not None
        vmin, vmax = axis.domain
        return vmin + (1.0 - fraction) * (vmax - vmin)
    count = len(axis.options)
    return max(0.0, min(float(count - 1), fraction * count - 0.5))


# ---------------------------------------------------------------------------
# Highlight resolution
# ---------------------------------------------------------------------------

def resolve_highlight(data: Dataset, target: HitTarget) -> Emphasis:
    """Observation ids emphasized for a hover target; value-based, not geometric."""
    if isinstance(target, NoHit):
        raise UsageError("cannot resolve an empty hit")

    if isinstance(target, PolylineHit):
        data.observation(target.observation_id)  # raises ResolutionError when stale
        return Emphasis(frozenset({target.observation_id}), "hover")

    if isinstance(target, OptionHit):
        dim = _resolve_dim(data.schema, target.axis_path)
        if dim.kind != CATEGORICAL or target.option_value not in {o.value for o in dim.options}:
            raise ResolutionError(
                f"{target.option_value!r} is not an option at {target.axis_path}"
            )
        ids = _ids_where(data, target.axis_path, lambda v: v == target.option_value)
        return Emphasis(ids, "hover")

    if isinstance(target, BranchBoxHit):
        try:
            ids = conditional_subset(data, target.branch_path)
        except PathError as exc:
            raise ResolutionError(str(exc)) from exc
        return Emphasis(ids, "hover")

    assert isinstance(target, AxisRangeHit)
    dim = _resolve_dim(data.schema, target.axis_path)
    if dim.kind == CATEGORICAL:
        index = int(round(max(0.0, min(float(len(dim.options) - 1), target.value))))
        wanted = dim.options[index].value
        ids = _ids_where(data, target.axis_path, lambda v: v == wanted)
        return Emphasis(ids, "hover")
    assert dim.range is not None
    window = VALUE_WINDOW * (dim.range.max - dim.range.min)
    ids = _ids_where(data, target.axis_path, lambda v: abs(v - target.value) <= window)
    return Emphasis(ids, "hover")


def _resolve_dim(schema: Schema, path: PathLike) -> DimensionSpec:
    try:
        return schema.resolve_dimension(path)
    except PathError as exc:
        raise ResolutionError(str(exc)) from exc


def _ids_where(data: Dataset, path: PathLike, predicate) -> frozenset[str]:
    path = as_path(path)
    return frozenset(
        obs.id
        for obs in data.observations
        if (value := obs.values.get(path)) is not None and predicate(value)
    )


def resolve_brushes(
    data: Dataset, brushes: Mapping[PathLike, tuple[float, float]]
) -> Emphasis:
    """Conjunction across axes: observations inside every brushed interval."""
    checked: list[tuple[AxisPath, float, float]] = []
    for raw_path, (lo, hi) in brushes.items():
        path = as_path(raw_path)
        try:
            dim = data.schema.resolve_dimension(path)
        except PathError as exc:
            raise ResolutionError(str(exc)) from exc
        if dim.kind != NUMERIC:
            raise UsageError(f"cannot brush categorical axis {path}")
        assert dim.range is not None
        if not lo <= hi:
            raise UsageError(f"brush interval on {path} needs lo <= hi")
        if lo < dim.range.min or hi > dim.range.max:
            raise UsageError(f"brush interval on {path} outside the axis range")
        checked.append((path, lo, hi))

    ids = []
    for obs in data.observations:
        for path, lo, hi in checked:
            value = obs.values.get(path)
            if value is None or not lo <= value <= hi:
                break
        else:
            ids.append(obs.id)
    return Emphasis(frozenset(ids), "brush")


# ---------------------------------------------------------------------------
# Edit mode
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EditOrigin:
    kind: str  # scratch | duplicate
    source_id: str | None = None


SCRATCH = EditOrigin("scratch")


def duplicate_of(observation_id: str) -> EditOrigin:
    return EditOrigin("duplicate", observation_id)


@dataclass(frozen=True)
class EditSession:
    active: bool
    origin: EditOrigin
    selections: Mapping[AxisPath, Value]


class IncompleteEditError(UsageError):
    def __init__(self, missing: Sequence[AxisPath]):
        self.missing = tuple(missing)
        listed = ", ".join(str(p) for p in self.missing)
        super().__init__(f"selections incomplete; missing: {listed}")


def begin_edit(
    data: Dataset,
    origin: EditOrigin = SCRATCH,
    current: EditSession | None = None,
) -> EditSession:
    """Open a session; duplicating seeds the selections from an existing line."""
    if current is not None and current.active:
        raise UsageError("an edit session is already active")
    if origin.kind == "duplicate":
        if origin.source_id is None:
            raise UsageError("duplicate origin needs a source observation id")
        source = data.observation(origin.source_id)
        return EditSession(True, origin, dict(source.values))
    if origin.kind != "scratch":
        raise UsageError(f"unknown edit origin {origin.kind!r}")
    return EditSession(True, origin, {})


def cancel_edit(session: EditSession) -> EditSession:
    return replace(session, active=False)


def _require_active(session: EditSession) -> None:
    if not session.active:
        raise UsageError("no active edit session")


def _normalize_value(dim: DimensionSpec, path: AxisPath, value: Value) -> Value:
    if dim.kind == CATEGORICAL:
        if not isinstance(value, str):
            raise ValidationError(f"{path} expects a string value")
        if value not in {o.value for o in dim.options}:
            raise ValidationError(f"{value!r} is not an option of {path}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"{path} expects a numeric value")
    rng = dim.range
    assert rng is not None
    if not rng.min <= value <= rng.max:
        raise ValidationError(f"{value} outside [{rng.min}, {rng.max}] of {path}")
    if rng.step is not None:
        snapped = rng.min + round((value - rng.min) / rng.step) * rng.step
        snapped = min(max(snapped, rng.min), rng.max)
        return round(snapped, 10)
    return value


def _implied_value(dim: DimensionSpec, branch: Branch) -> Value:
    if isinstance(branch, OptionSpec):
        return branch.value
    midpoint = (branch.low + branch.high) / 2.0
    rng = dim.range
    assert rng is not None
    if rng.step is not None:
        snapped = rng.min + round((midpoint - rng.min) / rng.step) * rng.step
        # Snapping must not leave the branch, or the implied parent would
        # contradict the sub-selection it exists to support.
        if branch.low <= snapped <= branch.high:
            return round(snapped, 10)
    return midpoint


def _clear_prefix(selections: dict[AxisPath, Value], prefix: AxisPath) -> None:
    for key in [k for k in selections if prefix.is_prefix_of(k)]:
        del selections[key]


def select_value(
    schema: Schema, session: EditSession, path: PathLike, value: Value
) -> EditSession:
    """Set one selection, then restore consistency across the branch tree."""
    _require_active(session)
    path = as_path(path)
    dim = schema.resolve_dimension(path)
    value = _normalize_value(dim, path, value)

    selections = dict(session.selections)
    selections[path] = value

    for branch_path in path.ancestor_branches():
        parent_path = branch_path.parent
        assert parent_path is not None
        branch = schema.resolve_branch(branch_path)
        parent_dim = schema.resolve_dimension(parent_path)
        for key, _sibling in parent_dim.branches():
            if key != branch_path.last:
                _clear_prefix(selections, parent_path.child(key))
        existing = selections.get(parent_path)
        if existing is None or not evaluate_predicate(branch, existing):
            selections[parent_path] = _implied_value(parent_dim, branch)

    for key, branch in dim.branches():
        if not evaluate_predicate(branch, value):
            _clear_prefix(selections, path.child(key))

    return replace(session, selections=selections)


def clear_value(session: EditSession, path: PathLike) -> EditSession:
    """Drop a selection together with everything in branches it governed."""
    _require_active(session)
    path = as_path(path)
    selections = dict(session.selections)
    _clear_prefix(selections, path)
    return replace(session, selections=selections)


def missing_paths(schema: Schema, session: EditSession) -> tuple[AxisPath, ...]:
    """Dimension paths still required before the session can commit."""
    missing: list[AxisPath] = []

    def walk(dims, prefix: tuple[str, ...]) -> None:
        for dim in dims:
            path = AxisPath(prefix + (dim.id,))
            value = session.selections.get(path)
            if value is None:
                missing.append(path)
                continue
            for key, branch in dim.branches():
                if branch.children and evaluate_predicate(branch, value):
                    walk(branch.children, path.tokens + (key,))

    walk(schema.dimensions, ())
    return tuple(missing)


def _fresh_id(data: Dataset) -> str:
    n = 1
    while data.has_observation(f"edit-{n}"):
        n += 1
    return f"edit-{n}"


def commit_edit(data: Dataset, session: EditSession) -> tuple[Dataset, str]:
    """Turn the selections into a new observation; the session is spent."""
    _require_active(session)
    missing = missing_paths(data.schema, session)
    if missing:
        raise IncompleteEditError(missing)
    new_id = _fresh_id(data)
    obs = Observation(new_id, dict(session.selections))
    return data.append(obs), new_id


def edit_mode_emphasis(
    data: Dataset,
    session: EditSession | None,
    target: HitTarget | None = None,
    brushes: Mapping[PathLike, tuple[float, float]] | None = None,
) -> Emphasis:
    """Hover/brush emphasis, suppressed while an edit session is active."""
    if session is not None and session.active:
        return Emphasis(frozenset(), "none", edit_line=True)
    if target is not None and not isinstance(target, NoHit):
        return resolve_highlight(data, target)
    if brushes is not None:
        return resolve_brushes(data, brushes)
    return Emphasis(frozenset(), "none")


def edit_polyline_points(
    geometry: LayoutGeometry, session: EditSession
) -> tuple[tuple[float, float], ...]:
    """Vertices of the in-progress line over the currently visible axes."""
    points = []
    for axis in geometry.axes:
        value = session.selections.get(axis.path)
        if value is not None:
            points.append((axis.x, axis_value_y(axis, value)))
    return tuple(points)
