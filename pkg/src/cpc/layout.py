"""Geometry for conditional parallel coordinates.

Horizontal space is budgeted in integer units: a collapsed dimension is one
unit wide; a dimension with expanded branches is 1 + max over its expanded
branches of the summed child units. The drawable width splits into that
many equal columns. A dimension's own axis sits centered in the leftmost
unit of its slot; every expanded branch of the dimension gets a box over
the remaining units, vertically confined to the band of its option (or the
projected band of its range) so sibling boxes can never collide. Box
interiors recurse with the same rules.

Polylines get one vertex per visible axis the observation crosses. Lines
that do not satisfy an expanded branch cross the slot horizontally at their
own value, and lines leaving a box exit horizontally to the slot edge, so a
polyline enters a branch box exactly when it satisfies that branch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .model import (
    AxisPath,
    Branch,
    CATEGORICAL,
    Dataset,
    DimensionSpec,
    LayoutError,
    Observation,
    OptionSpec,
    PathError,
    PathLike,
    Schema,
    StateError,
    Value,
    as_path,
    evaluate_predicate,
)


@dataclass(frozen=True)
class Canvas:
    """Pixel canvas; margin is reserved on every side."""

    width: float
    height: float
    margin: float = 40.0

    def __post_init__(self) -> None:
        if self.margin < 0:
            raise LayoutError("margin must be >= 0")
        if self.width - 2 * self.margin <= 0 or self.height - 2 * self.margin <= 0:
            raise LayoutError("canvas too small for its margin")


@dataclass(frozen=True)
class ExpansionState:
    """Set of expanded branch paths; prefix-closed over branch nesting."""

    expanded: frozenset[AxisPath] = frozenset()

    @classmethod
    def empty(cls) -> "ExpansionState":
        return cls(frozenset())

    @classmethod
    def of(cls, schema: Schema, paths: Iterable[PathLike]) -> "ExpansionState":
        state = cls(frozenset(as_path(p) for p in paths))
        state.validate(schema)
        return state

    def validate(self, schema: Schema) -> None:
        for path in self.expanded:
            branch = schema.resolve_branch(path)
            if not branch.children:
                raise StateError(f"branch {path} has no sub-dimensions")
            for ancestor in path.ancestor_branches():
                if ancestor not in self.expanded:
                    raise StateError(f"{path} is expanded but its ancestor {ancestor} is not")

    def __contains__(self, path: PathLike) -> bool:
        return as_path(path) in self.expanded


def expand(schema: Schema, state: ExpansionState, branch_path: PathLike) -> ExpansionState:
    """Add a branch to the expansion; idempotent."""
    path = as_path(branch_path)
    branch = schema.resolve_branch(path)
    if not branch.children:
        raise StateError(f"branch {path} has no sub-dimensions to expand")
    for ancestor in path.ancestor_branches():
        if ancestor not in state.expanded:
            raise StateError(f"cannot expand {path}: ancestor branch {ancestor} is collapsed")
    return ExpansionState(state.expanded | {path})


def collapse(state: ExpansionState, branch_path: PathLike) -> ExpansionState:
    """Remove a branch and every expanded branch nested under it; idempotent."""
    path = as_path(branch_path)
    return ExpansionState(frozenset(p for p in state.expanded if not path.is_prefix_of(p)))


def expand_all(schema: Schema) -> ExpansionState:
    """Every expandable branch, at every depth."""
    return ExpansionState(frozenset(schema.expandable_branch_paths()))


# ---------------------------------------------------------------------------
# Weights
# ---------------------------------------------------------------------------

def _spec_weight(dim: DimensionSpec, path: AxisPath, expansion: ExpansionState) -> int:
    widest = 0
    for key, branch in dim.branches():
        branch_path = path.child(key)
        if branch.children and branch_path in expansion.expanded:
            total = sum(
                _spec_weight(child, branch_path.child(child.id), expansion)
                for child in branch.children
            )
            widest = max(widest, total)
    return 1 + widest


def dimension_weight(schema: Schema, path: PathLike, expansion: ExpansionState) -> int:
    """Horizontal units the dimension's slot spans under the expansion."""
    path = as_path(path)
    dim = schema.resolve_dimension(path)
    return _spec_weight(dim, path, expansion)


def total_weight(schema: Schema, expansion: ExpansionState) -> int:
    return sum(_spec_weight(dim, AxisPath((dim.id,)), expansion) for dim in schema.dimensions)


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LayoutParams:
    inner_padding: float = 6.0
    min_column_width: float = 40.0


@dataclass(frozen=True)
class Rect:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def width(self) -> float:
        return self.x1 - self.x0

    @property
    def height(self) -> float:
        return self.y1 - self.y0

    def contains(self, x: float, y: float) -> bool:
        return self.x0 <= x <= self.x1 and self.y0 <= y <= self.y1

    def intersects(self, other: "Rect") -> bool:
        return not (
            self.x1 <= other.x0
            or other.x1 <= self.x0
            or self.y1 <= other.y0
            or other.y1 <= self.y0
        )

    def contains_rect(self, other: "Rect") -> bool:
        return (
            self.x0 <= other.x0
            and self.y0 <= other.y0
            and other.x1 <= self.x1
            and other.y1 <= self.y1
        )

    def shrink(self, amount: float) -> "Rect":
        return Rect(self.x0 + amount, self.y0 + amount, self.x1 - amount, self.y1 - amount)


@dataclass(frozen=True)
class OptionAnchor:
    value: str
    y: float
    band: tuple[float, float]
    expandable: bool


@dataclass(frozen=True)
class AxisGeom:
    path: AxisPath
    label: str
    x: float
    y_top: float
    y_bottom: float
    kind: str
    domain: tuple[float, float] | None = None
    options: tuple[OptionAnchor, ...] = ()

    @property
    def height(self) -> float:
        return self.y_bottom - self.y_top


@dataclass(frozen=True)
class BranchBox:
    branch_path: AxisPath
    rect: Rect


@dataclass(frozen=True)
class LayoutGeometry:
    canvas: Canvas
    total_weight: int
    axes: tuple[AxisGeom, ...]
    branch_boxes: tuple[BranchBox, ...]
    polylines: Mapping[str, tuple[tuple[float, float], ...]]

    def axis(self, path: PathLike) -> AxisGeom:
        path = as_path(path)
        for axis in self.axes:
            if axis.path == path:
                return axis
        raise PathError(f"no axis at {path} in this geometry")

    def box(self, branch_path: PathLike) -> BranchBox:
        branch_path = as_path(branch_path)
        for box in self.branch_boxes:
            if box.branch_path == branch_path:
                return box
        raise PathError(f"no branch box at {branch_path} in this geometry")


def axis_value_y(axis: AxisGeom, value: Value) -> float:
    """Vertical position of a value on an axis (numeric max maps to the top)."""
    if axis.kind == CATEGORICAL:
        for anchor in axis.options:
            if anchor.value == value:
                return anchor.y
        raise PathError(f"{value!r} is not an option on axis {axis.path}")
    assert axis.domain is not None
    vmin, vmax = axis.domain
    fraction = (float(value) - vmin) / (vmax - vmin)
    return axis.y_top + (1.0 - fraction) * axis.height


# Internal slot tree ---------------------------------------------------------

@dataclass
class _BranchNode:
    key: str
    path: AxisPath
    branch: Branch
    box: Rect
    inner: Rect
    children: "list[_DimNode]" = field(default_factory=list)


@dataclass
class _DimNode:
    spec: DimensionSpec
    path: AxisPath
    axis: AxisGeom
    slot_x1: float
    branches: list[_BranchNode] = field(default_factory=list)


def _padded(low: float, high: float, padding: float) -> tuple[float, float]:
    # Padding never eats more than half the extent, so nested boxes stay real.
    pad = min(padding, (high - low) / 4.0)
    return low + pad, high - pad


def _axis_geometry(dim: DimensionSpec, path: AxisPath, x: float, y0: float, y1: float) -> AxisGeom:
    height = y1 - y0
    if dim.kind == CATEGORICAL:
        n = len(dim.options)
        anchors = []
        for index, opt in enumerate(dim.options):
            band = (y0 + index * height / n, y0 + (index + 1) * height / n)
            anchors.append(
                OptionAnchor(
                    value=opt.value,
                    y=y0 + (index + 0.5) * height / n,
                    band=band,
                    expandable=bool(opt.children),
                )
            )
        return AxisGeom(path, dim.label, x, y0, y1, dim.kind, None, tuple(anchors))
    rng = dim.range
    assert rng is not None
    return AxisGeom(path, dim.label, x, y0, y1, dim.kind, (rng.min, rng.max))


def _build_nodes(
    dims: Iterable[DimensionSpec],
    prefix: tuple[str, ...],
    x0: float,
    unit: float,
    y0: float,
    y1: float,
    expansion: ExpansionState,
    params: LayoutParams,
) -> list[_DimNode]:
    nodes: list[_DimNode] = []
    cursor = x0
    for dim in dims:
        path = AxisPath(prefix + (dim.id,))
        weight = _spec_weight(dim, path, expansion)
        slot_x1 = cursor + weight * unit
        axis = _axis_geometry(dim, path, cursor + unit / 2.0, y0, y1)
        node = _DimNode(spec=dim, path=path, axis=axis, slot_x1=slot_x1)
        for key, branch in dim.branches():
            branch_path = path.child(key)
            if not branch.children or branch_path not in expansion.expanded:
                continue
            if isinstance(branch, OptionSpec):
                band_top, band_bottom = next(
                    a.band for a in axis.options if a.value == key
                )
            else:
                band_top = axis_value_y(axis, branch.high)
                band_bottom = axis_value_y(axis, branch.low)
                band_top = max(band_top, y0)
                band_bottom = min(band_bottom, y1)
            box_y0, box_y1 = _padded(band_top, band_bottom, params.inner_padding)
            box = Rect(cursor + unit, box_y0, slot_x1, box_y1)
            inner_x0, inner_x1 = _padded(box.x0, box.x1, params.inner_padding)
            inner_y0, inner_y1 = _padded(box.y0, box.y1, params.inner_padding)
            inner = Rect(inner_x0, inner_y0, inner_x1, inner_y1)
            child_units = sum(
                _spec_weight(child, branch_path.child(child.id), expansion)
                for child in branch.children
            )
            children = _build_nodes(
                branch.children,
                branch_path.tokens,
                inner.x0,
                inner.width / child_units,
                inner.y0,
                inner.y1,
                expansion,
                params,
            )
            node.branches.append(_BranchNode(key, branch_path, branch, box, inner, children))
        nodes.append(node)
        cursor = slot_x1
    return nodes


def _collect(nodes: list[_DimNode], axes: list[AxisGeom], boxes: list[BranchBox]) -> None:
    for node in nodes:
        axes.append(node.axis)
        for branch_node in node.branches:
            boxes.append(BranchBox(branch_node.path, branch_node.box))
            _collect(branch_node.children, axes, boxes)


def _line_vertices(obs: Observation, nodes: list[_DimNode]) -> list[tuple[float, float]]:
    vertices: list[tuple[float, float]] = []
    for node in nodes:
        value = obs.values[node.path]
        y = axis_value_y(node.axis, value)
        vertices.append((node.axis.x, y))
        if not node.branches:
            continue
        matched = next(
            (b for b in node.branches if evaluate_predicate(b.branch, value)), None
        )
        if matched is None:
            # Crossing the expanded slot at its own level keeps the line out
            # of every box it does not belong to.
            vertices.append((node.slot_x1, y))
        else:
            vertices.extend(_line_vertices(obs, matched.children))
            vertices.append((node.slot_x1, vertices[-1][1]))
    return vertices


def compute_layout(
    data: Dataset,
    expansion: ExpansionState,
    canvas: Canvas,
    params: LayoutParams | None = None,
) -> LayoutGeometry:
    """Pure function from (dataset, expansion, canvas) to drawable geometry."""
    params = params or LayoutParams()
    expansion.validate(data.schema)

    weight = total_weight(data.schema, expansion)
    drawable = canvas.width - 2 * canvas.margin
    unit = drawable / weight
    if unit < params.min_column_width:
        feasible = weight * params.min_column_width + 2 * canvas.margin
        raise LayoutError(
            f"canvas width {canvas.width:g} cannot hold {weight} columns at "
            f"min column width {params.min_column_width:g}; needs >= {feasible:g}"
        )

    nodes = _build_nodes(
        data.schema.dimensions,
        (),
        canvas.margin,
        unit,
        canvas.margin,
        canvas.height - canvas.margin,
        expansion,
        params,
    )

    axes: list[AxisGeom] = []
    boxes: list[BranchBox] = []
    _collect(nodes, axes, boxes)
    axes.sort(key=lambda a: (a.x, str(a.path)))

    polylines = {
        obs.id: tuple(_line_vertices(obs, nodes)) for obs in data.observations
    }

    return LayoutGeometry(
        canvas=canvas,
        total_weight=weight,
        axes=tuple(axes),
        branch_boxes=tuple(boxes),
        polylines=polylines,
    )
