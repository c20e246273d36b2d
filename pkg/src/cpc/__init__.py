"""Conditional parallel coordinates: data model, layout engine, interaction
resolution, SVG export, and an HTTP API for interactive clients."""

from .model import (
    AxisPath,
    CpcError,
    Dataset,
    DatasetError,
    DimensionSpec,
    LayoutError,
    Observation,
    OptionSpec,
    ParseError,
    PathError,
    RangeBranch,
    ResolutionError,
    Schema,
    SchemaError,
    StateError,
    UsageError,
    ValidationError,
    ValidationReport,
    active_paths,
    as_path,
    categorical,
    conditional_subset,
    dataset,
    evaluate_predicate,
    numeric,
    observation,
    option,
    range_branch,
    schema,
    validate_observation,
)
from .layout import (
    AxisGeom,
    BranchBox,
    Canvas,
    ExpansionState,
    LayoutGeometry,
    LayoutParams,
    Rect,
    axis_value_y,
    collapse,
    compute_layout,
    dimension_weight,
    expand,
    expand_all,
    total_weight,
)
from .interaction import (
    AxisRangeHit,
    BranchBoxHit,
    EditOrigin,
    EditSession,
    Emphasis,
    IncompleteEditError,
    NoHit,
    OptionHit,
    PolylineHit,
    SCRATCH,
    begin_edit,
    cancel_edit,
    clear_value,
    commit_edit,
    duplicate_of,
    edit_mode_emphasis,
    edit_polyline_points,
    hit_test,
    missing_paths,
    resolve_brushes,
    resolve_highlight,
    select_value,
)
from .ingest import (
    dataset_to_json,
    from_automl_log,
    from_flat_csv,
    parse_cpc_json,
    schema_to_dict,
)
from .render import (
    DEFAULT_STYLE,
    RenderError,
    Style,
    geometry_from_json,
    geometry_to_json,
    to_svg,
)

__version__ = "0.1.0"
