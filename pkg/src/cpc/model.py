"""Conditional multivariate data: schemas, predicates, observations.

A schema is a list of top-level dimensions. Categorical dimensions carry
ordered options; numeric dimensions carry a [min, max] range. Either kind
can bind extra child dimensions to a branch: an option value or a declared
numeric sub-range. An observation stores a value for every top-level
dimension and, recursively, for every child dimension whose governing
branch predicate holds on the parent value. Values must not exist anywhere
else.

Paths address dimensions and branches with '/'-separated tokens that
alternate dimension ids and branch keys, e.g. ``Axis_3/Enabled/Subaxis_1``
(a dimension path) or ``Axis_3/Enabled`` (a branch path). Range branch
keys render as ``[low,high]``.

Everything here is an immutable value; the operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


class CpcError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(CpcError):
    """Invalid schema declaration."""


class PathError(CpcError):
    """A path that cannot be resolved against the schema."""


class ValidationError(CpcError):
    """A value that does not fit its dimension."""


class DatasetError(CpcError):
    """Observations that violate the schema; carries per-observation reports."""

    def __init__(self, message: str, reports: Mapping[str, "ValidationReport"] | None = None):
        super().__init__(message)
        self.reports = dict(reports or {})


class StateError(CpcError):
    """Invalid expansion-state transition."""


class LayoutError(CpcError):
    """Geometry cannot be computed for the requested canvas."""


class UsageError(CpcError):
    """An operation called outside its contract (wrong mode, wrong axis kind)."""


class ResolutionError(CpcError):
    """A target referencing ids that do not exist (stale geometry or dataset)."""


class ParseError(CpcError):
    """Malformed input document; message carries line/path context."""


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------

def _format_number(value: float) -> str:
    """Canonical text for numbers in range keys: '.' decimal separator."""
    return str(float(value))


def range_key(low: float, high: float) -> str:
    """Canonical branch key for a numeric sub-range, e.g. '[0.0,10.5]'."""
    return f"[{_format_number(low)},{_format_number(high)}]"


def parse_range_key(token: str) -> tuple[float, float]:
    """Inverse of range_key. Raises PathError on malformed tokens."""
    if not (token.startswith("[") and token.endswith("]")):
        raise PathError(f"not a range key: {token!r}")
    body = token[1:-1]
    parts = body.split(",")
    if len(parts) != 2:
        raise PathError(f"range key needs exactly two bounds: {token!r}")
    try:
        return float(parts[0]), float(parts[1])
    except ValueError as exc:
        raise PathError(f"range key bounds must be numbers: {token!r}") from exc


@dataclass(frozen=True, order=True)
class AxisPath:
    """'/'-separated address of a dimension (odd token count) or branch (even)."""

    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise PathError("empty path")
        for token in self.tokens:
            if not token:
                raise PathError(f"empty path segment in {self.tokens!r}")

    @classmethod
    def parse(cls, text: "PathLike") -> "AxisPath":
        if isinstance(text, AxisPath):
            return text
        if not isinstance(text, str):
            raise PathError(f"cannot parse path from {type(text).__name__}")
        return cls(tuple(text.split("/")))

    def __str__(self) -> str:
        return "/".join(self.tokens)

    @property
    def is_dimension(self) -> bool:
        return len(self.tokens) % 2 == 1

    @property
    def is_branch(self) -> bool:
        return len(self.tokens) % 2 == 0

    @property
    def parent(self) -> "AxisPath | None":
        if len(self.tokens) == 1:
            return None
        return AxisPath(self.tokens[:-1])

    @property
    def last(self) -> str:
        return self.tokens[-1]

    def child(self, token: str) -> "AxisPath":
        return AxisPath(self.tokens + (token,))

    def is_prefix_of(self, other: "AxisPath") -> bool:
        return other.tokens[: len(self.tokens)] == self.tokens

    def ancestor_branches(self) -> "tuple[AxisPath, ...]":
        """Every even-length proper prefix, outermost first."""
        end = len(self.tokens) - 1 if self.is_branch else len(self.tokens)
        return tuple(AxisPath(self.tokens[:n]) for n in range(2, end, 2))


PathLike = Union[AxisPath, str]


def as_path(path: PathLike) -> AxisPath:
    return AxisPath.parse(path)


# ---------------------------------------------------------------------------
# Schema
# ---------------------------------------------------------------------------

CATEGORICAL = "categorical"
NUMERIC = "numeric"


@dataclass(frozen=True)
class OptionSpec:
    """One value of a categorical dimension; children make it a branch."""

    value: str
    children: "tuple[DimensionSpec, ...]" = ()


@dataclass(frozen=True)
class RangeBranch:
    """Closed numeric sub-range [low, high] binding child dimensions."""

    low: float
    high: float
    children: "tuple[DimensionSpec, ...]" = ()

    @property
    def key(self) -> str:
        return range_key(self.low, self.high)


@dataclass(frozen=True)
class RangeSpec:
    min: float
    max: float
    step: float | None = None


@dataclass(frozen=True)
class DimensionSpec:
    id: str
    label: str
    kind: str
    options: tuple[OptionSpec, ...] = ()
    range: RangeSpec | None = None
    range_branches: tuple[RangeBranch, ...] = ()

    def branches(self) -> Iterator[tuple[str, "Branch"]]:
        """(key, branch) pairs in declared order."""
        if self.kind == CATEGORICAL:
            for option in self.options:
                yield option.value, option
        else:
            for rb in self.range_branches:
                yield rb.key, rb


Branch = Union[OptionSpec, RangeBranch]


def categorical(
    dim_id: str,
    options: Iterable[str | OptionSpec],
    label: str | None = None,
) -> DimensionSpec:
    """Convenience constructor; plain strings become childless options."""
    specs = tuple(
        opt if isinstance(opt, OptionSpec) else OptionSpec(opt) for opt in options
    )
    return DimensionSpec(id=dim_id, label=label or dim_id, kind=CATEGORICAL, options=specs)


def option(value: str, children: Iterable[DimensionSpec] = ()) -> OptionSpec:
    return OptionSpec(value=value, children=tuple(children))


def numeric(
    dim_id: str,
    vmin: float,
    vmax: float,
    step: float | None = None,
    branches: Iterable[RangeBranch] = (),
    label: str | None = None,
) -> DimensionSpec:
    return DimensionSpec(
        id=dim_id,
        label=label or dim_id,
        kind=NUMERIC,
        range=RangeSpec(float(vmin), float(vmax), None if step is None else float(step)),
        range_branches=tuple(branches),
    )


def range_branch(low: float, high: float, children: Iterable[DimensionSpec] = ()) -> RangeBranch:
    return RangeBranch(low=float(low), high=float(high), children=tuple(children))


def is_number(value: object) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def _check_name(text: str, what: str, context: str) -> None:
    if not isinstance(text, str) or not text:
        raise SchemaError(f"{what} must be a non-empty string at {context}")
    if "/" in text:
        raise SchemaError(f"{what} {text!r} may not contain '/' at {context}")


def _validate_dimension(dim: DimensionSpec, context: str) -> None:
    _check_name(dim.id, "dimension id", context)
    _check_name(dim.label, "dimension label", context)
    here = f"{context}/{dim.id}" if context else dim.id
    if dim.kind == CATEGORICAL:
        if dim.range is not None or dim.range_branches:
            raise SchemaError(f"categorical dimension {here} may not declare a range")
        if not dim.options:
            raise SchemaError(f"categorical dimension {here} needs at least one option")
        seen: set[str] = set()
        for opt in dim.options:
            _check_name(opt.value, "option value", here)
            if opt.value in seen:
                raise SchemaError(f"duplicate option {opt.value!r} on {here}")
            seen.add(opt.value)
            _validate_children(opt.children, f"{here}/{opt.value}")
    elif dim.kind == NUMERIC:
        if dim.options:
            raise SchemaError(f"numeric dimension {here} may not declare options")
        rng = dim.range
        if rng is None:
            raise SchemaError(f"numeric dimension {here} needs a range")
        if not (is_number(rng.min) and is_number(rng.max)) or not rng.min < rng.max:
            raise SchemaError(f"numeric dimension {here} needs min < max")
        if rng.step is not None and not rng.step > 0:
            raise SchemaError(f"numeric dimension {here} needs step > 0")
        intervals = []
        for rb in dim.range_branches:
            if not rng.min <= rb.low < rb.high <= rng.max:
                raise SchemaError(
                    f"range branch {rb.key} on {here} must satisfy "
                    f"min <= low < high <= max"
                )
            intervals.append((rb.low, rb.high))
            _validate_children(rb.children, f"{here}/{rb.key}")
        intervals.sort()
        for (lo_a, hi_a), (lo_b, _hi_b) in zip(intervals, intervals[1:]):
            if lo_b <= hi_a:
                raise SchemaError(f"overlapping range branches on {here}")
    else:
        raise SchemaError(f"unknown dimension kind {dim.kind!r} at {here}")


def _validate_children(children: tuple[DimensionSpec, ...], context: str) -> None:
    seen: set[str] = set()
    for child in children:
        if child.id in seen:
            raise SchemaError(f"duplicate dimension id {child.id!r} under {context}")
        seen.add(child.id)
        _validate_dimension(child, context)


@dataclass(frozen=True)
class Schema:
    """Ordered top-level dimensions; validated on construction."""

    dimensions: tuple[DimensionSpec, ...]

    def __post_init__(self) -> None:
        if not self.dimensions:
            raise SchemaError("schema needs at least one dimension")
        _validate_children(self.dimensions, "")

    def resolve_dimension(self, path: PathLike) -> DimensionSpec:
        path = as_path(path)
        if not path.is_dimension:
            raise PathError(f"not a dimension path: {path}")
        dim, _branch = self._walk(path)
        assert dim is not None
        return dim

    def resolve_branch(self, path: PathLike) -> Branch:
        path = as_path(path)
        if not path.is_branch:
            raise PathError(f"not a branch path: {path}")
        _dim, branch = self._walk(path)
        assert branch is not None
        return branch

    def _walk(self, path: AxisPath) -> tuple[DimensionSpec | None, Branch | None]:
        dims: tuple[DimensionSpec, ...] = self.dimensions
        dim: DimensionSpec | None = None
        branch: Branch | None = None
        for depth, token in enumerate(path.tokens):
            if depth % 2 == 0:
                dim = next((d for d in dims if d.id == token), None)
                if dim is None:
                    raise PathError(f"unknown dimension {token!r} in {path}")
            else:
                assert dim is not None
                branch = self._find_branch(dim, token, path)
                dims = branch.children
        return dim, branch

    @staticmethod
    def _find_branch(dim: DimensionSpec, token: str, path: AxisPath) -> Branch:
        if dim.kind == CATEGORICAL:
            for opt in dim.options:
                if opt.value == token:
                    return opt
            raise PathError(f"unknown option {token!r} of {dim.id} in {path}")
        low, high = parse_range_key(token)
        for rb in dim.range_branches:
            if rb.low == low and rb.high == high:
                return rb
        raise PathError(f"unknown range branch {token!r} of {dim.id} in {path}")

    def iter_dimension_paths(self) -> Iterator[tuple[AxisPath, DimensionSpec]]:
        """Every dimension path, depth first in declared order."""

        def walk(dims: tuple[DimensionSpec, ...], prefix: tuple[str, ...]) -> Iterator:
            for dim in dims:
                path = AxisPath(prefix + (dim.id,))
                yield path, dim
                for key, branch in dim.branches():
                    yield from walk(branch.children, path.tokens + (key,))

        return walk(self.dimensions, ())

    def expandable_branch_paths(self) -> tuple[AxisPath, ...]:
        """Branch paths with non-empty children, depth first."""
        found: list[AxisPath] = []
        for dim_path, dim in self.iter_dimension_paths():
            for key, branch in dim.branches():
                if branch.children:
                    found.append(dim_path.child(key))
        return tuple(found)

    def depth(self) -> int:
        """Number of nested dimension levels (a flat schema has depth 1)."""

        def dim_depth(dim: DimensionSpec) -> int:
            best = 1
            for _key, branch in dim.branches():
                for child in branch.children:
                    best = max(best, 1 + dim_depth(child))
            return best

        return max(dim_depth(d) for d in self.dimensions)


def schema(dimensions: Iterable[DimensionSpec]) -> Schema:
    return Schema(tuple(dimensions))


# ---------------------------------------------------------------------------
# Observations and datasets
# ---------------------------------------------------------------------------

Value = Union[str, float, int]


@dataclass(frozen=True)
class Observation:
    id: str
    values: Mapping[AxisPath, Value]


def observation(obs_id: str, values: Mapping[PathLike, Value]) -> Observation:
    """Build an observation, normalizing path keys."""
    return Observation(id=obs_id, values={as_path(k): v for k, v in values.items()})


@dataclass(frozen=True)
class Violation:
    code: str
    path: str | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def describe(self) -> str:
        return "\n".join(f"[{v.code}] {v.path or '-'}: {v.message}" for v in self.violations)


def evaluate_predicate(branch: Branch, value: Value) -> bool:
    """True iff the value satisfies the branch predicate (bounds inclusive)."""
    if isinstance(branch, OptionSpec):
        if not isinstance(value, str):
            raise ValidationError(
                f"option predicate {branch.value!r} needs a string, got {type(value).__name__}"
            )
        return value == branch.value
    if not is_number(value):
        raise ValidationError(
            f"range predicate {branch.key} needs a number, got {type(value).__name__}"
        )
    return branch.low <= value <= branch.high


def _check_value(dim: DimensionSpec, path: AxisPath, value: Value) -> Violation | None:
    if dim.kind == CATEGORICAL:
        if not isinstance(value, str):
            return Violation("type-mismatch", str(path), f"expected string, got {type(value).__name__}")
        if value not in {opt.value for opt in dim.options}:
            return Violation("unknown-option", str(path), f"{value!r} is not an option of {dim.id}")
        return None
    if not is_number(value):
        return Violation("type-mismatch", str(path), f"expected number, got {type(value).__name__}")
    rng = dim.range
    assert rng is not None
    if not rng.min <= value <= rng.max:
        return Violation(
            "out-of-range", str(path), f"{value} outside [{rng.min}, {rng.max}] of {dim.id}"
        )
    return None


def validate_observation(schema: Schema, obs: Observation) -> ValidationReport:
    """Check one observation; violations are reported, never raised."""
    violations: list[Violation] = []
    explained: set[AxisPath] = set()

    def flag_subtree(branch_path: AxisPath, reason: str) -> None:
        for key in obs.values:
            if branch_path.is_prefix_of(key):
                explained.add(key)
                violations.append(Violation("non-matching-branch", str(key), reason))

    def walk(dims: tuple[DimensionSpec, ...], prefix: tuple[str, ...]) -> None:
        for dim in dims:
            path = AxisPath(prefix + (dim.id,))
            present = path in obs.values
            value = obs.values.get(path)
            value_ok = False
            if not present:
                violations.append(Violation("missing-value", str(path), f"no value for {dim.id}"))
            else:
                explained.add(path)
                problem = _check_value(dim, path, value)
                if problem is not None:
                    violations.append(problem)
                else:
                    value_ok = True
            for key, branch in dim.branches():
                branch_path = path.child(key)
                if value_ok and evaluate_predicate(branch, value):
                    walk(branch.children, branch_path.tokens)
                elif value_ok:
                    flag_subtree(branch_path, f"predicate {key!r} does not hold on {dim.id}={value!r}")
                else:
                    flag_subtree(branch_path, f"value of {dim.id} is missing or invalid")

    walk(schema.dimensions, ())
    for key in obs.values:
        if key not in explained:
            violations.append(Violation("unknown-path", str(key), "path not reachable in schema"))
    return ValidationReport(tuple(violations))


def active_paths(schema: Schema, obs: Observation) -> tuple[AxisPath, ...]:
    """Dimension paths the observation carries, depth first; children of a
    matched branch follow immediately after their parent dimension."""
    report = validate_observation(schema, obs)
    if not report.ok:
        raise DatasetError(f"invalid observation {obs.id!r}", {obs.id: report})

    out: list[AxisPath] = []

    def walk(dims: tuple[DimensionSpec, ...], prefix: tuple[str, ...]) -> None:
        for dim in dims:
            path = AxisPath(prefix + (dim.id,))
            out.append(path)
            value = obs.values[path]
            for key, branch in dim.branches():
                if branch.children and evaluate_predicate(branch, value):
                    walk(branch.children, path.tokens + (key,))

    walk(schema.dimensions, ())
    return tuple(out)


@dataclass(frozen=True)
class Dataset:
    schema: Schema
    observations: tuple[Observation, ...]
    _by_id: Mapping[str, Observation] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        by_id: dict[str, Observation] = {}
        reports: dict[str, ValidationReport] = {}
        for obs in self.observations:
            if obs.id in by_id:
                raise DatasetError(f"duplicate observation id {obs.id!r}")
            by_id[obs.id] = obs
            report = validate_observation(self.schema, obs)
            if not report.ok:
                reports[obs.id] = report
        if reports:
            lines = [f"{obs_id}: {report.describe()}" for obs_id, report in reports.items()]
            raise DatasetError("invalid observations:\n" + "\n".join(lines), reports)
        object.__setattr__(self, "_by_id", by_id)

    def observation(self, obs_id: str) -> Observation:
        try:
            return self._by_id[obs_id]
        except KeyError:
            raise ResolutionError(f"unknown observation id {obs_id!r}") from None

    def has_observation(self, obs_id: str) -> bool:
        return obs_id in self._by_id

    def append(self, obs: Observation) -> "Dataset":
        return Dataset(self.schema, self.observations + (obs,))


def dataset(schema: Schema, observations: Iterable[Observation]) -> Dataset:
    return Dataset(schema, tuple(observations))


def conditional_subset(data: Dataset, branch_path: PathLike) -> frozenset[str]:
    """Ids of observations whose parent-dimension value satisfies the branch."""
    branch_path = as_path(branch_path)
    branch = data.schema.resolve_branch(branch_path)
    parent = branch_path.parent
    assert parent is not None
    ids = []
    for obs in data.observations:
        value = obs.values.get(parent)
        if value is not None and evaluate_predicate(branch, value):
            ids.append(obs.id)
    return frozenset(ids)
