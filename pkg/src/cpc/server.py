"""HTTP+JSON service over the engine.

Layout and highlight endpoints are stateless pure calls; expansion state
always travels with the request. The only server state is the dataset
store and the edit sessions, one active session per dataset, with edit
actions serialized per session.

Error bodies are ``{"code", "message", "path"?}`` with 400 for invalid
input, 404 for unknown ids, and 409 for conflicting edit actions.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Any, Mapping

from fastapi import Body, FastAPI
from fastapi.responses import JSONResponse, Response

from . import interaction
from .ingest import (
    dataset_to_json,
    from_automl_log,
    from_flat_csv,
    parse_cpc_json,
    schema_to_dict,
)
from .interaction import (
    AxisRangeHit,
    BranchBoxHit,
    EditOrigin,
    EditSession,
    HitTarget,
    NoHit,
    OptionHit,
    PolylineHit,
)
from .layout import Canvas, ExpansionState, compute_layout, expand_all
from .model import (
    CpcError,
    Dataset,
    DatasetError,
    LayoutError,
    ParseError,
    PathError,
    ResolutionError,
    SchemaError,
    StateError,
    UsageError,
    ValidationError,
    as_path,
)
from .render import geometry_to_json, to_svg


@dataclass
class ServerConfig:
    depth_cap: int = 8
    max_observations: int = 50000
    static_dir: str | None = None


_STATUS_BY_ERROR: tuple[tuple[type, int, str], ...] = (
    (ResolutionError, 404, "unknown-id"),
    (ParseError, 400, "parse-error"),
    (SchemaError, 400, "schema-error"),
    (DatasetError, 400, "invalid-observations"),
    (ValidationError, 400, "invalid-value"),
    (LayoutError, 400, "layout-error"),
    (StateError, 400, "invalid-expansion"),
    (PathError, 400, "unknown-path"),
    (UsageError, 400, "usage-error"),
)


def _error_response(exc: CpcError, conflict_usage: bool = False) -> JSONResponse:
    status, code = 400, "error"
    for err_type, err_status, err_code in _STATUS_BY_ERROR:
        if isinstance(exc, err_type):
            status, code = err_status, err_code
            break
    if conflict_usage and isinstance(exc, UsageError):
        status, code = 409, "edit-conflict"
    body: dict[str, Any] = {"code": code, "message": str(exc)}
    if isinstance(exc, interaction.IncompleteEditError) and exc.missing:
        body["path"] = str(exc.missing[0])
    return JSONResponse(status_code=status, content=body)


class _NotFound(CpcError):
    pass


@dataclass
class _SessionEntry:
    dataset_id: str
    session: EditSession
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionStore:
    """Thread-safe dataset and edit-session registry."""

    def __init__(self) -> None:
        self._lock = threading.RLock()
        self._datasets: dict[str, Dataset] = {}
        self._sessions: dict[str, _SessionEntry] = {}
        self._dataset_seq = 0
        self._session_seq = 0

    def add_dataset(self, data: Dataset, dataset_id: str | None = None) -> str:
        with self._lock:
            if dataset_id is None:
                self._dataset_seq += 1
                dataset_id = f"ds-{self._dataset_seq}"
            if dataset_id in self._datasets:
                raise UsageError(f"dataset id {dataset_id!r} already exists")
            self._datasets[dataset_id] = data
            return dataset_id

    def dataset(self, dataset_id: str) -> Dataset:
        with self._lock:
            try:
                return self._datasets[dataset_id]
            except KeyError:
                raise _NotFound(f"unknown dataset {dataset_id!r}") from None

    def replace_dataset(self, dataset_id: str, data: Dataset) -> None:
        with self._lock:
            if dataset_id not in self._datasets:
                raise _NotFound(f"unknown dataset {dataset_id!r}")
            self._datasets[dataset_id] = data

    def list_datasets(self) -> list[dict]:
        with self._lock:
            return [
                {
                    "datasetId": dataset_id,
                    "dimensions": len(data.schema.dimensions),
                    "observations": len(data.observations),
                }
                for dataset_id, data in self._datasets.items()
            ]

    def begin_session(self, dataset_id: str, origin: EditOrigin) -> tuple[str, _SessionEntry]:
        with self._lock:
            data = self.dataset(dataset_id)
            for entry in self._sessions.values():
                if entry.dataset_id == dataset_id and entry.session.active:
                    raise UsageError(f"dataset {dataset_id!r} already has an active edit session")
            session = interaction.begin_edit(data, origin)
            self._session_seq += 1
            session_id = f"edit-session-{self._session_seq}"
            entry = _SessionEntry(dataset_id=dataset_id, session=session)
            self._sessions[session_id] = entry
            return session_id, entry

    def session(self, session_id: str) -> _SessionEntry:
        with self._lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise _NotFound(f"unknown edit session {session_id!r}") from None

    def drop_session(self, session_id: str) -> None:
        with self._lock:
            self._sessions.pop(session_id, None)

    def active_session_for(self, dataset_id: str) -> EditSession | None:
        with self._lock:
            for entry in self._sessions.values():
                if entry.dataset_id == dataset_id and entry.session.active:
                    return entry.session
            return None


# ---------------------------------------------------------------------------
# JSON mirrors of the interaction payloads
# ---------------------------------------------------------------------------

def target_from_dict(obj: Mapping) -> HitTarget:
    kind = obj.get("type")
    if kind == "polyline":
        return PolylineHit(str(obj["observationId"]))
    if kind == "option":
        return OptionHit(as_path(obj["axisPath"]), str(obj["value"]))
    if kind == "branchBox":
        return BranchBoxHit(as_path(obj["branchPath"]))
    if kind == "axisValue":
        return AxisRangeHit(as_path(obj["axisPath"]), float(obj["value"]))
    if kind == "none":
        return NoHit()
    raise UsageError(f"unknown hit target type {kind!r}")


def target_to_dict(target: HitTarget) -> dict:
    if isinstance(target, PolylineHit):
        return {"type": "polyline", "observationId": target.observation_id}
    if isinstance(target, OptionHit):
        return {"type": "option", "axisPath": str(target.axis_path), "value": target.option_value}
    if isinstance(target, BranchBoxHit):
        return {"type": "branchBox", "branchPath": str(target.branch_path)}
    if isinstance(target, AxisRangeHit):
        return {"type": "axisValue", "axisPath": str(target.axis_path), "value": target.value}
    return {"type": "none"}


def session_to_dict(data: Dataset, session_id: str, session: EditSession) -> dict:
    rows = []
    for path in sorted(session.selections, key=str):
        dim = data.schema.resolve_dimension(path)
        rows.append({"path": str(path), "label": dim.label, "value": session.selections[path]})
    return {
        "sessionId": session_id,
        "active": session.active,
        "origin": {"kind": session.origin.kind, "sourceId": session.origin.source_id},
        "selections": rows,
        "missing": [str(p) for p in interaction.missing_paths(data.schema, session)],
    }


def _parse_expansion(data: Dataset, raw, depth_cap: int) -> ExpansionState:
    if raw in ("all", ["all"]):
        return expand_all(data.schema)
    paths = raw or []
    if not isinstance(paths, list):
        raise UsageError("expansion must be a list of branch paths or 'all'")
    return ExpansionState.of(data.schema, [str(p) for p in paths])


def _parse_canvas(raw) -> Canvas:
    if raw is None:
        return Canvas(1200.0, 640.0)
    if not isinstance(raw, dict):
        raise UsageError("canvas must be an object with width/height")
    return Canvas(
        width=float(raw.get("width", 1200.0)),
        height=float(raw.get("height", 640.0)),
        margin=float(raw.get("margin", 40.0)),
    )


# ---------------------------------------------------------------------------
# Application
# ---------------------------------------------------------------------------

def create_app(store: SessionStore | None = None, config: ServerConfig | None = None) -> FastAPI:
    store = store if store is not None else SessionStore()
    config = config if config is not None else ServerConfig()
    app = FastAPI(title="cpc", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.config = config

    def guard(fn, *, conflict_usage: bool = False):
        try:
            return fn()
        except _NotFound as exc:
            return JSONResponse(status_code=404, content={"code": "unknown-id", "message": str(exc)})
        except CpcError as exc:
            return _error_response(exc, conflict_usage=conflict_usage)

    def load_dataset(payload: Mapping) -> Dataset:
        if "schema" in payload:
            data = parse_cpc_json(dict(payload))
        else:
            fmt = payload.get("format")
            raw = payload.get("payload")
            if not isinstance(raw, str):
                raise UsageError("payload must be a string for automl/csv uploads")
            if fmt == "automl":
                data = from_automl_log(raw)
            elif fmt == "csv":
                kinds = payload.get("kinds")
                if kinds is None:
                    raise UsageError("csv uploads need a 'kinds' column spec")
                data = from_flat_csv(raw, kinds)
            else:
                raise UsageError("body must be CPC-JSON or {format: automl|csv, payload}")
        if data.schema.depth() > config.depth_cap:
            raise SchemaError(
                f"schema depth {data.schema.depth()} exceeds the cap of {config.depth_cap}"
            )
        if len(data.observations) > config.max_observations:
            raise DatasetError(
                f"{len(data.observations)} observations exceed the cap of {config.max_observations}"
            )
        return data

    @app.get("/api/datasets")
    def list_datasets():
        return {"datasets": store.list_datasets()}

    @app.post("/api/datasets")
    def create_dataset(payload: dict = Body(...)):
        def run():
            dataset_id = store.add_dataset(load_dataset(payload))
            return JSONResponse(status_code=201, content={"datasetId": dataset_id})

        return guard(run)

    @app.get("/api/datasets/{dataset_id}/schema")
    def get_schema(dataset_id: str):
        return guard(lambda: schema_to_dict(store.dataset(dataset_id).schema))

    @app.post("/api/datasets/{dataset_id}/layout")
    def layout(dataset_id: str, payload: dict = Body(default={})):
        def run():
            data = store.dataset(dataset_id)
            expansion = _parse_expansion(data, payload.get("expansion"), config.depth_cap)
            canvas = _parse_canvas(payload.get("canvas"))
            geometry = compute_layout(data, expansion, canvas)
            return Response(content=geometry_to_json(geometry), media_type="application/json")

        return guard(run)

    @app.post("/api/datasets/{dataset_id}/highlight")
    def highlight(dataset_id: str, payload: dict = Body(...)):
        def run():
            data = store.dataset(dataset_id)
            session = store.active_session_for(dataset_id)
            target = None
            brushes = None
            if "target" in payload:
                target = target_from_dict(payload["target"])
            elif "brushes" in payload:
                raw = payload["brushes"]
                if not isinstance(raw, dict):
                    raise UsageError("brushes must map axis paths to [lo, hi]")
                brushes = {path: (float(lo), float(hi)) for path, (lo, hi) in raw.items()}
            else:
                raise UsageError("highlight body needs 'target' or 'brushes'")
            emphasis = interaction.edit_mode_emphasis(data, session, target=target, brushes=brushes)
            return {
                "observationIds": sorted(emphasis.highlighted),
                "mode": emphasis.mode,
                "editActive": emphasis.edit_line,
            }

        return guard(run)

    @app.post("/api/datasets/{dataset_id}/edit")
    def edit(dataset_id: str, payload: dict = Body(...)):
        def run():
            action = payload.get("action")
            if action == "begin":
                origin_kind = payload.get("origin", "scratch")
                origin = (
                    interaction.duplicate_of(str(payload.get("sourceId")))
                    if origin_kind == "duplicate"
                    else EditOrigin("scratch")
                )
                session_id, entry = store.begin_session(dataset_id, origin)
                data = store.dataset(dataset_id)
                return session_to_dict(data, session_id, entry.session)

            session_id = payload.get("sessionId")
            if not isinstance(session_id, str):
                raise UsageError(f"edit action {action!r} needs a sessionId")
            entry = store.session(session_id)
            if entry.dataset_id != dataset_id:
                raise _NotFound(f"session {session_id!r} does not belong to dataset {dataset_id!r}")
            with entry.lock:
                data = store.dataset(dataset_id)
                if action == "select":
                    entry.session = interaction.select_value(
                        data.schema, entry.session, str(payload["path"]), payload["value"]
                    )
                    return session_to_dict(data, session_id, entry.session)
                if action == "clear":
                    entry.session = interaction.clear_value(entry.session, str(payload["path"]))
                    return session_to_dict(data, session_id, entry.session)
                if action == "commit":
                    new_data, obs_id = interaction.commit_edit(data, entry.session)
                    store.replace_dataset(dataset_id, new_data)
                    entry.session = interaction.cancel_edit(entry.session)
                    store.drop_session(session_id)
                    return {"observationId": obs_id}
                if action == "cancel":
                    entry.session = interaction.cancel_edit(entry.session)
                    store.drop_session(session_id)
                    return {"closed": True}
                raise UsageError(f"unknown edit action {action!r}")

        return guard(run, conflict_usage=True)

    @app.get("/api/datasets/{dataset_id}/export.svg")
    def export_svg(
        dataset_id: str,
        expansion: str = "",
        width: float = 1200.0,
        height: float = 640.0,
        margin: float = 40.0,
    ):
        def run():
            data = store.dataset(dataset_id)
            if expansion == "all":
                state = expand_all(data.schema)
            else:
                paths = [p for p in expansion.split(",") if p]
                state = ExpansionState.of(data.schema, paths)
            geometry = compute_layout(data, state, Canvas(width, height, margin))
            return Response(content=to_svg(geometry), media_type="image/svg+xml")

        return guard(run)

    @app.get("/api/datasets/{dataset_id}/observations/export")
    def export_observations(dataset_id: str):
        def run():
            data = store.dataset(dataset_id)
            return Response(content=dataset_to_json(data, pretty=True), media_type="application/json")

        return guard(run)

    if config.static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app


def run_server(
    store: SessionStore,
    config: ServerConfig,
    host: str = "127.0.0.1",
    port: int = 8765,
) -> None:
    import uvicorn

    uvicorn.run(create_app(store, config), host=host, port=port, log_level="info")
