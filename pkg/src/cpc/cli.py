"""Command-line front door: validate, convert, render, serve.

Exit codes: 0 success, 1 validation failure, 2 usage error. Every command
is a thin composition of library calls; no logic lives only here.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .ingest import dataset_to_json, from_automl_log, from_flat_csv, parse_cpc_json
from .layout import Canvas, ExpansionState, compute_layout, expand_all
from .model import CpcError, Dataset, LayoutError, PathError
from .render import to_svg
from .server import ServerConfig, SessionStore, run_server


def _read_input(source: str) -> bytes:
    if source == "-":
        return sys.stdin.buffer.read()
    return Path(source).read_bytes()


def _fail(message: str) -> "click.exceptions.Exit":
    click.echo(message, err=True)
    return SystemExit(1)


@click.group()
def main() -> None:
    """Conditional parallel coordinates toolbox."""


@main.command()
@click.argument("file")
def validate(file: str) -> None:
    """Validate a CPC-JSON document; report problems on stderr."""
    try:
        data = parse_cpc_json(_read_input(file))
    except CpcError as exc:
        raise _fail(f"invalid: {exc}")
    click.echo(f"ok: {len(data.schema.dimensions)} dimensions, "
               f"{len(data.observations)} observations")


@main.command()
@click.option("--from", "source_format", type=click.Choice(["automl", "csv"]), required=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.option("--kinds", default=None,
              help="CSV column kinds: 'name=numeric,name=categorical' or positional 'n,c,...'")
@click.argument("file")
def convert(source_format: str, out_path: str, kinds: str | None, file: str) -> None:
    """Convert a search log (JSONL) or flat CSV into CPC-JSON."""
    raw = _read_input(file)
    try:
        if source_format == "automl":
            data = from_automl_log(raw)
        else:
            if kinds is None:
                raise click.UsageError("csv conversion needs --kinds")
            data = from_flat_csv(raw, kinds)
    except CpcError as exc:
        raise _fail(f"conversion failed: {exc}")
    Path(out_path).write_bytes(dataset_to_json(data, pretty=True) + b"\n")
    click.echo(f"wrote {out_path}")


def _expansion_for(data: Dataset, expand_spec: tuple[str, ...]) -> ExpansionState:
    flat = [p for chunk in expand_spec for p in chunk.split(",") if p]
    if flat == ["all"]:
        return expand_all(data.schema)
    try:
        return ExpansionState.of(data.schema, flat)
    except (PathError, CpcError) as exc:
        raise click.UsageError(f"--expand: {exc}") from exc


@main.command()
@click.option("--expand", "expand_spec", multiple=True,
              help="Branch paths to expand (comma separated, repeatable) or 'all'.")
@click.option("--width", default=1200.0, show_default=True)
@click.option("--height", default=640.0, show_default=True)
@click.option("--margin", default=40.0, show_default=True)
@click.option("--depth-cap", default=8, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False))
@click.argument("file")
def render(expand_spec: tuple[str, ...], width: float, height: float, margin: float,
           depth_cap: int, out_path: str, file: str) -> None:
    """Render a CPC-JSON document to SVG."""
    try:
        data = parse_cpc_json(_read_input(file))
    except CpcError as exc:
        raise _fail(f"invalid: {exc}")
    if data.schema.depth() > depth_cap:
        raise _fail(f"schema depth {data.schema.depth()} exceeds --depth-cap {depth_cap}")
    expansion = _expansion_for(data, expand_spec)
    try:
        geometry = compute_layout(data, expansion, Canvas(width, height, margin))
    except LayoutError as exc:
        raise click.UsageError(str(exc)) from exc
    Path(out_path).write_bytes(to_svg(geometry))
    click.echo(f"wrote {out_path}")


@main.command()
@click.option("--port", default=8765, show_default=True, envvar="CPC_PORT")
@click.option("--host", default="127.0.0.1", show_default=True, envvar="CPC_HOST")
@click.option("--data", "data_dir", default=None, envvar="CPC_DATA",
              type=click.Path(exists=True, file_okay=False),
              help="Directory of CPC-JSON files to preload.")
@click.option("--static", "static_dir", default=None, envvar="CPC_STATIC",
              type=click.Path(exists=True, file_okay=False),
              help="Static asset directory for the web UI.")
@click.option("--depth-cap", default=8, show_default=True, envvar="CPC_DEPTH_CAP")
@click.option("--size-cap", default=50000, show_default=True, envvar="CPC_SIZE_CAP",
              help="Maximum observations per dataset.")
def serve(port: int, host: str, data_dir: str | None, static_dir: str | None,
          depth_cap: int, size_cap: int) -> None:
    """Serve the HTTP API (and optionally the web UI)."""
    store = SessionStore()
    config = ServerConfig(depth_cap=depth_cap, max_observations=size_cap,
                          static_dir=static_dir)
    if data_dir:
        for path in sorted(Path(data_dir).glob("*.json")):
            try:
                data = parse_cpc_json(path.read_bytes())
            except CpcError as exc:
                raise _fail(f"{path}: {exc}")
            if data.schema.depth() > depth_cap:
                raise _fail(f"{path}: schema depth exceeds --depth-cap {depth_cap}")
            store.add_dataset(data, dataset_id=path.stem)
            click.echo(f"loaded {path.stem} ({len(data.observations)} observations)")
    run_server(store, config, host=host, port=port)


if __name__ == "__main__":
    main()
