"""Command line entry points.

`snmap run` executes the batch pipeline; `snmap serve` starts the HTTP
service.  A plain-text config file (`key = value`, `#` comments, keys
named after the long flags) can stand in for any flag; explicit flags
win over the file.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .core import PixelCoord, PolygonROI, RectROI
from .exceptions import BindError, InputError, NumericError
from .ingest import ScanSpec
from .pipeline import (
    EXIT_ALIGNMENT,
    EXIT_INPUT,
    EXIT_NUMERIC,
    RunConfig,
    run_pipeline,
)
from .smoothing import Bandwidths


def load_config_file(path) -> dict[str, str]:
    """Parse `key = value` lines; blank lines and #-comments are skipped."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"config line {lineno}: expected key = value")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    return values


def parse_points(text: str) -> list[PixelCoord]:
    """Semicolon-separated `row,col` pairs, e.g. `3,4;10.5,7`."""
    pts = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = part.split(",")
        if len(bits) != 2:
            raise InputError(f"bad point {part!r}: expected row,col")
        try:
            pts.append(PixelCoord(float(bits[0]), float(bits[1])))
        except ValueError:
            raise InputError(f"bad point {part!r}: expected numbers") from None
    return pts


def parse_rect(text: str) -> RectROI:
    """`row0,col0,height,width` with integer fields."""
    bits = [b.strip() for b in text.split(",")]
    if len(bits) != 4:
        raise InputError(f"bad rectangle {text!r}: expected row0,col0,height,width")
    try:
        return RectROI(*(int(b) for b in bits))
    except ValueError:
        raise InputError(f"bad rectangle {text!r}: expected integers") from None


def parse_bandwidths(text: str) -> tuple[Bandwidths, ...]:
    """Semicolon-separated candidates; each is `h` or `h1,h2`."""
    grid = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = part.split(",")
        try:
            if len(bits) == 1:
                h = float(bits[0])
                grid.append(Bandwidths(h, h))
            elif len(bits) == 2:
                grid.append(Bandwidths(float(bits[0]), float(bits[1])))
            else:
                raise ValueError
        except ValueError:
            raise InputError(f"bad bandwidth {part!r}: expected h or h1,h2") from None
    if not grid:
        raise InputError("empty bandwidth list")
    return tuple(grid)


_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


def _as_bool(key: str, val) -> bool:
    if isinstance(val, bool):
        return val
    low = str(val).lower()
    if low in _TRUE:
        return True
    if low in _FALSE:
        return False
    raise InputError(f"config key {key}: expected a boolean, got {val!r}")


@click.group()
def main():
    """Compare two longitudinal image sequences pixel by pixel."""


@main.command("run")
@click.option("--seq1", type=click.Path(), help="CSV file for the first sequence.")
@click.option("--seq2", type=click.Path(), help="CSV file for the second sequence.")
@click.option("--scan", type=click.Choice(["row", "col", "blank"]), default=None,
              help="How frames are delimited in the CSV.")
@click.option("--nframe", type=int, default=None, help="Number of frames to read.")
@click.option("--nrow", type=int, default=None, help="Rows per frame.")
@click.option("--ncol", type=int, default=None, help="Columns per frame.")
@click.option("--row-id", default=None, help="Marker value for row scan mode.")
@click.option("--col-id", type=int, default=None,
              help="1-based column holding the frame id in col scan mode.")
@click.option("--preprocessed", is_flag=True, default=None,
              help="Inputs are already cropped, segmented and aligned.")
@click.option("--seg", type=click.Choice(["auto", "manual"]), default=None)
@click.option("--seg-cutoff1", type=float, default=None)
@click.option("--seg-cutoff2", type=float, default=None)
@click.option("--seg-groups", default=None,
              help="Mixture component count, or 'auto'.")
@click.option("--reg", type=click.Choice(["auto", "manual"]), default=None)
@click.option("--reg-points", default=None,
              help="Four row,col points: two landmarks per sequence, ;-separated.")
@click.option("--roi1", default=None, help="row0,col0,height,width for sequence 1.")
@click.option("--roi2", default=None, help="row0,col0,height,width for sequence 2.")
@click.option("--polygon", default=None,
              help="Polygon vertices row,col;row,col;... applied after registration.")
@click.option("--display", type=click.Choice(["basic", "all"]), default=None)
@click.option("--pmap-dim", type=click.Choice(["2", "3"]), default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--sided", type=click.Choice(["two", "greater"]), default=None)
@click.option("--bandwidths", default=None,
              help="Candidate grid 'h;h1,h2;...'; omit for the built-in grid.")
@click.option("--fdr", type=click.Choice(["frame", "pooled"]), default=None,
              help="Correct significance per frame or across all frames at once.")
@click.option("--df-method", type=click.Choice(["two-moment", "n-minus-6"]),
              default=None)
@click.option("--parallel", is_flag=True, default=None,
              help="Analyze frames on a small thread pool.")
@click.option("--workers", type=int, default=None)
@click.option("--assume-aligned", is_flag=True, default=None,
              help="Skip the interactive alignment confirmation.")
@click.option("--movie-scale", type=int, default=None,
              help="Integer zoom for rendered movies and the overlay.")
@click.option("--seed", type=int, default=None)
@click.option("--out", type=click.Path(), help="Output directory.")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Config file supplying defaults for any flag.")
def run_command(config_path, **flags):
    """Run the full comparison and write maps, movies and a manifest."""
    try:
        cfg = build_run_config(flags, config_path)
        result = run_pipeline(cfg)
    except InputError as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(EXIT_INPUT)
    except NumericError as exc:
        click.echo(f"numeric failure: {exc}", err=True)
        sys.exit(EXIT_NUMERIC)
    for w in result.manifest["warnings"]:
        click.echo(f"warning: {w}", err=True)
    if result.exit_code == EXIT_ALIGNMENT:
        click.echo(
            "alignment not confirmed; inspect overlay.png and re-run with "
            "--assume-aligned, or adjust segmentation/registration",
            err=True,
        )
        for s in result.manifest.get("suggestions", []):
            click.echo(f"  - {s}", err=True)
    else:
        click.echo(f"wrote {len(result.manifest['artifacts'])} artifacts to {result.out_dir}")
    sys.exit(result.exit_code)


def build_run_config(flags: dict, config_path=None) -> RunConfig:
    """Merge config-file values under explicit flags and build a RunConfig."""
    merged = dict(load_config_file(config_path)) if config_path else {}
    for key, val in flags.items():
        if val is not None:
            merged[key.replace("_", "-")] = val

    def get(key, default=None):
        return merged.get(key, default)

    def require(key):
        if key not in merged:
            raise InputError(f"missing required option --{key}")
        return merged[key]

    seq1 = str(require("seq1"))
    seq2 = str(require("seq2"))
    out = str(require("out"))
    scan = ScanSpec(
        mode=str(get("scan", "blank")),
        nframe=int(require("nframe")),
        nrow=int(require("nrow")),
        ncol=int(require("ncol")),
        row_id=str(get("row-id", "")),
        col_id=int(get("col-id", 1)),
    )

    groups = get("seg-groups", "auto")
    if groups != "auto":
        try:
            groups = int(groups)
        except ValueError:
            raise InputError("--seg-groups expects an integer or 'auto'") from None

    reg_points = None
    if get("reg-points") is not None:
        pts = parse_points(str(merged["reg-points"]))
        if len(pts) != 4:
            raise InputError("--reg-points needs exactly four row,col points")
        reg_points = tuple(pts)

    polygon = None
    if get("polygon") is not None:
        polygon = PolygonROI(parse_points(str(merged["polygon"])))

    bandwidths = None
    if get("bandwidths") is not None:
        bandwidths = parse_bandwidths(str(merged["bandwidths"]))

    workers = int(get("workers", 0) or 0)
    if _as_bool("parallel", get("parallel", False)) and workers < 2:
        workers = 4
    if workers < 1:
        workers = 1

    cutoff1 = get("seg-cutoff1")
    cutoff2 = get("seg-cutoff2")
    return RunConfig(
        seq1=seq1,
        seq2=seq2,
        scan=scan,
        out_dir=out,
        preprocessed=_as_bool("preprocessed", get("preprocessed", False)),
        seg_mode=str(get("seg", "auto")),
        seg_cutoff1=None if cutoff1 is None else float(cutoff1),
        seg_cutoff2=None if cutoff2 is None else float(cutoff2),
        seg_groups=groups,
        reg_mode=str(get("reg", "auto")),
        reg_points=reg_points,
        roi1=parse_rect(str(merged["roi1"])) if get("roi1") is not None else None,
        roi2=parse_rect(str(merged["roi2"])) if get("roi2") is not None else None,
        polygon=polygon,
        display=str(get("display", "basic")),
        pmap_dim=int(get("pmap-dim", 2)),
        alpha=float(get("alpha", 0.05)),
        sidedness=str(get("sided", "two")),
        bandwidths=bandwidths,
        fdr_scope=str(get("fdr", "frame")),
        df_method=str(get("df-method", "two-moment")),
        assume_aligned=_as_bool("assume-aligned", get("assume-aligned", False)),
        workers=workers,
        seed=int(get("seed", 0)),
        movie_scale=int(get("movie-scale", 8)),
    )


@main.command("serve")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--no-ui", is_flag=True, default=False,
              help="Serve only the JSON API, without the bundled web UI.")
@click.option("--session-dir", type=click.Path(), default=None,
              help="Persist session state under this directory.")
def serve_command(host, port, no_ui, session_dir):
    """Start the HTTP API (and web UI unless --no-ui)."""
    import uvicorn

    from .server import create_app

    app = create_app(serve_ui=not no_ui, session_dir=session_dir)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    except OSError as exc:
        raise BindError(f"cannot bind {host}:{port}: {exc}") from exc


if __name__ == "__main__":
    main()
