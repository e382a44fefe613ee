"""End-to-end batch pipeline: scan, preprocess, compare, export.

The pipeline is a pure function of its configuration: every random
choice is seeded from the config and all artifacts land under the
output directory together with a manifest that lists each file,
resolved parameters and collected warnings.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from PIL import Image

from . import __version__
from .core import Frame, PixelCoord, PolygonROI, RectROI, Sequence, validate_pair
from .exceptions import InputError
from .ingest import ScanSpec, scan_sequence, _FLOAT_FMT
from .registration import (
    RigidTransform,
    TemporalAlignment,
    crop_roi,
    midline,
    polygon_mask,
    temporal_align,
    transform_from_midline,
    transform_from_points,
    warp,
)
from .render import (
    ColorMapSpec,
    MovieSpec,
    encode_movie,
    height_field_json,
    overlay_check,
    render_heatmap,
)
from .segmentation import Threshold, fit_gmm, find_threshold, apply_threshold
from .smoothing import Bandwidths
from .snm import SnmConfig, run_snm

Display = Literal["basic", "all"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ALIGNMENT = 3
EXIT_NUMERIC = 4

ALIGNMENT_SUGGESTIONS = (
    "re-run segmentation with a manual cutoff near the histogram valley",
    "pick two registration landmarks per sequence and register manually",
    "tighten the rectangular region of interest before segmenting",
)


@dataclass(frozen=True)
class RunConfig:
    """Everything a batch run needs; mirrors the CLI flag for flag."""

    seq1: str
    seq2: str
    scan: ScanSpec
    out_dir: str
    preprocessed: bool = False
    seg_mode: Literal["auto", "manual"] = "auto"
    seg_cutoff1: float | None = None
    seg_cutoff2: float | None = None
    seg_groups: int | Literal["auto"] = "auto"
    reg_mode: Literal["auto", "manual"] = "auto"
    reg_points: tuple[PixelCoord, PixelCoord, PixelCoord, PixelCoord] | None = None
    roi1: RectROI | None = None
    roi2: RectROI | None = None
    polygon: PolygonROI | None = None
    display: Display = "basic"
    pmap_dim: Literal[2, 3] = 2
    alpha: float = 0.05
    sidedness: Literal["two", "greater"] = "two"
    bandwidths: tuple[Bandwidths, ...] | None = None
    fdr_scope: Literal["frame", "pooled"] = "frame"
    df_method: Literal["two-moment", "n-minus-6"] = "two-moment"
    assume_aligned: bool = False
    workers: int = 1
    seed: int = 0
    movie_scale: int = 8

    def __post_init__(self):
        if self.display not in ("basic", "all"):
            raise InputError(f"unknown display mode {self.display!r}")
        if self.pmap_dim not in (2, 3):
            raise InputError("pmap-dim must be 2 or 3")
        if not 0.0 < self.alpha < 1.0:
            raise InputError("alpha must be strictly between 0 and 1")
        if self.sidedness not in ("two", "greater"):
            raise InputError(f"unknown sidedness {self.sidedness!r}")
        if self.seg_mode not in ("auto", "manual"):
            raise InputError(f"unknown segmentation mode {self.seg_mode!r}")
        if self.reg_mode not in ("auto", "manual"):
            raise InputError(f"unknown registration mode {self.reg_mode!r}")
        if self.fdr_scope not in ("frame", "pooled"):
            raise InputError(f"unknown fdr scope {self.fdr_scope!r}")
        if self.df_method not in ("two-moment", "n-minus-6"):
            raise InputError(f"unknown df method {self.df_method!r}")
        if self.workers < 1:
            raise InputError("workers must be at least 1")


def _unified_rois(
    roi1: RectROI | None, roi2: RectROI | None, shape: tuple[int, int]
) -> tuple[RectROI, RectROI] | None:
    """Grow both rectangles to a common size so crops stay comparable."""
    if roi1 is None and roi2 is None:
        return None
    a = roi1 or roi2
    b = roi2 or roi1
    h = max(a.height, b.height)
    w = max(a.width, b.width)
    rows, cols = shape
    if h > rows or w > cols:
        raise InputError("region of interest larger than the frame")

    def grow(r: RectROI) -> RectROI:
        r0 = min(max(r.row0 - (h - r.height) // 2, 0), rows - h)
        c0 = min(max(r.col0 - (w - r.width) // 2, 0), cols - w)
        return RectROI(r0, c0, h, w)

    return grow(a), grow(b)


def _segment_sequence(
    frames: list[Frame],
    cutoff: float | None,
    groups,
    seed: int,
) -> tuple[list[Frame], Threshold]:
    """One cutoff from the first frame, applied to the whole sequence."""
    if cutoff is not None:
        thr = Threshold(value=float(cutoff), origin="manual")
    else:
        model = fit_gmm(frames[0].values, n_components=groups, seed=seed)
        thr = find_threshold(model)
    return [apply_threshold(f, thr) for f in frames], thr


def _estimate_transform(
    frames: list[Frame],
    mode: str,
    points: tuple[PixelCoord, PixelCoord] | None,
) -> RigidTransform:
    shape = frames[0].shape
    if mode == "manual":
        if points is None:
            raise InputError("manual registration needs two points per sequence")
        return transform_from_points(points[0], points[1], shape)
    return transform_from_midline(midline(frames[0]), shape)


def _write_map_csv(path: Path, arr: np.ndarray) -> None:
    lines = [""]
    for row in arr:
        lines.append(",".join(_FLOAT_FMT % v for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _movie_frames(values_list, kind: str, significant_list=None):
    """Render a stack of fields with one shared color range."""
    if kind in ("O1", "O2", "R1", "R2"):
        lo = min(float(v.min()) for v in values_list)
        hi = max(float(v.max()) for v in values_list)
        if hi == lo:
            hi = lo + 1.0
        spec = ColorMapSpec(kind="sequential", lo=lo, hi=hi)
        return [render_heatmap(v, spec) for v in values_list]
    if kind in ("D", "S", "T"):
        a = max(float(np.max(np.abs(v))) for v in values_list)
        if a == 0.0:
            a = 1.0
        spec = ColorMapSpec(kind="diverging", lo=-a, hi=a)
        return [render_heatmap(v, spec) for v in values_list]
    spec = ColorMapSpec(kind="overlay", lo=0.0, hi=1.0)
    return [
        render_heatmap(v, spec, significant=s)
        for v, s in zip(values_list, significant_list)
    ]


@dataclass
class PipelineResult:
    exit_code: int
    manifest: dict
    out_dir: Path


def run_pipeline(config: RunConfig) -> PipelineResult:
    """Run the whole comparison; see RunConfig for the knobs.

    Returns the manifest and the exit code the CLI should use: 0 on
    success, 3 when the alignment gate stops a headless run.
    """
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest: dict = {
        "version": __version__,
        "status": "ok",
        "out_dir": str(out),
        "warnings": [],
        "params": {},
        "artifacts": [],
    }
    artifacts = manifest["artifacts"]

    def add_artifact(kind: str, path: Path):
        artifacts.append({"kind": kind, "path": str(path.relative_to(out))})

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")

        seq1 = scan_sequence(config.seq1, config.scan, label="seq1")
        seq2 = scan_sequence(config.seq2, config.scan, label="seq2")
        seq1, seq2 = validate_pair(seq1, seq2)
        originals = (seq1, seq2)

        frames1 = list(seq1.frames)
        frames2 = list(seq2.frames)
        alignment: TemporalAlignment | None = None
        transforms: dict[str, RigidTransform] | None = None
        thresholds: dict[str, Threshold] | None = None
        mask = None

        if config.preprocessed:
            pairs = list(zip(frames1, frames2))
            reg1, reg2 = frames1, frames2
            if config.polygon is not None:
                mask = polygon_mask(frames1[0].shape, config.polygon)
        else:
            rois = _unified_rois(config.roi1, config.roi2, seq1.frame_shape)
            if rois is not None:
                frames1 = [crop_roi(f, rois[0]) for f in frames1]
                frames2 = [crop_roi(f, rois[1]) for f in frames2]
                manifest["params"]["roi"] = {
                    "seq1": vars(rois[0]),
                    "seq2": vars(rois[1]),
                }

            cut1, cut2 = config.seg_cutoff1, config.seg_cutoff2
            if config.seg_mode == "manual" and (cut1 is None or cut2 is None):
                raise InputError("manual segmentation needs both cutoffs")
            if config.seg_mode == "auto":
                cut1 = cut2 = None
            frames1, thr1 = _segment_sequence(
                frames1, cut1, config.seg_groups, config.seed
            )
            frames2, thr2 = _segment_sequence(
                frames2, cut2, config.seg_groups, config.seed
            )
            thresholds = {"seq1": thr1, "seq2": thr2}

            alignment = temporal_align(
                Sequence(frames1, label="seq1"), Sequence(frames2, label="seq2")
            )
            ex = alignment.excluded
            frames1 = frames1[ex:]
            frames2 = frames2[ex:]

            pts = config.reg_points
            if config.reg_mode == "manual" and pts is None:
                raise InputError("manual registration needs four points")
            t1 = _estimate_transform(
                frames1, config.reg_mode, pts and (pts[0], pts[1])
            )
            t2 = _estimate_transform(
                frames2, config.reg_mode, pts and (pts[2], pts[3])
            )
            transforms = {"seq1": t1, "seq2": t2}
            reg1 = [warp(f, t1) for f in frames1]
            reg2 = [warp(f, t2) for f in frames2]

            if config.polygon is not None:
                mask = polygon_mask(reg1[0].shape, config.polygon)
                keep = mask
                reg1 = [Frame(np.where(keep, f.values, 0.0)) for f in reg1]
                reg2 = [Frame(np.where(keep, f.values, 0.0)) for f in reg2]

            pairs = [(reg1[i], reg2[j]) for i, j in alignment.pairs]

        first_pair = pairs[0]
        overlay = overlay_check(first_pair[0], first_pair[1], scale=config.movie_scale)
        overlay_path = out / "overlay.png"
        Image.fromarray(overlay, mode="RGB").save(overlay_path)
        add_artifact("overlay", overlay_path)

        if alignment is not None:
            manifest["params"]["temporal"] = alignment.to_dict()
        if transforms is not None:
            manifest["params"]["transforms"] = {
                k: t.to_dict() for k, t in transforms.items()
            }
        if thresholds is not None:
            manifest["params"]["thresholds"] = {
                k: t.to_dict() for k, t in thresholds.items()
            }
        manifest["params"]["alpha"] = config.alpha
        manifest["params"]["sidedness"] = config.sidedness
        manifest["params"]["seed"] = config.seed

        if not config.preprocessed and not config.assume_aligned:
            manifest["status"] = "awaiting-alignment"
            manifest["suggestions"] = list(ALIGNMENT_SUGGESTIONS)
            manifest["warnings"] = [str(w.message) for w in caught]
            _finish_manifest(out, manifest)
            return PipelineResult(EXIT_ALIGNMENT, manifest, out)

        snm_cfg = SnmConfig(
            alpha=config.alpha,
            sidedness=config.sidedness,
            bandwidths=config.bandwidths,
            df_method=config.df_method,
            fdr_scope=config.fdr_scope,
            seed=config.seed,
            workers=config.workers,
        )
        result = run_snm(pairs, snm_cfg, mask=mask)
        manifest["params"]["bandwidths"] = result.bandwidths.to_dict()
        if len(result.cv_scores) > 1:
            manifest["params"]["cv_scores"] = [
                {"h1": b.h1, "h2": b.h2, "score": s} for b, s in result.cv_scores
            ]
        manifest["params"]["df"] = [df.to_dict() for df in result.dfs]

        maps_dir = out / "maps"
        maps_dir.mkdir(exist_ok=True)
        movie_dir = out / "movies"

        def export_map(kind: str, arrays):
            for k, arr in enumerate(arrays):
                p = maps_dir / f"{kind}_{k:04d}.csv"
                _write_map_csv(p, arr)
                add_artifact(f"{kind}-csv", p)

        def export_movie(kind: str, frames_rgb):
            spec = MovieSpec(kind=kind, scale=config.movie_scale)
            info = encode_movie(movie_dir / f"{kind}.gif", frames_rgb, spec)
            add_artifact(f"{kind}-movie", Path(info["gif"]))
            for png in info["frames"]:
                add_artifact(f"{kind}-frame", Path(png))

        p_maps = [m.p for m in result.maps]
        sig_maps = [m.significant for m in result.maps]

        if config.pmap_dim == 3:
            surf_dir = out / "maps3d"
            surf_dir.mkdir(exist_ok=True)
            for k, arr in enumerate(p_maps):
                p = surf_dir / f"P_{k:04d}.json"
                height_field_json(p, arr)
                add_artifact("P-surface", p)
        else:
            export_movie("P", _movie_frames(p_maps, "P", sig_maps))
        export_map("P", p_maps)

        if config.display == "all":
            export_map("D", [m.d.values for m in result.maps])
            export_map("S", [m.s for m in result.maps])
            export_map("T", [m.t for m in result.maps])
            o1 = [f.values for f in originals[0].frames]
            o2 = [f.values for f in originals[1].frames]
            if alignment is not None:
                o1 = o1[alignment.excluded :]
                o2 = o2[alignment.excluded :]
            export_movie("O1", _movie_frames(o1, "O1"))
            export_movie("O2", _movie_frames(o2, "O2"))
            export_movie("R1", _movie_frames([f.values for f in reg1], "R1"))
            export_movie("R2", _movie_frames([f.values for f in reg2], "R2"))
            export_movie("D", _movie_frames([m.d.values for m in result.maps], "D"))
            export_movie("S", _movie_frames([m.s for m in result.maps], "S"))
            export_movie("T", _movie_frames([m.t for m in result.maps], "T"))

        manifest["warnings"] = [str(w.message) for w in caught]

    _finish_manifest(out, manifest)
    return PipelineResult(EXIT_OK, manifest, out)


def _finish_manifest(out: Path, manifest: dict) -> None:
    manifest["artifacts"].append({"kind": "manifest", "path": "manifest.json"})
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2), encoding="utf-8"
    )
