"""Raster rendering of maps and movie encoding.

Color mapping formulas are deliberately simple integer arithmetic so a
client can reproduce them pixel for pixel:

* sequential:  x = (v - lo) / (hi - lo); gray = round(255 * (1 - x))
* diverging:   a = max(|lo|, |hi|); x = clip(v / a, -1, 1);
               x >= 0 -> (round(255(1-x)), round(255(1-x)), 255)
               x <  0 -> (255, round(255(1-|x|)), round(255(1-|x|)))
* overlay:     sequential gray base, significant pixels solid red

Positive differences render blue, negative red, zero white.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

import numpy as np
from PIL import Image

from .core import Frame
from .exceptions import InputError

CmapKind = Literal["sequential", "diverging", "overlay"]
MovieKind = Literal["O1", "O2", "R1", "R2", "D", "S", "T", "P"]

MOVIE_KINDS: tuple[MovieKind, ...] = ("O1", "O2", "R1", "R2", "D", "S", "T", "P")
DEFAULT_FRAME_DELAY_MS = 100
DEFAULT_SCALE = 8


@dataclass(frozen=True)
class ColorMapSpec:
    """How to turn numbers into colors; range=None means auto."""

    kind: CmapKind = "sequential"
    lo: float | None = None
    hi: float | None = None


@dataclass(frozen=True)
class MovieSpec:
    kind: MovieKind
    frame_delay_ms: int = DEFAULT_FRAME_DELAY_MS
    loop: bool = True
    scale: int = DEFAULT_SCALE


def _auto_range(values: np.ndarray, kind: CmapKind) -> tuple[float, float]:
    if kind == "diverging":
        a = float(np.max(np.abs(values))) if values.size else 0.0
        if a == 0.0:
            a = 1.0
        return -a, a
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        hi = lo + 1.0
    return lo, hi


def render_heatmap(
    values,
    spec: ColorMapSpec = ColorMapSpec(),
    significant=None,
) -> np.ndarray:
    """Map a 2-D field to an RGB uint8 image (no upscaling)."""
    v = values.values if isinstance(values, Frame) else np.asarray(values, float)
    lo = spec.lo
    hi = spec.hi
    if lo is None or hi is None:
        alo, ahi = _auto_range(v, spec.kind)
        lo = alo if lo is None else lo
        hi = ahi if hi is None else hi
    if hi <= lo:
        raise InputError("color range must have hi > lo")

    if spec.kind == "diverging":
        a = max(abs(lo), abs(hi))
        x = np.clip(v / a, -1.0, 1.0)
        ramp = np.rint(255.0 * (1.0 - np.abs(x))).astype(np.uint8)
        img = np.empty(v.shape + (3,), np.uint8)
        pos = x >= 0
        img[..., 0] = np.where(pos, ramp, 255)
        img[..., 1] = ramp
        img[..., 2] = np.where(pos, 255, ramp)
    else:
        x = np.clip((v - lo) / (hi - lo), 0.0, 1.0)
        gray = np.rint(255.0 * (1.0 - x)).astype(np.uint8)
        img = np.stack([gray, gray, gray], axis=-1)

    if spec.kind == "overlay":
        if significant is None:
            raise InputError("overlay rendering needs a significance mask")
        sig = np.asarray(significant, bool)
        img[sig] = (255, 0, 0)
    return img


def upscale(img: np.ndarray, factor: int) -> np.ndarray:
    """Nearest-neighbor integer zoom."""
    if factor < 1:
        raise InputError("scale factor must be >= 1")
    if factor == 1:
        return img
    return np.repeat(np.repeat(img, factor, axis=0), factor, axis=1)


def overlay_check(frame1: Frame, frame2: Frame, scale: int = 1) -> np.ndarray:
    """Blend two registered frames: first in red, second in green.

    Content present in both at the same place shows up yellow; red or
    green fringes betray residual misalignment. Both channels share one
    intensity scale so identical frames give pure yellow.
    """
    if frame1.shape != frame2.shape:
        raise InputError("frames must share a shape")
    v1, v2 = frame1.values, frame2.values
    top = max(float(v1.max()), float(v2.max()), 0.0)
    if top == 0.0:
        top = 1.0
    img = np.zeros(v1.shape + (3,), np.uint8)
    img[..., 0] = np.rint(255.0 * np.clip(v1, 0.0, None) / top)
    img[..., 1] = np.rint(255.0 * np.clip(v2, 0.0, None) / top)
    return upscale(img, scale)


def _palettize(frames: list[np.ndarray]) -> list[Image.Image]:
    """Convert RGB frames to P-mode sharing one movie-wide palette.

    With at most 256 distinct colors over the whole movie the palette is
    exact, so an encode of previously decoded frames is lossless. Above
    that, a single median cut over all frames keeps colors consistent
    from frame to frame.
    """
    stack = np.concatenate(frames, axis=0)
    colors = np.unique(stack.reshape(-1, 3), axis=0)
    if len(colors) <= 256:
        keys = (
            colors[:, 0].astype(np.uint32) << 16
            | colors[:, 1].astype(np.uint32) << 8
            | colors[:, 2].astype(np.uint32)
        )
        palette = np.zeros((256, 3), np.uint8)
        palette[: len(colors)] = colors
        out = []
        for f in frames:
            fk = (
                f[..., 0].astype(np.uint32) << 16
                | f[..., 1].astype(np.uint32) << 8
                | f[..., 2].astype(np.uint32)
            )
            idx = np.searchsorted(keys, fk.ravel()).astype(np.uint8)
            im = Image.fromarray(idx.reshape(f.shape[:2]), mode="P")
            im.putpalette(palette.ravel().tolist())
            out.append(im)
        return out
    joint = Image.fromarray(stack, mode="RGB").quantize(256, dither=Image.Dither.NONE)
    palette = joint.getpalette()
    idx = np.asarray(joint)
    out = []
    at = 0
    for f in frames:
        h = f.shape[0]
        im = Image.fromarray(idx[at : at + h], mode="P")
        im.putpalette(palette)
        out.append(im)
        at += h
    return out


def encode_movie(path, frames: list[np.ndarray], spec: MovieSpec) -> dict:
    """Write an animated GIF plus one PNG per frame in a sibling folder.

    Returns a small manifest fragment listing everything written.
    """
    if not frames:
        raise InputError("movie needs at least one frame")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    scaled = [upscale(f, spec.scale) for f in frames]
    pil = _palettize(scaled)
    kwargs = dict(
        save_all=True,
        append_images=pil[1:],
        duration=spec.frame_delay_ms,
        optimize=False,
    )
    if spec.loop:
        kwargs["loop"] = 0
    pil[0].save(path, format="GIF", **kwargs)

    frame_dir = path.parent / f"{path.stem}_frames"
    frame_dir.mkdir(exist_ok=True)
    pngs = []
    for k, f in enumerate(scaled):
        png_path = frame_dir / f"frame_{k:04d}.png"
        Image.fromarray(f, mode="RGB").save(png_path, format="PNG")
        pngs.append(str(png_path))
    return {
        "kind": spec.kind,
        "gif": str(path),
        "frames": pngs,
        "frame_count": len(frames),
        "frame_delay_ms": spec.frame_delay_ms,
        "loop": spec.loop,
    }


def decode_movie(path) -> list[np.ndarray]:
    """Read back every frame of a GIF as RGB uint8 arrays."""
    out = []
    with Image.open(path) as im:
        for k in range(getattr(im, "n_frames", 1)):
            im.seek(k)
            out.append(np.asarray(im.convert("RGB")))
    return out


def height_field_payload(values: np.ndarray) -> dict:
    """A map as the 3-D height-field payload: row-major values plus range."""
    v = np.asarray(values, float)
    return {
        "rows": int(v.shape[0]),
        "cols": int(v.shape[1]),
        "values": [float(x) for x in v.ravel()],
        "range": [float(v.min()), float(v.max())],
    }


def height_field_json(path, values: np.ndarray) -> dict:
    """Serialize a map as the 3-D height-field payload (JSON, row-major)."""
    payload = height_field_payload(values)
    Path(path).write_text(json.dumps(payload), encoding="utf-8")
    return payload
