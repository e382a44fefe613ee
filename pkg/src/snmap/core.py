"""Core data model shared by every stage of the pipeline.

Conventions used throughout the package:

* pixel (0, 0) is the top-left corner; rows grow downward, columns grow
  to the right;
* frame values are float64 and must be finite;
* frames are immutable after construction (the backing array is locked).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .exceptions import InputError, ShapeMismatch


@dataclass(frozen=True, eq=False)
class Frame:
    """A single rows x cols image with finite float64 values."""

    values: NDArray[np.float64]

    def __init__(self, values: ArrayLike):
        arr = np.asarray(values, dtype=np.float64)
        if arr.ndim != 2:
            raise InputError(f"frame must be 2-D, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InputError(f"frame must be at least 1x1, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise InputError("frame contains NaN or Inf")
        arr = arr.copy()
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def cols(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape


@dataclass(frozen=True, eq=False)
class Sequence:
    """An ordered list of equally shaped frames from one source."""

    frames: tuple[Frame, ...]
    source: str = ""
    label: str = "seq1"

    def __init__(self, frames, source: str = "", label: str = "seq1"):
        frames = tuple(frames)
        if not frames:
            raise InputError("sequence needs at least one frame")
        shape = frames[0].shape
        for k, f in enumerate(frames):
            if f.shape != shape:
                raise ShapeMismatch(
                    f"frame {k} has shape {f.shape}, expected {shape}"
                )
        object.__setattr__(self, "frames", frames)
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "label", label)

    @property
    def frame_count(self) -> int:
        return len(self.frames)

    @property
    def frame_shape(self) -> tuple[int, int]:
        return self.frames[0].shape

    def __len__(self) -> int:
        return len(self.frames)

    def __getitem__(self, i) -> Frame:
        return self.frames[i]


@dataclass(frozen=True)
class PixelCoord:
    """A (row, col) position; may be fractional."""

    row: float
    col: float


@dataclass(frozen=True)
class RectROI:
    """Axis-aligned rectangle: top-left corner plus extent, 0-based."""

    row0: int
    col0: int
    height: int
    width: int

    def __post_init__(self):
        if self.row0 < 0 or self.col0 < 0:
            raise InputError("rectangle corner must be non-negative")
        if self.height < 1 or self.width < 1:
            raise InputError("rectangle extent must be positive")


@dataclass(frozen=True)
class PolygonROI:
    """A closed polygon given by at least three (row, col) vertices."""

    vertices: tuple[PixelCoord, ...]

    def __init__(self, vertices):
        verts = tuple(
            v if isinstance(v, PixelCoord) else PixelCoord(float(v[0]), float(v[1]))
            for v in vertices
        )
        if len(verts) < 3:
            raise InputError("polygon needs at least three vertices")
        object.__setattr__(self, "vertices", verts)


def validate_pair(seq1: Sequence, seq2: Sequence) -> tuple[Sequence, Sequence]:
    """Check two sequences are comparable, truncating to the shorter one.

    Frame shapes must match exactly. Unequal frame counts are tolerated:
    the longer sequence is cut down to the common length and a warning is
    emitted. Idempotent on already-valid pairs.
    """
    if seq1.frame_shape != seq2.frame_shape:
        raise ShapeMismatch(
            f"frame shapes differ: {seq1.frame_shape} vs {seq2.frame_shape}"
        )
    n1, n2 = seq1.frame_count, seq2.frame_count
    if n1 == n2:
        return seq1, seq2
    n = min(n1, n2)
    warnings.warn(
        f"sequences have {n1} and {n2} frames; truncating both to {n}",
        stacklevel=2,
    )
    if n1 > n:
        seq1 = Sequence(seq1.frames[:n], source=seq1.source, label=seq1.label)
    if n2 > n:
        seq2 = Sequence(seq2.frames[:n], source=seq2.source, label=seq2.label)
    return seq1, seq2
