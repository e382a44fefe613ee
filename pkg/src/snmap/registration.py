"""Temporal and spatial alignment of two sequences.

Temporal alignment slides one sequence against the other and keeps the
lag with the best average frame correlation. Spatial alignment estimates
a rigid (rotation + translation) transform per sequence that brings its
content midline onto the horizontal center row, or honors two manually
picked points.

Coordinate convention for the rigid geometry: transforms act on
(x, y) = (col, rows-1-row), i.e. x grows rightward and y grows upward,
with positive theta rotating counterclockwise. The midline statistic
m_c below is naturally an "upward" coordinate (more mass in the top
half of the image pushes it above r/2), so fits, transforms and warps
all share that frame. Public entry points accept and return (row, col).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np
from numpy.typing import NDArray

from .core import Frame, PixelCoord, PolygonROI, RectROI, Sequence
from .exceptions import (
    CoincidentPoints,
    InputError,
    NoContent,
    OutOfBounds,
    TooShort,
)

Interp = Literal["bilinear", "nearest"]

# Column of the manual-registration anchor; the anchor row is floor(r/2).
ANCHOR_COL = 4


@dataclass(frozen=True)
class TemporalAlignment:
    """Best lag between two sequences plus the evidence for it."""

    j_max: int
    avg_cor: tuple[float, ...]
    excluded: int
    pairs: tuple[tuple[int, int], ...]

    def to_dict(self) -> dict:
        return {
            "j_max": self.j_max,
            "avg_cor": list(self.avg_cor),
            "excluded": self.excluded,
            "pairs": [list(p) for p in self.pairs],
        }


@dataclass(frozen=True)
class LineFit:
    """Least-squares line m = slope * col + intercept through midline points."""

    slope: float
    intercept: float
    r2: float


@dataclass(frozen=True)
class RigidTransform:
    """Rotation by theta about the frame center, then translation.

    Angles are in radians, wrapped to (-pi, pi]. s_x shifts along
    columns, s_y along the upward y axis (positive moves content toward
    smaller row indices).
    """

    theta: float
    s_x: float
    s_y: float
    interp: Interp = "bilinear"

    def __post_init__(self):
        t = math.remainder(self.theta, 2 * math.pi)
        if t <= -math.pi:
            t += 2 * math.pi
        object.__setattr__(self, "theta", t)

    def to_dict(self) -> dict:
        return {"theta": self.theta, "s_x": self.s_x, "s_y": self.s_y}

    # -- point maps ------------------------------------------------------

    def _center(self, shape: tuple[int, int]) -> tuple[float, float]:
        rows, cols = shape
        return (cols - 1) / 2.0, (rows - 1) / 2.0

    def apply_xy(self, x, y, shape: tuple[int, int]):
        cx, cy = self._center(shape)
        c, s = math.cos(self.theta), math.sin(self.theta)
        dx, dy = np.asarray(x) - cx, np.asarray(y) - cy
        return (
            c * dx - s * dy + cx + self.s_x,
            s * dx + c * dy + cy + self.s_y,
        )

    def invert_xy(self, x, y, shape: tuple[int, int]):
        cx, cy = self._center(shape)
        c, s = math.cos(self.theta), math.sin(self.theta)
        dx = np.asarray(x) - cx - self.s_x
        dy = np.asarray(y) - cy - self.s_y
        return c * dx + s * dy + cx, -s * dx + c * dy + cy

    def apply_point(self, p: PixelCoord, shape: tuple[int, int]) -> PixelCoord:
        rows = shape[0]
        x, y = self.apply_xy(p.col, (rows - 1) - p.row, shape)
        return PixelCoord(row=float((rows - 1) - y), col=float(x))


def pearson(a: Frame | NDArray, b: Frame | NDArray) -> float:
    """Pearson correlation over all pixels; 0 when either side is constant."""
    x = (a.values if isinstance(a, Frame) else np.asarray(a)).ravel()
    y = (b.values if isinstance(b, Frame) else np.asarray(b)).ravel()
    if x.shape != y.shape:
        raise InputError("frames must have the same shape")
    xc = x - x.mean()
    yc = y - y.mean()
    vx = float(xc @ xc)
    vy = float(yc @ yc)
    if vx == 0.0 or vy == 0.0:
        warnings.warn("zero variance in correlation; returning 0", stacklevel=2)
        return 0.0
    return float((xc @ yc) / math.sqrt(vx * vy))


def head_exclusion(frame_count: int) -> int:
    """Unstable startup frames to drop: 5 or 5 percent, whichever is more."""
    return max(5, math.ceil(0.05 * frame_count))


def temporal_align(seq1: Sequence, seq2: Sequence) -> TemporalAlignment:
    """Find the lag j that maximizes average frame correlation.

    Both sequences first lose the same number of startup frames. For
    each lag j the score is mean(cor(S1_i, S2_{i+j})) over the n-j
    overlapping pairs; the smallest maximizing j wins. Index pairs in
    the result refer to post-exclusion positions.
    """
    if seq1.frame_shape != seq2.frame_shape:
        raise InputError("sequences must share frame shape")
    count = min(seq1.frame_count, seq2.frame_count)
    excluded = head_exclusion(count)
    n = count - excluded
    if n <= 1:
        raise TooShort(
            f"{n} frames remain after excluding {excluded}; need at least 2"
        )
    s1 = [f.values for f in seq1.frames[excluded:count]]
    s2 = [f.values for f in seq2.frames[excluded:count]]

    avg = []
    for j in range(n):
        cors = [pearson(s1[i], s2[i + j]) for i in range(n - j)]
        avg.append(float(np.mean(cors)))
    j_max = int(np.argmax(avg))
    if j_max > n / 2:
        warnings.warn(
            f"best lag {j_max} overlaps fewer than half the frames", stacklevel=2
        )
    pairs = tuple((i, i + j_max) for i in range(n - j_max))
    return TemporalAlignment(
        j_max=j_max, avg_cor=tuple(avg), excluded=excluded, pairs=pairs
    )


def midline(frame: Frame) -> LineFit:
    """Fit a line through per-column content midpoints.

    For each column holding any nonzero pixel the midpoint statistic is
    m_c = r/2 + (u - l)/2 with u the nonzero count in the top half of
    the column and l in the bottom half (the middle row of an odd-height
    frame belongs to neither). Columns without content are skipped;
    fewer than two usable columns raise NoContent.
    """
    v = frame.values
    rows = v.shape[0]
    half = rows // 2
    nz = v != 0.0
    u = nz[:half, :].sum(axis=0)
    l = nz[rows - half :, :].sum(axis=0)
    usable = nz.any(axis=0)
    cols = np.nonzero(usable)[0]
    if cols.size < 2:
        raise NoContent(f"only {cols.size} columns contain nonzero pixels")
    m = rows / 2.0 + (u[cols] - l[cols]) / 2.0
    slope, intercept = np.polyfit(cols, m, 1)
    fitted = slope * cols + intercept
    ss_res = float(((m - fitted) ** 2).sum())
    ss_tot = float(((m - m.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return LineFit(slope=float(slope), intercept=float(intercept), r2=r2)


def transform_from_midline(
    fit: LineFit, shape: tuple[int, int], interp: Interp = "bilinear"
) -> RigidTransform:
    """Rigid transform that lays the fitted midline on the center row.

    Rotation by -atan(slope) levels the line; the translation then pins
    the midline point at the center column to height r/2.
    """
    rows, cols = shape
    theta = -math.atan(fit.slope)
    xc = (cols - 1) / 2.0
    probe = RigidTransform(theta=theta, s_x=0.0, s_y=0.0, interp=interp)
    px, py = probe.apply_xy(xc, fit.slope * xc + fit.intercept, shape)
    return RigidTransform(
        theta=theta, s_x=xc - px, s_y=rows / 2.0 - py, interp=interp
    )


def transform_from_points(
    p1: PixelCoord,
    p2: PixelCoord,
    shape: tuple[int, int],
    interp: Interp = "bilinear",
) -> RigidTransform:
    """Rigid transform sending p1 to the anchor and p1->p2 to +col.

    The anchor is (floor(r/2), 4) in (row, col). The translation is
    refined so that the mapped p1 equals the anchor exactly, not merely
    to rounding error.
    """
    rows, cols = shape
    dx = p2.col - p1.col
    dy = p1.row - p2.row  # upward
    if dx == 0.0 and dy == 0.0:
        raise CoincidentPoints("registration points must differ")
    theta = -math.atan2(dy, dx)
    anchor = PixelCoord(row=float(rows // 2), col=float(ANCHOR_COL))
    probe = RigidTransform(theta=theta, s_x=0.0, s_y=0.0, interp=interp)
    px, py = probe.apply_xy(p1.col, (rows - 1) - p1.row, shape)
    t = RigidTransform(
        theta=theta,
        s_x=anchor.col - px,
        s_y=((rows - 1) - anchor.row) - py,
        interp=interp,
    )
    for _ in range(3):
        got = t.apply_point(p1, shape)
        if got == anchor:
            break
        t = RigidTransform(
            theta=theta,
            s_x=t.s_x + (anchor.col - got.col),
            s_y=t.s_y + (got.row - anchor.row),
            interp=interp,
        )
    return t


def warp(frame: Frame, transform: RigidTransform) -> Frame:
    """Resample a frame under a rigid transform.

    Every output pixel reads the input at the inverse-transformed
    location; samples falling outside the frame are zero. Interpolation
    is bilinear or nearest per the transform.
    """
    v = frame.values
    rows, cols = v.shape
    jj, ii = np.meshgrid(np.arange(cols), np.arange(rows))
    x, y = transform.invert_xy(jj, (rows - 1) - ii, v.shape)
    sc = x
    sr = (rows - 1) - y

    if transform.interp == "nearest":
        r = np.rint(sr).astype(int)
        c = np.rint(sc).astype(int)
        ok = (r >= 0) & (r < rows) & (c >= 0) & (c < cols)
        out = np.zeros_like(v)
        out[ok] = v[r[ok], c[ok]]
        return Frame(out)

    r0 = np.floor(sr).astype(int)
    c0 = np.floor(sc).astype(int)
    fr = sr - r0
    fc = sc - c0
    out = np.zeros_like(v)
    for dr, dc, wgt in (
        (0, 0, (1 - fr) * (1 - fc)),
        (0, 1, (1 - fr) * fc),
        (1, 0, fr * (1 - fc)),
        (1, 1, fr * fc),
    ):
        rr, cc = r0 + dr, c0 + dc
        ok = (rr >= 0) & (rr < rows) & (cc >= 0) & (cc < cols)
        out[ok] += wgt[ok] * v[rr[ok], cc[ok]]
    return Frame(out)


def crop_roi(frame: Frame, roi: RectROI) -> Frame:
    """Extract the ROI submatrix; the ROI must lie inside the frame."""
    if roi.row0 + roi.height > frame.rows or roi.col0 + roi.width > frame.cols:
        raise OutOfBounds(
            f"ROI {roi} exceeds frame of shape {frame.shape}"
        )
    return Frame(
        frame.values[
            roi.row0 : roi.row0 + roi.height, roi.col0 : roi.col0 + roi.width
        ]
    )


def polygon_mask(shape: tuple[int, int], polygon: PolygonROI) -> NDArray[np.bool_]:
    """Boolean inside-mask for pixel centers under the even-odd rule.

    A pixel center lying exactly on a polygon edge counts as inside.
    """
    rows, cols = shape
    vr = np.array([p.row for p in polygon.vertices])
    vc = np.array([p.col for p in polygon.vertices])
    jj, ii = np.meshgrid(np.arange(cols, dtype=float), np.arange(rows, dtype=float))
    px = jj.ravel()
    py = ii.ravel()

    inside = np.zeros(px.size, dtype=bool)
    boundary = np.zeros(px.size, dtype=bool)
    n = len(vr)
    for k in range(n):
        r1, c1 = vr[k], vc[k]
        r2, c2 = vr[(k + 1) % n], vc[(k + 1) % n]
        # Even-odd ray cast: horizontal ray toward +col.
        crosses = (r1 > py) != (r2 > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = np.where(crosses, c1 + (py - r1) * (c2 - c1) / (r2 - r1), np.inf)
        inside ^= crosses & (px < xint)
        # Exact on-segment test.
        cross = (c2 - c1) * (py - r1) - (r2 - r1) * (px - c1)
        within = (
            (np.minimum(r1, r2) <= py)
            & (py <= np.maximum(r1, r2))
            & (np.minimum(c1, c2) <= px)
            & (px <= np.maximum(c1, c2))
        )
        boundary |= (cross == 0.0) & within
    return (inside | boundary).reshape(rows, cols)


def mask_polygon(frame: Frame, polygon: PolygonROI) -> Frame:
    """Zero every pixel whose center falls outside the polygon."""
    keep = polygon_mask(frame.shape, polygon)
    return Frame(np.where(keep, frame.values, 0.0))
