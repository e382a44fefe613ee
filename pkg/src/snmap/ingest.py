"""CSV ingestion for the three frame layouts found in the wild.

A sequence file is a plain CSV in one of three shapes:

* ``row``   -- each frame is announced by a marker line whose first cell
  equals a known identifier; the next ``nrow`` lines are the frame body.
* ``col``   -- every data line carries an integer frame id in a fixed
  column; lines are grouped by id, ids ordered by first appearance.
* ``blank`` -- a fully empty line precedes each frame body.

Values are written back with 17 significant digits so that a
scan -> export -> scan cycle reproduces float64 values bit for bit.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Literal

import numpy as np

from .core import Frame, Sequence
from .exceptions import InputError, NoFramesFound, ParseError, TruncatedFrame

ScanMode = Literal["row", "col", "blank"]

# Shortest text that still round-trips any finite float64.
_FLOAT_FMT = "%.17g"


@dataclass(frozen=True)
class ScanSpec:
    """Everything needed to locate frames inside a CSV file."""

    mode: ScanMode
    nframe: int
    nrow: int
    ncol: int
    row_id: str = ""
    col_id: int = 1

    def __post_init__(self):
        if self.mode not in ("row", "col", "blank"):
            raise InputError(f"unknown scan mode {self.mode!r}")
        for name in ("nframe", "nrow", "ncol"):
            if getattr(self, name) < 1:
                raise InputError(f"{name} must be a positive integer")
        if self.mode == "row" and not self.row_id:
            raise InputError("row mode needs a row_id")
        if self.mode == "col" and self.col_id < 1:
            raise InputError("col_id is 1-based and must be >= 1")


def _read_lines(path) -> list[list[str]]:
    """Read a CSV as lists of trimmed cells, tolerant of CRLF and BOM."""
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return _split_lines(text)


def _split_lines(text: str) -> list[list[str]]:
    if text.startswith("﻿"):
        text = text[1:]
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    return [[cell.strip() for cell in ln.rstrip("\r").split(",")] for ln in lines]


def _parse_cell(cell: str, line_no: int, col_no: int) -> float:
    if cell == "":
        raise ParseError("empty cell in frame body", line_no, col_no)
    try:
        return float(cell)
    except ValueError:
        raise ParseError(f"not a number: {cell!r}", line_no, col_no) from None


def _parse_row(cells: list[str], ncol: int, line_no: int) -> list[float]:
    if len(cells) < ncol:
        raise ParseError(
            f"row has {len(cells)} cells, needs {ncol}", line_no, len(cells) + 1
        )
    return [_parse_cell(cells[c], line_no, c + 1) for c in range(ncol)]


def _is_blank(cells: list[str]) -> bool:
    return all(cell == "" for cell in cells)


def _frames_row_mode(lines, spec: ScanSpec) -> list[np.ndarray]:
    frames = []
    i = 0
    while i < len(lines):
        if lines[i] and lines[i][0] == spec.row_id:
            body = lines[i + 1 : i + 1 + spec.nrow]
            if len(body) < spec.nrow:
                raise TruncatedFrame(
                    f"frame needs {spec.nrow} rows, file ended after {len(body)}",
                    line=i + 1,
                )
            rows = [
                _parse_row(cells, spec.ncol, i + 2 + k)
                for k, cells in enumerate(body)
            ]
            frames.append(np.array(rows))
            i += 1 + spec.nrow
        else:
            i += 1
    return frames


def _frames_col_mode(lines, spec: ScanSpec) -> list[np.ndarray]:
    # Group data lines by the integer in the id column; anything without
    # an integer there is treated as header/noise and skipped.
    groups: dict[int, list[float]] = {}
    order: list[int] = []
    idx = spec.col_id - 1
    for line_no, cells in enumerate(lines, start=1):
        if len(cells) <= idx:
            continue
        raw = cells[idx]
        try:
            frame_id = int(raw)
        except ValueError:
            continue
        rest = cells[:idx] + cells[idx + 1 :]
        if frame_id not in groups:
            groups[frame_id] = []
            order.append(frame_id)
        vals = groups[frame_id]
        for k, cell in enumerate(rest):
            col_no = k + 1 if k < idx else k + 2
            if len(vals) < spec.nrow * spec.ncol:
                vals.append(_parse_cell(cell, line_no, col_no))
    frames = []
    for frame_id in order:
        vals = groups[frame_id]
        if len(vals) < spec.nrow * spec.ncol:
            raise TruncatedFrame(
                f"frame id {frame_id} has {len(vals)} cells, "
                f"needs {spec.nrow * spec.ncol}",
                line=0,
            )
        frames.append(np.array(vals).reshape(spec.nrow, spec.ncol))
    return frames


def _frames_blank_mode(lines, spec: ScanSpec) -> list[np.ndarray]:
    frames = []
    i = 0
    while i < len(lines):
        if _is_blank(lines[i]):
            # A frame starts at a blank line directly followed by data;
            # runs of blanks and a trailing blank are not frame starts.
            if i + 1 >= len(lines) or _is_blank(lines[i + 1]):
                i += 1
                continue
            body = lines[i + 1 : i + 1 + spec.nrow]
            if len(body) < spec.nrow:
                raise TruncatedFrame(
                    f"frame needs {spec.nrow} rows, file ended after {len(body)}",
                    line=i + 1,
                )
            rows = [
                _parse_row(cells, spec.ncol, i + 2 + k)
                for k, cells in enumerate(body)
            ]
            frames.append(np.array(rows))
            i += 1 + spec.nrow
        else:
            i += 1
    return frames


def scan_sequence(path, spec: ScanSpec, label: str = "seq1") -> Sequence:
    """Extract frames from ``path`` according to ``spec``.

    Returns min(spec.nframe, frames found) frames; a count mismatch in
    either direction is reported as a warning, an empty scan raises
    NoFramesFound.
    """
    lines = _read_lines(path)
    return _scan_lines(lines, spec, source=str(path), label=label)


def scan_text(text: str, spec: ScanSpec, label: str = "seq1") -> Sequence:
    """Like scan_sequence but for CSV content already in memory."""
    return _scan_lines(_split_lines(text), spec, source="<text>", label=label)


def _scan_lines(lines, spec: ScanSpec, source: str, label: str) -> Sequence:
    if spec.mode == "row":
        arrays = _frames_row_mode(lines, spec)
    elif spec.mode == "col":
        arrays = _frames_col_mode(lines, spec)
    else:
        arrays = _frames_blank_mode(lines, spec)

    if not arrays:
        raise NoFramesFound(f"no frames found in {source} with mode={spec.mode!r}")
    if len(arrays) > spec.nframe:
        warnings.warn(
            f"{source}: found {len(arrays)} frames, keeping first {spec.nframe}",
            stacklevel=3,
        )
        arrays = arrays[: spec.nframe]
    elif len(arrays) < spec.nframe:
        warnings.warn(
            f"{source}: expected {spec.nframe} frames, found {len(arrays)}",
            stacklevel=3,
        )
    return Sequence([Frame(a) for a in arrays], source=source, label=label)


def _fmt(x: float) -> str:
    return _FLOAT_FMT % x


def export_sequence(
    path,
    seq: Sequence | Iterable[Frame],
    mode: ScanMode = "blank",
    row_id: str = "FRAME",
    col_id: int = 1,
) -> None:
    """Write frames back to CSV in any of the three scan layouts.

    The default blank layout is the debug format: one empty line, then
    the frame body, repeated.
    """
    frames = list(seq.frames if isinstance(seq, Sequence) else seq)
    out: list[str] = []
    for k, frame in enumerate(frames):
        body = [",".join(_fmt(v) for v in row) for row in frame.values]
        if mode == "blank":
            out.append("")
            out.extend(body)
        elif mode == "row":
            out.append(row_id)
            out.extend(body)
        elif mode == "col":
            for line in body:
                cells = line.split(",")
                cells.insert(col_id - 1, str(k + 1))
                out.append(",".join(cells))
        else:
            raise InputError(f"unknown export mode {mode!r}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
