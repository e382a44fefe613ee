// Client-side decode of the CSV the user is about to upload, so the ROI
// and registration views can draw the frames without a raster endpoint.
// Mirrors the server's three layouts; keeps the first nframe frames.

import type { ScanParams } from './api.js';

export interface RasterFrame {
  rows: number;
  cols: number;
  values: Float64Array; // row-major
}

function splitLines(text: string): string[][] {
  const lines = text.split('\n');
  if (lines.length && lines[lines.length - 1] === '') lines.pop();
  return lines.map((ln) => ln.replace(/\r$/, '').split(',').map((c) => c.trim()));
}

function isBlank(cells: string[]): boolean {
  return cells.every((c) => c === '');
}

function parseBody(lines: string[][], start: number, nrow: number, ncol: number): RasterFrame {
  const values = new Float64Array(nrow * ncol);
  for (let r = 0; r < nrow; r++) {
    const cells = lines[start + r];
    if (!cells || cells.length < ncol) {
      throw new Error(`frame row ${r + 1} has too few cells`);
    }
    for (let c = 0; c < ncol; c++) {
      const v = Number(cells[c]);
      if (cells[c] === '' || Number.isNaN(v)) {
        throw new Error(`not a number at line ${start + r + 1}: ${cells[c]}`);
      }
      values[r * ncol + c] = v;
    }
  }
  return { rows: nrow, cols: ncol, values };
}

export function scanCsv(text: string, spec: ScanParams): RasterFrame[] {
  const lines = splitLines(text);
  const frames: RasterFrame[] = [];

  if (spec.mode === 'blank') {
    let i = 0;
    while (i < lines.length) {
      if (isBlank(lines[i]) && i + 1 < lines.length && !isBlank(lines[i + 1])) {
        frames.push(parseBody(lines, i + 1, spec.nrow, spec.ncol));
        i += 1 + spec.nrow;
      } else {
        i += 1;
      }
    }
  } else if (spec.mode === 'row') {
    let i = 0;
    while (i < lines.length) {
      if (lines[i].length && lines[i][0] === (spec.row_id ?? '')) {
        frames.push(parseBody(lines, i + 1, spec.nrow, spec.ncol));
        i += 1 + spec.nrow;
      } else {
        i += 1;
      }
    }
  } else {
    const idx = (spec.col_id ?? 1) - 1;
    const groups = new Map<number, number[]>();
    const order: number[] = [];
    for (const cells of lines) {
      if (cells.length <= idx) continue;
      const id = Number(cells[idx]);
      if (!Number.isInteger(id) || cells[idx] === '') continue;
      let vals = groups.get(id);
      if (!vals) {
        vals = [];
        groups.set(id, vals);
        order.push(id);
      }
      const rest = cells.slice(0, idx).concat(cells.slice(idx + 1));
      for (const cell of rest) {
        if (vals.length >= spec.nrow * spec.ncol) break;
        const v = Number(cell);
        if (cell === '' || Number.isNaN(v)) throw new Error(`not a number: ${cell}`);
        vals.push(v);
      }
    }
    for (const id of order) {
      const vals = groups.get(id)!;
      if (vals.length < spec.nrow * spec.ncol) {
        throw new Error(`frame id ${id} is truncated`);
      }
      frames.push({ rows: spec.nrow, cols: spec.ncol, values: Float64Array.from(vals) });
    }
  }

  if (!frames.length) throw new Error(`no frames found with mode=${spec.mode}`);
  return frames.slice(0, spec.nframe);
}

/** Slice a sub-rectangle out of a frame, same semantics as the server crop. */
export function cropFrame(frame: RasterFrame, rect: { row0: number; col0: number; height: number; width: number }): RasterFrame {
  const values = new Float64Array(rect.height * rect.width);
  for (let r = 0; r < rect.height; r++) {
    for (let c = 0; c < rect.width; c++) {
      values[r * rect.width + c] = frame.values[(rect.row0 + r) * frame.cols + (rect.col0 + c)];
    }
  }
  return { rows: rect.height, cols: rect.width, values };
}

/** Pixels at or below the cutoff are background after segmentation. */
export function countBelow(frame: RasterFrame, cutoff: number): number {
  let n = 0;
  for (let i = 0; i < frame.values.length; i++) {
    if (frame.values[i] < cutoff) n++;
  }
  return n;
}
