// Rectangle selection by mouse drag over a frame raster. Coordinates
// are frame pixels (row, col); the view converts from canvas space.

import type { Rect } from './api.js';

export interface DragState {
  startRow: number;
  startCol: number;
  row: number;
  col: number;
}

function clampInt(x: number, lo: number, hi: number): number {
  return Math.min(hi, Math.max(lo, Math.round(x)));
}

/** Begin a drag at a frame-space position, clamped into the frame. */
export function dragStart(row: number, col: number, rows: number, cols: number): DragState {
  const r = clampInt(row, 0, rows - 1);
  const c = clampInt(col, 0, cols - 1);
  return { startRow: r, startCol: c, row: r, col: c };
}

/** Move the free corner; positions outside the frame are clamped. */
export function dragMove(drag: DragState, row: number, col: number, rows: number, cols: number): DragState {
  return {
    ...drag,
    row: clampInt(row, 0, rows - 1),
    col: clampInt(col, 0, cols - 1),
  };
}

/** The inclusive-corner rectangle covered by the drag, always >= 1x1. */
export function dragRect(drag: DragState): Rect {
  const row0 = Math.min(drag.startRow, drag.row);
  const col0 = Math.min(drag.startCol, drag.col);
  return {
    row0,
    col0,
    height: Math.abs(drag.row - drag.startRow) + 1,
    width: Math.abs(drag.col - drag.startCol) + 1,
  };
}

export function fullFrameRect(rows: number, cols: number): Rect {
  return { row0: 0, col0: 0, height: rows, width: cols };
}

export function rectIsFullFrame(rect: Rect, rows: number, cols: number): boolean {
  return rect.row0 === 0 && rect.col0 === 0 && rect.height === rows && rect.width === cols;
}
