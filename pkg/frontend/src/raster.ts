// Canvas helpers shared by the frame views: draw a raster with integer
// zoom, and translate mouse events back into frame pixels.

import type { RasterFrame } from './scan.js';
import { autoRange, renderRgb } from './colormap.js';

/** Integer zoom that fits a frame into a pixel budget, at least 1. */
export function fitScale(rows: number, cols: number, maxSide = 480): number {
  return Math.max(1, Math.floor(maxSide / Math.max(rows, cols)));
}

export function drawRgb(
  canvas: HTMLCanvasElement,
  rgb: Uint8ClampedArray,
  rows: number,
  cols: number,
  scale: number,
): void {
  canvas.width = cols * scale;
  canvas.height = rows * scale;
  const ctx = canvas.getContext('2d')!;
  const img = ctx.createImageData(cols, rows);
  for (let i = 0; i < rows * cols; i++) {
    img.data[4 * i] = rgb[3 * i];
    img.data[4 * i + 1] = rgb[3 * i + 1];
    img.data[4 * i + 2] = rgb[3 * i + 2];
    img.data[4 * i + 3] = 255;
  }
  const off = document.createElement('canvas');
  off.width = cols;
  off.height = rows;
  off.getContext('2d')!.putImageData(img, 0, 0);
  ctx.imageSmoothingEnabled = false;
  ctx.drawImage(off, 0, 0, cols * scale, rows * scale);
}

export function drawFrame(
  canvas: HTMLCanvasElement,
  frame: RasterFrame,
  scale: number,
  dimBelow?: number,
): void {
  const range = autoRange([frame.values], 'sequential');
  const rgb = renderRgb(frame.values, 'sequential', range);
  if (dimBelow !== undefined) {
    for (let i = 0; i < frame.values.length; i++) {
      if (frame.values[i] < dimBelow) {
        rgb[3 * i] = Math.floor(rgb[3 * i] / 4);
        rgb[3 * i + 1] = Math.floor(rgb[3 * i + 1] / 4);
        rgb[3 * i + 2] = Math.floor(rgb[3 * i + 2] / 4) + 60;
      }
    }
  }
  drawRgb(canvas, rgb, frame.rows, frame.cols, scale);
}

/** Mouse event to fractional frame coordinates (row, col). */
export function eventToFrame(
  canvas: HTMLCanvasElement,
  ev: MouseEvent,
  scale: number,
): { row: number; col: number } {
  const rect = canvas.getBoundingClientRect();
  return {
    row: (ev.clientY - rect.top) / scale,
    col: (ev.clientX - rect.left) / scale,
  };
}
