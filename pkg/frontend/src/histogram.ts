// Threshold picking on the intensity histogram. A click on the x axis
// maps back to a data value; the preview dims pixels strictly below the
// pick so the user sees what segmentation will drop.

import type { HistogramResponse } from './api.js';

export interface HistogramLayout {
  width: number; // plot width in css pixels
  height: number;
}

/** Data value under a click at x in [0, width). */
export function clickToValue(x: number, hist: HistogramResponse, layout: HistogramLayout): number {
  const edges = hist.bin_edges;
  const lo = edges[0];
  const hi = edges[edges.length - 1];
  const f = Math.min(1, Math.max(0, x / layout.width));
  return lo + f * (hi - lo);
}

/** x position of a data value, inverse of clickToValue. */
export function valueToX(v: number, hist: HistogramResponse, layout: HistogramLayout): number {
  const edges = hist.bin_edges;
  const lo = edges[0];
  const hi = edges[edges.length - 1];
  if (hi === lo) return 0;
  return ((v - lo) / (hi - lo)) * layout.width;
}

/** Snap a value to the nearest bin edge; one bin is the pick resolution. */
export function snapToEdge(v: number, hist: HistogramResponse): number {
  let best = hist.bin_edges[0];
  let dist = Math.abs(v - best);
  for (const e of hist.bin_edges) {
    const d = Math.abs(v - e);
    if (d < dist) {
      dist = d;
      best = e;
    }
  }
  return best;
}

/** Count of pixels in bins entirely below a cutoff placed on an edge. */
export function countsBelowEdge(cutoffEdge: number, hist: HistogramResponse): number {
  let total = 0;
  for (let i = 0; i < hist.counts.length; i++) {
    if (hist.bin_edges[i + 1] <= cutoffEdge) total += hist.counts[i];
  }
  return total;
}

/** Bar heights normalized to [0, 1] for drawing. */
export function barHeights(hist: HistogramResponse): number[] {
  let max = 0;
  for (const c of hist.counts) max = Math.max(max, c);
  if (max === 0) return hist.counts.map(() => 0);
  return hist.counts.map((c) => c / max);
}
