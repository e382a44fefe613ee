// Software-projected 3D view of the P-map height field. An orthographic
// camera orbits the grid center; quads are painted back to front. Small
// grids only, so canvas 2D is plenty.

import type { SurfacePayload } from './api.js';
import { rgbFor } from './colormap.js';

export interface Camera {
  yaw: number; // radians around the vertical axis
  pitch: number; // radians above the horizon
  zoom: number; // pixels per grid unit
}

export const defaultCamera: Camera = { yaw: -0.7, pitch: 0.5, zoom: 1 };

export function orbit(cam: Camera, dYaw: number, dPitch: number): Camera {
  const maxPitch = Math.PI / 2 - 0.01;
  return {
    ...cam,
    yaw: cam.yaw + dYaw,
    pitch: Math.min(maxPitch, Math.max(-maxPitch, cam.pitch + dPitch)),
  };
}

export function zoomBy(cam: Camera, factor: number): Camera {
  return { ...cam, zoom: Math.min(64, Math.max(0.05, cam.zoom * factor)) };
}

export interface Projected {
  x: number;
  y: number;
  depth: number;
}

/**
 * Project grid point (row, col, value). The grid is centered, value is
 * the vertical axis, and y grows downward as on a canvas.
 */
export function project(
  row: number,
  col: number,
  value: number,
  surface: { rows: number; cols: number; range: [number, number] },
  cam: Camera,
  heightScale: number,
): Projected {
  const cx = (surface.cols - 1) / 2;
  const cy = (surface.rows - 1) / 2;
  const x0 = col - cx;
  const z0 = row - cy;
  const y0 = (value - surface.range[0]) * heightScale;

  const cosY = Math.cos(cam.yaw);
  const sinY = Math.sin(cam.yaw);
  const x1 = x0 * cosY - z0 * sinY;
  const z1 = x0 * sinY + z0 * cosY;

  const cosP = Math.cos(cam.pitch);
  const sinP = Math.sin(cam.pitch);
  const y2 = y0 * cosP - z1 * sinP;
  const z2 = y0 * sinP + z1 * cosP;

  return { x: x1 * cam.zoom, y: -y2 * cam.zoom, depth: z2 };
}

interface Quad {
  xs: [number, number, number, number];
  ys: [number, number, number, number];
  depth: number;
  fill: string;
}

/** Vertical span of the surface in grid units, used to scale heights. */
export function heightScaleFor(surface: SurfacePayload): number {
  const span = surface.range[1] - surface.range[0];
  const extent = Math.max(surface.rows, surface.cols);
  return span > 0 ? (0.35 * extent) / span : 0;
}

export function drawSurface(
  ctx: CanvasRenderingContext2D,
  surface: SurfacePayload,
  cam: Camera,
  width: number,
  height: number,
): void {
  const hs = heightScaleFor(surface);
  const pts: Projected[] = new Array(surface.rows * surface.cols);
  for (let r = 0; r < surface.rows; r++) {
    for (let c = 0; c < surface.cols; c++) {
      pts[r * surface.cols + c] = project(r, c, surface.values[r * surface.cols + c], surface, cam, hs);
    }
  }

  const quads: Quad[] = [];
  for (let r = 0; r < surface.rows - 1; r++) {
    for (let c = 0; c < surface.cols - 1; c++) {
      const i00 = r * surface.cols + c;
      const i01 = i00 + 1;
      const i10 = i00 + surface.cols;
      const i11 = i10 + 1;
      const v =
        (surface.values[i00] + surface.values[i01] + surface.values[i10] + surface.values[i11]) / 4;
      const [red, green, blue] = rgbFor(v, 'sequential', {
        lo: surface.range[0],
        hi: surface.range[1] > surface.range[0] ? surface.range[1] : surface.range[0] + 1,
      });
      quads.push({
        xs: [pts[i00].x, pts[i01].x, pts[i11].x, pts[i10].x],
        ys: [pts[i00].y, pts[i01].y, pts[i11].y, pts[i10].y],
        depth: (pts[i00].depth + pts[i01].depth + pts[i10].depth + pts[i11].depth) / 4,
        fill: `rgb(${red},${green},${blue})`,
      });
    }
  }
  quads.sort((a, b) => a.depth - b.depth);

  ctx.clearRect(0, 0, width, height);
  ctx.save();
  ctx.translate(width / 2, height / 2);
  ctx.lineWidth = 0.5;
  ctx.strokeStyle = 'rgba(60,60,60,0.35)';
  for (const q of quads) {
    ctx.beginPath();
    ctx.moveTo(q.xs[0], q.ys[0]);
    for (let k = 1; k < 4; k++) ctx.lineTo(q.xs[k], q.ys[k]);
    ctx.closePath();
    ctx.fillStyle = q.fill;
    ctx.fill();
    ctx.stroke();
  }
  ctx.restore();
}

/** Zoom that fits the whole grid into a width x height viewport. */
export function fitZoom(surface: SurfacePayload, width: number, height: number): number {
  const extent = Math.max(surface.rows, surface.cols) * 1.7;
  return Math.min(width, height) / extent;
}
