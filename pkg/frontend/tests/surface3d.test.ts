import { describe, expect, it } from 'vitest';
import type { SurfacePayload } from '../src/api.js';
import { defaultCamera, fitZoom, heightScaleFor, orbit, project, zoomBy } from '../src/surface3d.js';

const flatCam = { yaw: 0, pitch: 0, zoom: 2 };
const grid = { rows: 5, cols: 9, range: [0, 1] as [number, number] };

describe('project', () => {
  it('centers the grid', () => {
    const p = project(2, 4, 0, grid, flatCam, 1);
    expect(p.x).toBe(0);
    expect(p.y).toBe(-0);
  });

  it('maps columns to x at zero yaw', () => {
    expect(project(2, 8, 0, grid, flatCam, 1).x).toBe(8); // (8-4) * zoom 2
    expect(project(2, 0, 0, grid, flatCam, 1).x).toBe(-8);
  });

  it('raises higher values upward on the canvas', () => {
    const lo = project(2, 4, 0, grid, flatCam, 3);
    const hi = project(2, 4, 1, grid, flatCam, 3);
    expect(hi.y).toBeLessThan(lo.y);
  });

  it('row depth orders quads at zero yaw and pitch', () => {
    const near = project(0, 4, 0, grid, flatCam, 1);
    const far = project(4, 4, 0, grid, flatCam, 1);
    expect(far.depth).toBeGreaterThan(near.depth);
  });

  it('a quarter-turn yaw swaps columns into depth', () => {
    const cam = { ...flatCam, yaw: Math.PI / 2 };
    const p = project(2, 8, 0, grid, cam, 1);
    expect(p.x).toBeCloseTo(0, 10);
    expect(p.depth).toBeCloseTo(4, 10);
  });
});

describe('camera', () => {
  it('orbit clamps the pitch short of the poles', () => {
    let cam = defaultCamera;
    for (let i = 0; i < 100; i++) cam = orbit(cam, 0, 0.5);
    expect(cam.pitch).toBeLessThan(Math.PI / 2);
    for (let i = 0; i < 200; i++) cam = orbit(cam, 0, -0.5);
    expect(cam.pitch).toBeGreaterThan(-Math.PI / 2);
  });

  it('zoom multiplies and clamps', () => {
    expect(zoomBy({ ...flatCam, zoom: 4 }, 1.5).zoom).toBe(6);
    expect(zoomBy({ ...flatCam, zoom: 60 }, 10).zoom).toBe(64);
    expect(zoomBy({ ...flatCam, zoom: 0.1 }, 0.001).zoom).toBe(0.05);
  });
});

describe('height field scaling', () => {
  const surface: SurfacePayload = {
    rows: 4,
    cols: 4,
    values: new Array(16).fill(0),
    range: [0, 0],
  };

  it('degenerates to a flat sheet when the range is empty', () => {
    expect(heightScaleFor(surface)).toBe(0);
  });

  it('scales peaks to a fraction of the grid extent', () => {
    const s = heightScaleFor({ ...surface, range: [0, 2] });
    expect(s * 2).toBeCloseTo(0.35 * 4, 10);
  });

  it('fitZoom shrinks large grids into the viewport', () => {
    const z = fitZoom({ ...surface, rows: 100, cols: 100 }, 400, 400);
    expect(z * 100 * 1.7).toBeLessThanOrEqual(400 + 1e-9);
  });
});
