// End-to-end checks against the real API server: every selection the UI
// sends must round-trip unchanged, the reject path must surface the
// server's suggestions, and client-side playback must reproduce the
// movie pixels the server encodes.

import { spawn, type ChildProcess } from 'node:child_process';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';
import { Client, decodeF32, type HistogramResponse } from '../src/api.js';
import { countBelow, cropFrame, scanCsv, type RasterFrame } from '../src/scan.js';
import { countsBelowEdge } from '../src/histogram.js';
import { previewTheta, registrationPoints } from '../src/points.js';
import { frameRgb, initialPlayer, type MapStack } from '../src/player.js';
import { decodeFirstFrame } from './gif.js';

const PORT = 8620 + (process.pid % 177);
const BASE = `http://127.0.0.1:${PORT}`;
const ROWS = 24;
const COLS = 28;
const NFRAME = 12;
const SCAN = { mode: 'blank' as const, nframe: NFRAME, nrow: ROWS, ncol: COLS };

let server: ChildProcess;
const api = new Client(BASE);

// Deterministic synthetic data: a bright ellipse on a dim noisy floor.
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

function gauss(rng: () => number): number {
  const u = Math.max(rng(), 1e-12);
  return Math.sqrt(-2 * Math.log(u)) * Math.cos(2 * Math.PI * rng());
}

function blobCsv(seed: number): string {
  const rng = mulberry32(seed);
  const lines: string[] = [];
  for (let k = 0; k < NFRAME; k++) {
    // the blob drifts downward over time in both sequences, so frame k
    // of one matches frame k of the other and the best lag is zero
    const center = 8 + 0.7 * k;
    lines.push('');
    for (let r = 0; r < ROWS; r++) {
      const cells: string[] = [];
      for (let c = 0; c < COLS; c++) {
        const inBlob = ((r - center) / 5) ** 2 + ((c - 14) / 9) ** 2 <= 1;
        const v = (inBlob ? 10 : 0) + 0.5 * gauss(rng);
        cells.push(String(v));
      }
      lines.push(cells.join(','));
    }
  }
  return lines.join('\n') + '\n';
}

async function waitForHealth(): Promise<void> {
  for (let i = 0; i < 120; i++) {
    try {
      const resp = await fetch(`${BASE}/health`);
      if (resp.ok) return;
    } catch {
      /* not up yet */
    }
    await new Promise((r) => setTimeout(r, 250));
  }
  throw new Error('server did not come up');
}

beforeAll(async () => {
  server = spawn('snmap', ['serve', '--no-ui', '--port', String(PORT)], {
    stdio: ['ignore', 'pipe', 'pipe'],
  });
  server.on('error', (err) => {
    throw new Error(`could not start snmap serve: ${err.message}`);
  });
  await waitForHealth();
});

afterAll(() => {
  server?.kill();
});

describe('selection round trips', () => {
  const csv1 = blobCsv(101);
  const csv2 = blobCsv(202);
  let sid: string;
  let frames: { 1: RasterFrame; 2: RasterFrame };
  let hist: HistogramResponse;

  const ROI = { row0: 2, col0: 3, height: 20, width: 24 };
  const CUTOFF = 5.25;
  const PICKS1 = {
    anchor: { row: 10, col: 4 },
    direction: { row: 10, col: 20 },
  };
  const PICKS2 = {
    anchor: { row: 10, col: 4 },
    direction: { row: 6, col: 16 },
  };

  it('uploads echo the scanned geometry', async () => {
    const created = await api.createSession(0);
    sid = created.id;
    await api.upload(sid, 1, csv1, SCAN);
    const scanned = await api.upload(sid, 2, csv2, SCAN);
    expect(scanned.state).toBe('scanned');
    expect(scanned.frame_count).toBe(NFRAME);
    expect(scanned.frame_rows).toBe(ROWS);
    expect(scanned.frame_cols).toBe(COLS);
    frames = {
      1: scanCsv(csv1, SCAN)[0],
      2: scanCsv(csv2, SCAN)[0],
    };
  });

  it('the submitted rect comes back as the crop dimensions', async () => {
    const resource = await api.setRoi(sid, ROI, ROI);
    frames = { 1: cropFrame(frames[1], ROI), 2: cropFrame(frames[2], ROI) };
    expect(resource.state).toBe('cropped');
    expect(resource.frame_rows).toBe(ROI.height);
    expect(resource.frame_cols).toBe(ROI.width);
  });

  it('the dim preview count agrees with the server histogram', async () => {
    hist = await api.histogram(sid, 1, 32);
    expect(hist.n_pixels).toBe(ROI.height * ROI.width);
    // place the cutoff on an interior bin edge so both sides count the
    // same pixels
    const edge = hist.bin_edges[20];
    expect(countBelow(frames[1], edge)).toBe(countsBelowEdge(edge, hist));
  });

  it('manual cutoffs echo unchanged', async () => {
    const resp = await api.segment(sid, { mode: 'manual', cutoff1: CUTOFF, cutoff2: CUTOFF });
    expect(resp.state).toBe('segmented');
    expect(resp.thresholds.seq1.value).toBe(CUTOFF);
    expect(resp.thresholds.seq2.value).toBe(CUTOFF);
    expect(resp.thresholds.seq1.origin).toBe('manual');
  });

  it('manual landmark picks echo as the preview rotation', async () => {
    const points = registrationPoints(PICKS1, PICKS2);
    const resp = await api.register(sid, { mode: 'manual', points });
    expect(resp.state).toBe('registered');
    const halfDeg = (0.5 * Math.PI) / 180;
    const t1 = resp.transforms.seq1.theta;
    const t2 = resp.transforms.seq2.theta;
    expect(Math.abs(t1 - previewTheta(PICKS1.anchor, PICKS1.direction))).toBeLessThan(halfDeg);
    expect(Math.abs(t2 - previewTheta(PICKS2.anchor, PICKS2.direction))).toBeLessThan(halfDeg);
    // identical sequences modulo noise: no frames shifted away
    expect(resp.temporal.j_max).toBe(0);
  });

  it('rejecting the alignment gate surfaces the suggestions', async () => {
    const resp = await api.confirm(sid, false);
    expect(resp.state).toBe('failed');
    expect(resp.suggestions.length).toBeGreaterThan(0);
    for (const s of resp.suggestions) {
      expect(typeof s).toBe('string');
      expect(s.length).toBeGreaterThan(0);
    }
  });

  it('the failed state recovers through re-segmentation', async () => {
    const seg = await api.segment(sid, { mode: 'manual', cutoff1: CUTOFF, cutoff2: CUTOFF });
    expect(seg.state).toBe('segmented');
    const reg = await api.register(sid, {
      mode: 'manual',
      points: registrationPoints(PICKS1, PICKS2),
    });
    expect(reg.state).toBe('registered');
    const ok = await api.confirm(sid, true);
    expect(ok.state).toBe('confirmed');
    expect(ok.suggestions).toEqual([]);
  });

  let frameCount = 0;
  const stacks: Partial<Record<'D' | 'P', MapStack>> = {};

  it('the map player frame count equals the aligned-pair count', async () => {
    const resp = await api.analyze(sid, {
      alpha: 0.05,
      bandwidths: [{ h1: 2, h2: 2 }],
    });
    expect(resp.state).toBe('analyzed');
    const sess = await api.getSession(sid);
    expect(sess.aligned_pairs).toBe(resp.frames);
    const player = initialPlayer(resp.frames);
    expect(player.frameCount).toBe(sess.aligned_pairs);
    expect(player.cursor).toBe(0);
    frameCount = resp.frames;
    expect(frameCount).toBeGreaterThan(0);
  });

  it('client-side playback matches the movie the server encoded', async () => {
    const p = await Promise.all(
      Array.from({ length: frameCount }, (_, i) => api.getMap(sid, 'P', i)),
    );
    const sig = await Promise.all(
      Array.from({ length: frameCount }, (_, i) => api.getMap(sid, 'SIG', i)),
    );
    stacks.P = {
      rows: p[0].rows,
      cols: p[0].cols,
      frames: p.map((m) => decodeF32(m.data)),
      sig: sig.map((m) => decodeF32(m.data)),
    };

    const gifBytes = new Uint8Array(await (await fetch(api.movieUrl(sid, 'P'))).arrayBuffer());
    const gif = decodeFirstFrame(gifBytes);
    const { rows, cols } = stacks.P;
    const scale = gif.width / cols;
    expect(scale).toBe(Math.floor(scale));
    expect(gif.height).toBe(rows * scale);

    const client = frameRgb('P', stacks.P, 0);

    // count the distinct colors across the whole clip; at most 256 the
    // movie palette is exact, beyond that quantization may perturb
    const distinct = new Set<number>();
    for (let i = 0; i < frameCount; i++) {
      const rgb = frameRgb('P', stacks.P, i);
      for (let k = 0; k < rgb.length; k += 3) {
        distinct.add((rgb[k] << 16) | (rgb[k + 1] << 8) | rgb[k + 2]);
      }
    }
    const exact = distinct.size <= 256;

    let maxErr = 0;
    for (let r = 0; r < rows; r++) {
      for (let c = 0; c < cols; c++) {
        const gi = 3 * (r * scale * gif.width + c * scale);
        const ci = 3 * (r * cols + c);
        for (let ch = 0; ch < 3; ch++) {
          maxErr = Math.max(maxErr, Math.abs(gif.rgb[gi + ch] - client[ci + ch]));
        }
      }
    }
    if (exact) {
      expect(maxErr).toBe(0);
    } else {
      expect(maxErr).toBeLessThanOrEqual(16);
    }
  });

  it('diverging playback matches the D movie too', async () => {
    // re-run with display=all so the server renders the D movie
    const resp = await api.analyze(sid, {
      alpha: 0.05,
      display: 'all',
      bandwidths: [{ h1: 2, h2: 2 }],
    });
    expect(resp.movies).toContain('D');
    const d = await Promise.all(
      Array.from({ length: frameCount }, (_, i) => api.getMap(sid, 'D', i)),
    );
    stacks.D = { rows: d[0].rows, cols: d[0].cols, frames: d.map((m) => decodeF32(m.data)) };

    const gifBytes = new Uint8Array(await (await fetch(api.movieUrl(sid, 'D'))).arrayBuffer());
    const gif = decodeFirstFrame(gifBytes);
    const { rows, cols } = stacks.D;
    const scale = gif.width / cols;
    const client = frameRgb('D', stacks.D, 0);

    const distinct = new Set<number>();
    for (let i = 0; i < frameCount; i++) {
      const rgb = frameRgb('D', stacks.D, i);
      for (let k = 0; k < rgb.length; k += 3) {
        distinct.add((rgb[k] << 16) | (rgb[k + 1] << 8) | rgb[k + 2]);
      }
    }

    let maxErr = 0;
    for (let r = 0; r < rows; r++) {
      for (let c = 0; c < cols; c++) {
        const gi = 3 * (r * scale * gif.width + c * scale);
        const ci = 3 * (r * cols + c);
        for (let ch = 0; ch < 3; ch++) {
          maxErr = Math.max(maxErr, Math.abs(gif.rgb[gi + ch] - client[ci + ch]));
        }
      }
    }
    if (distinct.size <= 256) {
      expect(maxErr).toBe(0);
    } else {
      expect(maxErr).toBeLessThanOrEqual(16);
    }
  });

  it('the 3D height field is the P map', async () => {
    const surface = await api.getSurface(sid, 0);
    expect(surface.rows).toBe(stacks.P!.rows);
    expect(surface.cols).toBe(stacks.P!.cols);
    const p0 = stacks.P!.frames[0];
    for (let i = 0; i < p0.length; i++) {
      expect(Math.abs(surface.values[i] - p0[i])).toBeLessThan(1e-6);
    }
  });

  it('cleans up the session', async () => {
    await api.deleteSession(sid);
    await expect(api.getSession(sid)).rejects.toThrow();
  });
});
