// Color formulas duplicated from the server's render module so playback
// needs no per-frame image round trips:
//
//   sequential:  x = (v - lo) / (hi - lo); gray = rint(255 * (1 - x))
//   diverging:   a = max(|lo|, |hi|); x = clip(v / a, -1, 1)
//                x >= 0 -> (rint(255(1-x)), rint(255(1-x)), 255)
//                x <  0 -> (255, rint(255(1-|x|)), rint(255(1-|x|)))
//   overlay:     sequential base, significant pixels solid (255, 0, 0)
//
// rint is round-half-to-even to match the server's quantization exactly.

export type CmapKind = 'sequential' | 'diverging' | 'overlay';

export interface ColorRange {
  lo: number;
  hi: number;
}

export function rint(x: number): number {
  const floor = Math.floor(x);
  const frac = x - floor;
  if (frac > 0.5) return floor + 1;
  if (frac < 0.5) return floor;
  return floor % 2 === 0 ? floor : floor + 1;
}

function clip(x: number, lo: number, hi: number): number {
  return x < lo ? lo : x > hi ? hi : x;
}

/** RGB for a single value; overlay callers pass sig for red pixels. */
export function rgbFor(v: number, kind: CmapKind, range: ColorRange, sig = false): [number, number, number] {
  if (kind === 'overlay' && sig) return [255, 0, 0];
  if (kind === 'diverging') {
    const a = Math.max(Math.abs(range.lo), Math.abs(range.hi));
    const x = clip(v / a, -1, 1);
    const ramp = rint(255 * (1 - Math.abs(x)));
    return x >= 0 ? [ramp, ramp, 255] : [255, ramp, ramp];
  }
  const x = clip((v - range.lo) / (range.hi - range.lo), 0, 1);
  const gray = rint(255 * (1 - x));
  return [gray, gray, gray];
}

/** Movie-wide range, same rule the server uses per movie kind. */
export function autoRange(frames: ArrayLike<number>[], kind: CmapKind): ColorRange {
  if (kind === 'diverging') {
    let a = 0;
    for (const f of frames) {
      for (let i = 0; i < f.length; i++) a = Math.max(a, Math.abs(f[i]));
    }
    if (a === 0) a = 1;
    return { lo: -a, hi: a };
  }
  let lo = Infinity;
  let hi = -Infinity;
  for (const f of frames) {
    for (let i = 0; i < f.length; i++) {
      if (f[i] < lo) lo = f[i];
      if (f[i] > hi) hi = f[i];
    }
  }
  if (lo === hi) hi = lo + 1;
  return { lo, hi };
}

export function cmapForMap(kind: string): CmapKind {
  if (kind === 'D' || kind === 'S' || kind === 'T') return 'diverging';
  if (kind === 'P') return 'overlay';
  return 'sequential';
}

/**
 * Render a field into a tightly packed RGB buffer (3 bytes per pixel).
 * sig marks overlay pixels drawn solid red (nonzero = significant).
 */
export function renderRgb(
  values: ArrayLike<number>,
  kind: CmapKind,
  range: ColorRange,
  sig?: ArrayLike<number>,
): Uint8ClampedArray {
  const out = new Uint8ClampedArray(values.length * 3);
  for (let i = 0; i < values.length; i++) {
    const [r, g, b] = rgbFor(values[i], kind, range, sig ? sig[i] !== 0 : false);
    out[3 * i] = r;
    out[3 * i + 1] = g;
    out[3 * i + 2] = b;
  }
  return out;
}
