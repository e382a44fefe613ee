import { describe, expect, it } from 'vitest';
import { autoRange, cmapForMap, renderRgb, rgbFor, rint } from '../src/colormap.js';

describe('rint', () => {
  it('rounds half to even like the server', () => {
    expect(rint(0.5)).toBe(0);
    expect(rint(1.5)).toBe(2);
    expect(rint(2.5)).toBe(2);
    expect(rint(127.5)).toBe(128);
    expect(rint(254.5)).toBe(254);
    expect(rint(-0.5)).toBeCloseTo(0, 12);
    expect(rint(-2.5)).toBe(-2);
  });

  it('is plain rounding away from halves', () => {
    expect(rint(254.501)).toBe(255);
    expect(rint(254.499)).toBe(254);
  });
});

describe('diverging', () => {
  const range = { lo: -2, hi: 2 };

  it('hits the frozen endpoints', () => {
    expect(rgbFor(0, 'diverging', range)).toEqual([255, 255, 255]);
    expect(rgbFor(2, 'diverging', range)).toEqual([0, 0, 255]);
    expect(rgbFor(-2, 'diverging', range)).toEqual([255, 0, 0]);
  });

  it('uses the half-to-even ramp at the midpoint', () => {
    // 255 * (1 - 0.5) = 127.5 -> 128
    expect(rgbFor(1, 'diverging', range)).toEqual([128, 128, 255]);
    expect(rgbFor(-1, 'diverging', range)).toEqual([255, 128, 128]);
  });

  it('negating the value swaps red and blue', () => {
    for (const v of [0.3, 1.2, 1.999]) {
      const pos = rgbFor(v, 'diverging', range);
      const neg = rgbFor(-v, 'diverging', range);
      expect(neg).toEqual([pos[2], pos[1], pos[0]]);
    }
  });

  it('clips beyond the range', () => {
    expect(rgbFor(5, 'diverging', range)).toEqual([0, 0, 255]);
    expect(rgbFor(-5, 'diverging', range)).toEqual([255, 0, 0]);
  });
});

describe('sequential', () => {
  const range = { lo: 0, hi: 10 };

  it('maps lo to white and hi to black', () => {
    expect(rgbFor(0, 'sequential', range)).toEqual([255, 255, 255]);
    expect(rgbFor(10, 'sequential', range)).toEqual([0, 0, 0]);
    expect(rgbFor(5, 'sequential', range)).toEqual([128, 128, 128]);
  });

  it('clips outside values', () => {
    expect(rgbFor(-3, 'sequential', range)).toEqual([255, 255, 255]);
    expect(rgbFor(30, 'sequential', range)).toEqual([0, 0, 0]);
  });
});

describe('overlay', () => {
  it('paints significant pixels solid red', () => {
    expect(rgbFor(0.7, 'overlay', { lo: 0, hi: 1 }, true)).toEqual([255, 0, 0]);
  });

  it('falls back to the sequential base otherwise', () => {
    expect(rgbFor(0, 'overlay', { lo: 0, hi: 1 }, false)).toEqual([255, 255, 255]);
  });
});

describe('autoRange', () => {
  it('is symmetric around zero for diverging data', () => {
    const r = autoRange([Float32Array.from([-1, 3, 2])], 'diverging');
    expect(r).toEqual({ lo: -3, hi: 3 });
  });

  it('spans all frames of a stack', () => {
    const r = autoRange([Float32Array.from([1]), Float32Array.from([-7])], 'diverging');
    expect(r).toEqual({ lo: -7, hi: 7 });
  });

  it('falls back to unit ranges on constant data', () => {
    expect(autoRange([Float32Array.from([0, 0])], 'diverging')).toEqual({ lo: -1, hi: 1 });
    expect(autoRange([Float32Array.from([4, 4])], 'sequential')).toEqual({ lo: 4, hi: 5 });
  });
});

describe('renderRgb', () => {
  it('packs three bytes per pixel in row-major order', () => {
    const rgb = renderRgb(Float32Array.from([0, 2]), 'diverging', { lo: -2, hi: 2 });
    expect(Array.from(rgb)).toEqual([255, 255, 255, 0, 0, 255]);
  });

  it('applies the significance mask only where nonzero', () => {
    const rgb = renderRgb(
      Float32Array.from([0.5, 0.5]),
      'overlay',
      { lo: 0, hi: 1 },
      Float32Array.from([0, 1]),
    );
    expect(Array.from(rgb.slice(0, 3))).toEqual([128, 128, 128]);
    expect(Array.from(rgb.slice(3))).toEqual([255, 0, 0]);
  });
});

describe('cmapForMap', () => {
  it('matches the movie palette per kind', () => {
    expect(cmapForMap('D')).toBe('diverging');
    expect(cmapForMap('S')).toBe('diverging');
    expect(cmapForMap('T')).toBe('diverging');
    expect(cmapForMap('P')).toBe('overlay');
    expect(cmapForMap('O1')).toBe('sequential');
  });
});
