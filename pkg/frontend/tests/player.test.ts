import { describe, expect, it } from 'vitest';
import {
  frameRgb,
  initialPlayer,
  setCursor,
  setKind,
  stackRange,
  tick,
  togglePlaying,
  toggleView,
  type MapStack,
} from '../src/player.js';

describe('player state', () => {
  it('slider range is exactly the aligned-pair count', () => {
    const p = initialPlayer(7);
    expect(p.frameCount).toBe(7);
    expect(p.cursor).toBe(0);
    expect(setCursor(p, 6).cursor).toBe(6);
    expect(setCursor(p, 7).cursor).toBe(6);
    expect(setCursor(p, -1).cursor).toBe(0);
  });

  it('ticks wrap around while playing', () => {
    let p = togglePlaying(initialPlayer(3));
    const seen = [p.cursor];
    for (let i = 0; i < 4; i++) {
      p = tick(p);
      seen.push(p.cursor);
    }
    expect(seen).toEqual([0, 1, 2, 0, 1]);
  });

  it('does not advance while paused', () => {
    const p = initialPlayer(3);
    expect(tick(p).cursor).toBe(0);
  });

  it('toggling the 2D/3D view preserves the frame cursor', () => {
    let p = setCursor(initialPlayer(9), 4);
    p = toggleView(p);
    expect(p.view).toBe('3d');
    expect(p.cursor).toBe(4);
    p = toggleView(p);
    expect(p.view).toBe('2d');
    expect(p.cursor).toBe(4);
  });

  it('switching kinds preserves the cursor too', () => {
    let p = setCursor(initialPlayer(9), 5);
    p = setKind(p, 'D');
    expect(p.cursor).toBe(5);
  });
});

describe('stack rendering', () => {
  const stack: MapStack = {
    rows: 1,
    cols: 3,
    frames: [Float32Array.from([-4, 0, 2]), Float32Array.from([1, 1, 1])],
  };

  it('uses one diverging range across all frames of a kind', () => {
    expect(stackRange('D', stack)).toEqual({ lo: -4, hi: 4 });
  });

  it('pins the P range to [0, 1]', () => {
    expect(stackRange('P', { ...stack, frames: [Float32Array.from([0.2, 0.8, 1])] })).toEqual({
      lo: 0,
      hi: 1,
    });
  });

  it('renders the cursor frame with the stack range', () => {
    const rgb = frameRgb('D', stack, 0);
    // -4 with range +-4 is full red
    expect(Array.from(rgb.slice(0, 3))).toEqual([255, 0, 0]);
    // 0 is white
    expect(Array.from(rgb.slice(3, 6))).toEqual([255, 255, 255]);
  });

  it('marks significant P pixels red', () => {
    const p: MapStack = {
      rows: 1,
      cols: 2,
      frames: [Float32Array.from([0.5, 0.01])],
      sig: [Float32Array.from([0, 1])],
    };
    const rgb = frameRgb('P', p, 0);
    expect(Array.from(rgb.slice(0, 3))).toEqual([128, 128, 128]);
    expect(Array.from(rgb.slice(3, 6))).toEqual([255, 0, 0]);
  });
});
