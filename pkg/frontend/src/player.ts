// Playback model for the D/S/T/P map player. All map payloads are
// decoded up front; the cursor indexes aligned pairs and survives both
// kind switches and the 2D/3D toggle on the P view.

import { autoRange, cmapForMap, renderRgb, type ColorRange } from './colormap.js';

export type MapKind = 'D' | 'S' | 'T' | 'P';

export const PLAYER_KINDS: MapKind[] = ['D', 'S', 'T', 'P'];

export interface MapStack {
  rows: number;
  cols: number;
  frames: Float32Array[]; // one per aligned pair
  sig?: Float32Array[]; // only for P
}

export interface PlayerState {
  kind: MapKind;
  cursor: number;
  playing: boolean;
  view: '2d' | '3d'; // applies to P only
  frameCount: number;
}

export function initialPlayer(frameCount: number): PlayerState {
  return { kind: 'P', cursor: 0, playing: false, view: '2d', frameCount };
}

export function setKind(s: PlayerState, kind: MapKind): PlayerState {
  return { ...s, kind };
}

export function setCursor(s: PlayerState, cursor: number): PlayerState {
  const c = Math.min(s.frameCount - 1, Math.max(0, Math.floor(cursor)));
  return { ...s, cursor: c };
}

export function togglePlaying(s: PlayerState): PlayerState {
  return { ...s, playing: !s.playing };
}

export function toggleView(s: PlayerState): PlayerState {
  return { ...s, view: s.view === '2d' ? '3d' : '2d' };
}

/** One timer tick while playing: advance and wrap. */
export function tick(s: PlayerState): PlayerState {
  if (!s.playing || s.frameCount === 0) return s;
  return { ...s, cursor: (s.cursor + 1) % s.frameCount };
}

/** Shared color range for a stack, same rule as the server's movies. */
export function stackRange(kind: MapKind, stack: MapStack): ColorRange {
  if (kind === 'P') return { lo: 0, hi: 1 };
  return autoRange(stack.frames, 'diverging');
}

/** RGB bytes for the current frame of the current kind. */
export function frameRgb(kind: MapKind, stack: MapStack, cursor: number): Uint8ClampedArray {
  const cmap = cmapForMap(kind);
  const range = stackRange(kind, stack);
  const sig = kind === 'P' && stack.sig ? stack.sig[cursor] : undefined;
  return renderRgb(stack.frames[cursor], cmap, range, sig);
}
