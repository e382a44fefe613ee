// Two clicks per frame pick the manual registration landmarks: the
// first is the anchor, the second sets the direction. A third click
// starts that frame's picks over.

import type { Point } from './api.js';

export interface PickState {
  anchor: Point | null;
  direction: Point | null;
}

export const emptyPicks: PickState = { anchor: null, direction: null };

export function addPick(state: PickState, p: Point): PickState {
  if (state.anchor === null) return { anchor: p, direction: null };
  if (state.direction === null) return { anchor: state.anchor, direction: p };
  return { anchor: p, direction: null };
}

export function picksComplete(state: PickState): boolean {
  return state.anchor !== null && state.direction !== null;
}

export function picksCoincident(state: PickState): boolean {
  if (!picksComplete(state)) return false;
  const a = state.anchor!;
  const d = state.direction!;
  return a.row === d.row && a.col === d.col;
}

/**
 * Rotation the server will apply for these picks: the anchor-direction
 * line is turned onto the +col axis, with row increasing downward.
 */
export function previewTheta(anchor: Point, direction: Point): number {
  const dx = direction.col - anchor.col;
  const dy = anchor.row - direction.row; // upward
  return -Math.atan2(dy, dx);
}

/** Four-point payload for POST /register, seq1 picks first. */
export function registrationPoints(seq1: PickState, seq2: PickState): Point[] {
  if (!picksComplete(seq1) || !picksComplete(seq2)) {
    throw new Error('both frames need an anchor and a direction point');
  }
  if (picksCoincident(seq1) || picksCoincident(seq2)) {
    throw new Error('registration points must differ');
  }
  return [seq1.anchor!, seq1.direction!, seq2.anchor!, seq2.direction!];
}
