// User gestures to wire commands: every action maps to exactly one command.

import type { Command } from './protocol.js';

// One arrow keypress pans by three cells; drags map one cell per pixel bucket.
export const PAN_STEP = 3;

export function wrapYaw(yaw: number, width: number): number {
  return ((yaw % width) + width) % width;
}

export function panBy(currentYaw: number, deltaCells: number, width: number): Command {
  return { type: 'pan', yaw_cells: wrapYaw(currentYaw + deltaCells, width) };
}

export function panLeft(currentYaw: number, width: number): Command {
  return panBy(currentYaw, -PAN_STEP, width);
}

export function panRight(currentYaw: number, width: number): Command {
  return panBy(currentYaw, PAN_STEP, width);
}

// Drag distance in pixels -> whole cells, one cell per rendered-cell width.
export function dragCells(dxPixels: number, pixelsPerCell: number): number {
  if (pixelsPerCell <= 0) return 0;
  return Math.trunc(dxPixels / pixelsPerCell);
}

export function pressReplay(offsetBack: number): Command {
  if (!Number.isInteger(offsetBack) || offsetBack < 1) {
    throw new Error(`replay offset must be a whole number of ticks >= 1, got ${offsetBack}`);
  }
  return { type: 'press_replay', offset_back: offsetBack };
}

export function returnToLive(): Command {
  return { type: 'return_to_live' };
}

export function pause(): Command {
  return { type: 'pause' };
}

export function resume(): Command {
  return { type: 'resume' };
}
