// Pure UI state: everything shown on screen derives from server messages.
// Reloading the page and replaying /state + /stream reproduces the display.

import type { SessionState, ViewMessage } from './protocol.js';

export type ConnectionStatus = 'connecting' | 'open' | 'closed';

const LOG_LIMIT = 50;

export interface UiState {
  status: ConnectionStatus;
  latest: ViewMessage | null;
  wallTick: number | null;
  experiencedTick: number | null;
  mode: 'live' | 'replay' | null;
  yaw: number;
  retention: [number, number] | null;
  paused: boolean;
  finished: boolean;
  ticksTotal: number | null;
  banner: string | null;
  log: string[];
}

export function initialState(): UiState {
  return {
    status: 'connecting',
    latest: null,
    wallTick: null,
    experiencedTick: null,
    mode: null,
    yaw: 0,
    retention: null,
    paused: false,
    finished: false,
    ticksTotal: null,
    banner: null,
    log: [],
  };
}

export function pushLog(s: UiState, line: string): UiState {
  const log = [...s.log, line];
  return { ...s, log: log.slice(-LOG_LIMIT) };
}

export function onStatus(s: UiState, status: ConnectionStatus): UiState {
  const banner = status === 'open' ? null : s.banner;
  return pushLog({ ...s, status, banner }, `connection ${status}`);
}

export function onServerState(s: UiState, state: SessionState): UiState {
  return {
    ...s,
    wallTick: state.wall_tick >= 0 ? state.wall_tick : null,
    experiencedTick: state.experienced_tick,
    mode: state.wall_tick >= 0 ? state.mode : null,
    yaw: state.yaw_cells,
    retention: state.retention,
    paused: state.paused,
    finished: state.finished,
    ticksTotal: state.ticks_total,
  };
}

export function onMessage(s: UiState, msg: ViewMessage): UiState {
  let next: UiState = {
    ...s,
    latest: msg,
    wallTick: msg.wall_tick,
    experiencedTick: msg.experienced_tick,
    mode: msg.mode,
    yaw: msg.yaw_cells,
    retention: msg.retention,
    banner: null,
  };
  if (s.mode !== null && s.mode !== msg.mode) {
    next = pushLog(next, `tick ${msg.wall_tick}: mode -> ${msg.mode.toUpperCase()}`);
  }
  return next;
}

// A malformed message shows a banner but never tears the stream down.
export function onMalformed(s: UiState, detail: string): UiState {
  return pushLog({ ...s, banner: `malformed stream message: ${detail}` }, `error: ${detail}`);
}

// The two clocks of the worldline display: where the robot is, and when
// the scene it experiences was captured. They differ exactly during replay.
export function clocksDiverged(s: UiState): boolean {
  return s.wallTick !== null && s.experiencedTick !== null && s.wallTick !== s.experiencedTick;
}

export function markerPercent(tick: number, ticksTotal: number): number {
  if (ticksTotal <= 1) return 0;
  return Math.min(100, Math.max(0, (tick / (ticksTotal - 1)) * 100));
}
