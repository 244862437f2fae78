// Wire contract with the operator service. The UI renders server state only;
// none of the engine rules are re-implemented here.

export interface ViewMessage {
  v: number;
  wall_tick: number;
  mode: 'live' | 'replay';
  experienced_tick: number | null;
  configuration: string | null;
  view_cells: string[];
  yaw_cells: number;
  retention: [number, number];
}

export interface SessionState {
  v: number;
  wall_tick: number;
  mode: 'live' | 'replay';
  experienced_tick: number | null;
  yaw_cells: number;
  retention: [number, number] | null;
  paused: boolean;
  finished: boolean;
  ticks_total: number;
}

export interface ErrorReply {
  v: number;
  code: string;
  message: string;
}

export type Command =
  | { type: 'press_replay'; offset_back: number }
  | { type: 'press_replay'; target: number }
  | { type: 'pan'; yaw_cells: number }
  | { type: 'return_to_live' }
  | { type: 'pause' }
  | { type: 'resume' };

function isInt(x: unknown): x is number {
  return typeof x === 'number' && Number.isInteger(x);
}

export function parseViewMessage(raw: string): ViewMessage {
  let obj: unknown;
  try {
    obj = JSON.parse(raw);
  } catch {
    throw new Error('stream message is not JSON');
  }
  const m = obj as Record<string, unknown>;
  if (m === null || typeof m !== 'object') throw new Error('stream message is not an object');
  if (m.v !== 1) throw new Error(`unsupported wire version ${String(m.v)}`);
  if (!isInt(m.wall_tick) || m.wall_tick < 0) throw new Error('bad wall_tick');
  if (m.mode !== 'live' && m.mode !== 'replay') throw new Error(`bad mode ${String(m.mode)}`);
  if (m.experienced_tick !== null && !isInt(m.experienced_tick)) {
    throw new Error('bad experienced_tick');
  }
  if (m.configuration !== null && typeof m.configuration !== 'string') {
    throw new Error('bad configuration');
  }
  if (!Array.isArray(m.view_cells) || m.view_cells.some((c) => typeof c !== 'string')) {
    throw new Error('bad view_cells');
  }
  if (!isInt(m.yaw_cells)) throw new Error('bad yaw_cells');
  const r = m.retention;
  if (!Array.isArray(r) || r.length !== 2 || !isInt(r[0]) || !isInt(r[1])) {
    throw new Error('bad retention');
  }
  return {
    v: 1,
    wall_tick: m.wall_tick,
    mode: m.mode,
    experienced_tick: m.experienced_tick as number | null,
    configuration: m.configuration as string | null,
    view_cells: m.view_cells as string[],
    yaw_cells: m.yaw_cells,
    retention: [r[0], r[1]],
  };
}

// Acks let the server's fast (unpaced) mode advance in lockstep with us;
// a normally paced server just ignores them.
export function ackFor(msg: ViewMessage): string {
  return JSON.stringify({ ack: msg.wall_tick });
}

export async function postCommand(
  baseUrl: string,
  cmd: Command,
): Promise<{ ok: true; state: SessionState } | { ok: false; error: ErrorReply }> {
  const resp = await fetch(`${baseUrl}/command`, {
    method: 'POST',
    headers: { 'content-type': 'application/json' },
    body: JSON.stringify(cmd),
  });
  const body = await resp.json();
  if (resp.ok) return { ok: true, state: body as SessionState };
  return { ok: false, error: body as ErrorReply };
}
