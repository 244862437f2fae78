// Operator cockpit: watch the live panoramic strip, press Replay to step into
// the recorded past, pan around it, return to live. All state comes from the
// server; this file only renders and forwards gestures.

import {
  ackFor,
  parseViewMessage,
  postCommand,
  type SessionState,
  type ViewMessage,
} from './protocol.js';
import {
  clocksDiverged,
  initialState,
  markerPercent,
  onMalformed,
  onMessage,
  onServerState,
  onStatus,
  pushLog,
  type UiState,
} from './state.js';
import {
  dragCells,
  panBy,
  panLeft,
  panRight,
  pause,
  pressReplay,
  resume,
  returnToLive,
} from './controls.js';

const baseUrl = window.location.origin.startsWith('http')
  ? window.location.origin
  : 'http://127.0.0.1:8000';

let state: UiState = initialState();
let panoramaWidth = 36;
let socket: WebSocket | null = null;
let reconnectDelayMs = 500;

const $ = (id: string): HTMLElement => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el;
};

function render(): void {
  $('status').textContent = state.status;
  $('status').className = `status ${state.status}`;

  const banner = $('banner');
  banner.hidden = state.banner === null;
  banner.textContent = state.banner ?? '';

  $('mode-badge').textContent = (state.mode ?? 'waiting').toUpperCase();
  $('mode-badge').className = `badge ${state.mode ?? 'waiting'}`;

  $('wall-clock').textContent = state.wallTick === null ? '-' : String(state.wallTick);
  $('experienced-clock').textContent =
    state.experiencedTick === null ? '-' : String(state.experiencedTick);
  $('clocks').classList.toggle('diverged', clocksDiverged(state));

  $('configuration').textContent = state.latest?.configuration ?? '-';
  $('yaw-readout').textContent = String(state.yaw);

  const strip = $('strip');
  strip.textContent = '';
  for (const cell of state.latest?.view_cells ?? []) {
    const span = document.createElement('span');
    span.className = 'cell';
    span.textContent = cell;
    strip.appendChild(span);
  }

  const total = state.ticksTotal ?? 1;
  const wallMark = $('wall-marker');
  const expMark = $('experienced-marker');
  if (state.wallTick !== null) {
    wallMark.style.left = `${markerPercent(state.wallTick, total)}%`;
    wallMark.hidden = false;
  } else {
    wallMark.hidden = true;
  }
  if (state.mode === 'replay' && state.experiencedTick !== null) {
    expMark.style.left = `${markerPercent(state.experiencedTick, total)}%`;
    expMark.hidden = false;
  } else {
    expMark.hidden = true;
  }

  const retention = $('retention');
  if (state.retention && state.ticksTotal) {
    const [oldest, newest] = state.retention;
    retention.style.left = `${markerPercent(oldest, total)}%`;
    retention.style.width = `${Math.max(1, markerPercent(newest, total) - markerPercent(oldest, total))}%`;
    $('retention-label').textContent = `retained ${oldest}..${newest}`;
  }

  $('paused-flag').hidden = !state.paused;
  $('finished-flag').hidden = !state.finished;

  const log = $('log');
  log.textContent = state.log.slice().reverse().join('\n');
}

function update(next: UiState): void {
  state = next;
  render();
}

function toast(text: string): void {
  const el = $('toast');
  el.textContent = text;
  el.hidden = false;
  window.setTimeout(() => {
    el.hidden = true;
  }, 2500);
}

async function send(cmd: Parameters<typeof postCommand>[1]): Promise<void> {
  try {
    const result = await postCommand(baseUrl, cmd);
    if (!result.ok) {
      // Out-of-retention is an expected operator mistake, not a failure.
      if (result.error.code === 'OutOfRetention') {
        toast(`not retained: ${result.error.message}`);
      } else {
        update(pushLog(state, `rejected (${result.error.code}): ${result.error.message}`));
      }
      return;
    }
    update(onServerState(state, result.state));
    update(pushLog(state, `sent ${JSON.stringify(cmd)}`));
  } catch (err) {
    update(pushLog(state, `command failed: ${String(err)}`));
  }
}

function connect(): void {
  const wsUrl = `${baseUrl.replace(/^http/, 'ws')}/stream`;
  update(onStatus(state, 'connecting'));
  socket = new WebSocket(wsUrl);

  socket.onopen = () => {
    reconnectDelayMs = 500;
    update(onStatus(state, 'open'));
  };

  socket.onmessage = (event: MessageEvent) => {
    let msg: ViewMessage;
    try {
      msg = parseViewMessage(String(event.data));
    } catch (err) {
      update(onMalformed(state, err instanceof Error ? err.message : String(err)));
      return; // keep the stream open
    }
    socket?.send(ackFor(msg));
    update(onMessage(state, msg));
  };

  socket.onclose = () => {
    update(onStatus(state, 'closed'));
    const retry = () => {
      window.setTimeout(connect, reconnectDelayMs);
      reconnectDelayMs = Math.min(reconnectDelayMs * 2, 5000);
    };
    // ask the server whether the session actually ended before retrying
    fetch(`${baseUrl}/state`)
      .then((resp) => resp.json())
      .then((serverState: SessionState) => {
        update(onServerState(state, serverState));
        if (!state.finished) retry();
      })
      .catch(retry);
  };

  socket.onerror = (event: Event) => {
    console.error('stream error', event);
  };
}

async function loadInitial(): Promise<void> {
  try {
    const scenario = await (await fetch(`${baseUrl}/scenario`)).json();
    panoramaWidth = scenario.width;
    $('scenario-label').textContent =
      `${scenario.robot.variant}, ${scenario.ticks} ticks, ` +
      `${scenario.clock.capture_interval_s}s per tick`;
    const sessionState = (await (await fetch(`${baseUrl}/state`)).json()) as SessionState;
    update(onServerState(state, sessionState));
  } catch (err) {
    update(pushLog(state, `failed to load /state: ${String(err)}`));
  }
}

function wireControls(): void {
  $('replay-button').addEventListener('click', () => {
    const offset = Number((($('offset-input') as HTMLInputElement)).value);
    try {
      void send(pressReplay(offset));
    } catch (err) {
      toast(err instanceof Error ? err.message : String(err));
    }
  });
  $('return-button').addEventListener('click', () => void send(returnToLive()));
  $('pause-button').addEventListener('click', () => void send(pause()));
  $('resume-button').addEventListener('click', () => void send(resume()));

  document.addEventListener('keydown', (event: KeyboardEvent) => {
    if (event.target instanceof HTMLInputElement) return;
    if (event.key === 'ArrowLeft') void send(panLeft(state.yaw, panoramaWidth));
    if (event.key === 'ArrowRight') void send(panRight(state.yaw, panoramaWidth));
  });

  // Drag to pan: one cell per rendered-cell width of horizontal motion.
  const strip = $('strip');
  let dragStartX: number | null = null;
  let dragStartYaw = 0;
  let lastSentDelta = 0;
  strip.addEventListener('pointerdown', (event: PointerEvent) => {
    dragStartX = event.clientX;
    dragStartYaw = state.yaw;
    lastSentDelta = 0;
    strip.setPointerCapture(event.pointerId);
  });
  strip.addEventListener('pointermove', (event: PointerEvent) => {
    if (dragStartX === null) return;
    const cellEl = strip.querySelector('.cell');
    const pxPerCell = cellEl ? cellEl.getBoundingClientRect().width : 24;
    const delta = dragCells(dragStartX - event.clientX, pxPerCell);
    if (delta !== lastSentDelta) {
      lastSentDelta = delta;
      void send(panBy(dragStartYaw, delta, panoramaWidth));
    }
  });
  const endDrag = () => {
    dragStartX = null;
  };
  strip.addEventListener('pointerup', endDrag);
  strip.addEventListener('pointercancel', endDrag);
}

document.addEventListener('DOMContentLoaded', () => {
  render();
  wireControls();
  void loadInitial().then(connect);
});
