"""Operator service: runs one scenario, streams per-tick views, takes commands.

Wire contract (all payloads carry "v": 1):
  GET  /state     -> session state JSON
  GET  /scenario  -> resolved scenario JSON
  GET  /trace     -> worldline trace so far, as JSONL
  POST /command   -> operator command JSON; replies with state or {code, message}
  WS   /stream    -> one view message per tick (server push); clients may send
                     {"ack": wall_tick} frames upstream

Pacing: one tick per capture interval. In fast mode the loop is unpaced and
instead gates on stream acks, so a scripted client observes every tick and
its commands land deterministically between ticks. The asyncio loop is the
single writer; command handlers and readers run on the same loop, so state
mutations are serialized and trace reads never see a torn row.
"""

from __future__ import annotations

import asyncio
import json
from contextlib import asynccontextmanager
from dataclasses import dataclass, field

from fastapi import FastAPI, Request, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .commands import OperatorCommand, Pan, Pause, Resume, command_from_json
from .environment import configuration_at, render_panorama
from .errors import AlreadyReplaying, EmptyStore, OutOfRetention, ScenarioError
from .replay import MODE_LIVE, MODE_REPLAY, retention_window
from .robot import Robot
from .scenario import Scenario, scenario_to_json
from .trace import TraceRow, WorldlineTrace, serialize_trace
from .viewport import Orientation, extract_view

WIRE_VERSION = 1

# Fast mode: how long to wait for a first stream subscriber before running
# unattended, and how long a subscriber may sit on an unacked tick before it
# is treated as dead.
FAST_FIRST_SUBSCRIBER_GRACE_S = 5.0
FAST_ACK_TIMEOUT_S = 30.0


@dataclass
class _Subscriber:
    queue: asyncio.Queue = field(default_factory=asyncio.Queue)
    acked: int = -1


class SessionRunner:
    """Owns the robot and the pacing loop for one scenario run."""

    def __init__(self, scenario: Scenario, *, fast: bool = False,
                 subscriber_grace_s: float = FAST_FIRST_SUBSCRIBER_GRACE_S):
        self.scenario = scenario
        self.fast = fast
        self.subscriber_grace_s = subscriber_grace_s
        self.robot = Robot(
            scenario.variant,
            clock=scenario.clock,
            depth=scenario.depth,
            capacity=scenario.capacity,
            auto_return=scenario.auto_return,
        )
        self.yaw = 0
        self.paused = False
        self.finished = False
        self._resume = asyncio.Event()
        self._resume.set()
        self._ack_changed = asyncio.Event()
        self._subscriber_joined = asyncio.Event()
        self.subscribers: list[_Subscriber] = []

    # -- state ------------------------------------------------------------

    def _last_row(self) -> TraceRow | None:
        return self.robot.rows[-1] if self.robot.rows else None

    def state_json(self) -> dict:
        row = self._last_row()
        experienced_tick = None
        mode = MODE_LIVE
        if row is not None:
            mode = MODE_REPLAY if self.robot.session.replaying else MODE_LIVE
            if row.experienced.entries:
                experienced_tick = row.experienced.entries[0].experienced_tick
        try:
            retention: list[int] | None = list(retention_window(self.robot.store))
        except EmptyStore:
            retention = None
        return {
            "v": WIRE_VERSION,
            "wall_tick": self.robot.wall_tick,
            "mode": mode,
            "experienced_tick": experienced_tick,
            "yaw_cells": self.yaw,
            "retention": retention,
            "paused": self.paused,
            "finished": self.finished,
            "ticks_total": self.scenario.ticks,
        }

    def view_message(self, row: TraceRow) -> dict:
        frame = self.robot.last_view_frame
        cells: list[str] = []
        if frame is not None:
            cells = list(extract_view(frame, Orientation(self.yaw), self.scenario.fov).cells)
        entries = row.experienced.entries
        return {
            "v": WIRE_VERSION,
            "wall_tick": row.wall_tick,
            "mode": row.mode,
            "experienced_tick": entries[0].experienced_tick if entries else None,
            "configuration": entries[0].configuration if entries else None,
            "view_cells": cells,
            "yaw_cells": self.yaw,
            "retention": list(retention_window(self.robot.store)),
        }

    # -- commands ----------------------------------------------------------

    def handle_command(self, cmd: OperatorCommand) -> dict:
        """Apply one operator command between ticks; raises on rejection."""
        if self.finished:
            raise ScenarioError("session finished; no further commands")
        if isinstance(cmd, Pan):
            self.yaw = cmd.yaw_cells % self.scenario.width
        elif isinstance(cmd, Pause):
            self.paused = True
            self._resume.clear()
        elif isinstance(cmd, Resume):
            self.paused = False
            self._resume.set()
        else:
            self.robot.apply_command(cmd)
        return self.state_json()

    # -- stream plumbing ----------------------------------------------------

    def add_subscriber(self) -> _Subscriber:
        sub = _Subscriber()
        self.subscribers.append(sub)
        self._subscriber_joined.set()
        return sub

    def remove_subscriber(self, sub: _Subscriber) -> None:
        if sub in self.subscribers:
            self.subscribers.remove(sub)
        self._ack_changed.set()

    def record_ack(self, sub: _Subscriber, tick: int) -> None:
        if tick > sub.acked:
            sub.acked = tick
        self._ack_changed.set()

    def _broadcast(self, msg: dict | None) -> list[_Subscriber]:
        targets = list(self.subscribers)
        for sub in targets:
            sub.queue.put_nowait(msg)
        return targets

    async def _await_acks(self, targets: list[_Subscriber], tick: int) -> None:
        loop = asyncio.get_running_loop()
        deadline = loop.time() + FAST_ACK_TIMEOUT_S
        while True:
            pending = [s for s in targets if s in self.subscribers and s.acked < tick]
            if not pending:
                return
            remaining = deadline - loop.time()
            if remaining <= 0:
                for sub in pending:  # treat as dead, do not stall the run
                    self.remove_subscriber(sub)
                return
            self._ack_changed.clear()
            try:
                await asyncio.wait_for(self._ack_changed.wait(), remaining)
            except asyncio.TimeoutError:
                pass

    # -- the loop ------------------------------------------------------------

    async def run(self) -> None:
        sc = self.scenario
        if self.fast and self.subscriber_grace_s > 0 and not self.subscribers:
            try:
                await asyncio.wait_for(self._subscriber_joined.wait(), self.subscriber_grace_s)
            except asyncio.TimeoutError:
                pass
        for t in range(sc.ticks):
            await self._resume.wait()
            frame = render_panorama(configuration_at(sc.timeline, t), t, sc.width)
            row = self.robot.step(frame, sc.script.get(t, ()))
            targets = self._broadcast(self.view_message(row))
            if self.fast:
                await self._await_acks(targets, t)
            else:
                await asyncio.sleep(sc.clock.capture_interval_s)
        self.finished = True
        self._broadcast(None)


def create_app(scenario: Scenario, *, fast: bool = False,
               subscriber_grace_s: float = FAST_FIRST_SUBSCRIBER_GRACE_S,
               ui_dir: str | None = None) -> FastAPI:
    runner = SessionRunner(scenario, fast=fast, subscriber_grace_s=subscriber_grace_s)

    @asynccontextmanager
    async def lifespan(app: FastAPI):
        task = asyncio.create_task(runner.run())
        yield
        task.cancel()
        try:
            await task
        except asyncio.CancelledError:
            pass

    app = FastAPI(title="chronoscope operator service", lifespan=lifespan)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"])
    app.state.runner = runner

    @app.get("/state")
    def get_state() -> JSONResponse:
        return JSONResponse(runner.state_json())

    @app.get("/scenario")
    def get_scenario() -> JSONResponse:
        return JSONResponse(scenario_to_json(scenario))

    @app.get("/trace")
    def get_trace() -> Response:
        snapshot = WorldlineTrace(rows=tuple(runner.robot.rows))
        return Response(content=serialize_trace(snapshot),
                        media_type="application/x-ndjson")

    @app.post("/command")
    async def post_command(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return _error(400, "BadRequest", "body is not valid JSON")
        try:
            cmd = command_from_json(body)
        except ScenarioError as exc:
            return _error(400, "BadRequest", exc.message)
        try:
            state = runner.handle_command(cmd)
        except (OutOfRetention, AlreadyReplaying) as exc:
            return _error(409, exc.code, exc.message)
        except ScenarioError as exc:
            return _error(409, "Finished", exc.message)
        except ValueError as exc:
            return _error(400, "BadRequest", str(exc))
        return JSONResponse(state)

    @app.websocket("/stream")
    async def stream(ws: WebSocket) -> None:
        await ws.accept()
        if runner.finished:
            await ws.close()
            return
        sub = runner.add_subscriber()

        async def pump() -> None:
            while True:
                msg = await sub.queue.get()
                if msg is None:
                    await ws.close()
                    return
                await ws.send_text(json.dumps(msg, separators=(",", ":")))

        sender = asyncio.create_task(pump())
        try:
            while True:
                raw = await ws.receive_text()
                try:
                    obj = json.loads(raw)
                except json.JSONDecodeError:
                    continue
                if isinstance(obj, dict) and isinstance(obj.get("ack"), int):
                    runner.record_ack(sub, obj["ack"])
        except WebSocketDisconnect:
            pass
        finally:
            runner.remove_subscriber(sub)
            sender.cancel()

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse({"v": WIRE_VERSION, "code": code, "message": message},
                        status_code=status)
