"""Named invariant checks over serialized worldline traces.

Every check is recomputation from the trace alone (plus the scenario file for
the determinism re-run); nothing here shares code with the stepper beyond the
row format.
"""

from __future__ import annotations

import hashlib
from collections import defaultdict
from dataclasses import dataclass

from .replay import MODE_LIVE, MODE_REPLAY
from .trace import (
    ExperiencedPresent,
    PresentEntry,
    TraceRow,
    WorldlineTrace,
    serialize_trace,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"


def _fail(name: str, detail: str) -> CheckResult:
    return CheckResult(name, False, detail)


def _ok(name: str, detail: str) -> CheckResult:
    return CheckResult(name, True, detail)


def check_structure(trace: WorldlineTrace) -> CheckResult:
    """Wall ticks count 0,1,2,...; modes valid; schema counters monotone."""
    name = "structure"
    last_changes = -1
    for i, row in enumerate(trace.rows):
        if row.wall_tick != i:
            return _fail(name, f"row {i} has wall_tick {row.wall_tick}")
        if row.mode not in (MODE_LIVE, MODE_REPLAY):
            return _fail(name, f"row {i} has unknown mode {row.mode!r}")
        if row.schema is not None:
            if row.schema.change_count < last_changes:
                return _fail(name, f"schema change_count decreased at tick {i}")
            last_changes = row.schema.change_count
    return _ok(name, f"{len(trace.rows)} rows well-formed")


def check_shift_law(trace: WorldlineTrace) -> CheckResult:
    """Register-sourced entries must show exactly wall_tick - i."""
    name = "shift-law"
    checked = 0
    for row in trace.rows:
        for e in row.experienced.entries:
            if not (e.source.startswith("P") and e.source[1:].isdigit()):
                continue
            i = int(e.source[1:])
            if e.experienced_tick != row.wall_tick - i:
                return _fail(name, f"tick {row.wall_tick}: {e.source} shows "
                                   f"{e.experienced_tick}, expected {row.wall_tick - i}")
            checked += 1
    return _ok(name, f"{checked} register entries consistent")


def check_lag(trace: WorldlineTrace) -> CheckResult:
    """Constant-lag worldline: experienced_tick = wall_tick - K after warm-up."""
    name = "lag"
    lag: int | None = None
    for row in trace.rows:
        entries = row.experienced.entries
        if not entries:
            continue  # warm-up rows carry no experience
        if len(entries) != 1:
            return _fail(name, f"tick {row.wall_tick}: expected a single present, "
                               f"got {len(entries)}")
        experienced = entries[0].experienced_tick
        if lag is None:
            lag = row.wall_tick - experienced
        if experienced != row.wall_tick - lag:
            return _fail(name, f"tick {row.wall_tick}: experienced_tick {experienced}, "
                               f"expected wall_tick - {lag}")
    if lag is None:
        return _fail(name, "trace has no experienced entries at all")
    return _ok(name, f"experienced_tick = wall_tick - {lag} throughout")


def check_dual_present(trace: WorldlineTrace) -> CheckResult:
    """Split-screen worldline: entries {t, t-j} once warmed up, {t} before."""
    name = "dual-present"
    offset: int | None = None
    for row in trace.rows:
        ticks = sorted(row.experienced.ticks())
        if len(ticks) == 1:
            if offset is not None:
                return _fail(name, f"tick {row.wall_tick}: dual present collapsed "
                                   f"back to a single entry")
            if ticks[0] != row.wall_tick:
                return _fail(name, f"warm-up tick {row.wall_tick} shows {ticks[0]}")
            continue
        if len(ticks) != 2:
            return _fail(name, f"tick {row.wall_tick}: {len(ticks)} entries")
        if offset is None:
            offset = row.wall_tick - ticks[0]
        expected = sorted((row.wall_tick, row.wall_tick - offset))
        if ticks != expected:
            return _fail(name, f"tick {row.wall_tick}: ticks {ticks}, expected {expected}")
    if offset is None:
        return _fail(name, "no dual-present rows found")
    return _ok(name, f"experienced ticks = {{t, t-{offset}}} after warm-up")


def check_same_present_twice(trace: WorldlineTrace, symbol: str | None = None) -> CheckResult:
    """Some (configuration, experienced_tick) pair occupies >= 2 wall ticks."""
    name = "same-present-twice"
    seen: dict[tuple[str, int], list[int]] = defaultdict(list)
    for row in trace.rows:
        for e in row.experienced.entries:
            seen[(e.configuration, e.experienced_tick)].append(row.wall_tick)
    repeats = {k: v for k, v in seen.items() if len(v) >= 2}
    if symbol is not None:
        repeats = {k: v for k, v in repeats.items() if k[0] == symbol}
        if not repeats:
            return _fail(name, f"configuration {symbol!r} never re-experienced")
    elif not repeats:
        return _fail(name, "no present experienced at two distinct wall ticks")
    (config, experienced), walls = sorted(repeats.items())[0]
    return _ok(name, f"present {config!r}@{experienced} experienced at wall ticks {walls}")


def check_determinism(trace_bytes: bytes, scenario) -> CheckResult:
    """Re-run the scenario and compare byte hashes."""
    from .robot import run_worldline  # deferred: verify stays import-light for wire use

    name = "determinism"
    rerun = run_worldline(
        scenario.variant,
        scenario.timeline,
        scenario.ticks,
        scenario.script,
        clock=scenario.clock,
        depth=scenario.depth,
        width=scenario.width,
        capacity=scenario.capacity,
        auto_return=scenario.auto_return,
    )
    h_file = hashlib.sha256(trace_bytes).hexdigest()
    h_rerun = hashlib.sha256(serialize_trace(rerun)).hexdigest()
    if h_file != h_rerun:
        return _fail(name, f"re-run hash {h_rerun[:12]} != trace hash {h_file[:12]}")
    return _ok(name, f"sha256 {h_file[:12]} reproduced")


CHECK_NAMES = ("structure", "shift-law", "lag", "dual-present",
               "same-present-twice", "determinism")


def trace_from_stream(messages: list[dict]) -> WorldlineTrace:
    """Rebuild a (partial) worldline trace from broadcast view messages.

    Stream messages carry no forgetting or schema information, so those
    fields stay None; the result still satisfies every check that reads only
    modes and experienced entries.
    """
    rows = []
    for msg in messages:
        experienced: tuple[PresentEntry, ...] = ()
        if msg.get("experienced_tick") is not None:
            source = "replay" if msg["mode"] == MODE_REPLAY else "P0"
            experienced = (PresentEntry(
                source=source,
                experienced_tick=int(msg["experienced_tick"]),
                configuration=str(msg["configuration"]),
            ),)
        rows.append(TraceRow(
            wall_tick=int(msg["wall_tick"]),
            mode=str(msg["mode"]),
            experienced=ExperiencedPresent(entries=experienced),
            forgotten_tick=None,
            schema=None,
        ))
    return WorldlineTrace(rows=tuple(rows))
