"""Robot variants and the per-tick step: capture, shift, schema, command, view.

The robot's "present" is whatever the conscious process is wired to receive:
the newest register (model), the newest plus a delayed register (split
screen), only a delayed register (always behind), or a switchable live/replay
cursor (intermittently behind). Each step appends one worldline trace row.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .commands import OperatorCommand, Pan, Pause, PressReplay, Resume, ReturnToLive
from .environment import (
    PanoramicFrame,
    Timeline,
    configuration_at,
    decode_frame,
    render_panorama,
)
from .errors import OutOfRetention, RegistersNotYetFilled
from .registers import (
    Percept,
    RegisterBank,
    Schema,
    capture,
    empty_bank,
    update_schema,
)
from .replay import (
    MODE_LIVE,
    MODE_REPLAY,
    FrameStore,
    ReplaySession,
    advance,
    enter_replay,
    push_frame,
    return_to_live,
)
from .trace import (
    SOURCE_REPLAY,
    ExperiencedPresent,
    PresentEntry,
    TraceRow,
    WorldlineTrace,
    register_source,
)

TESTED_DELAY_RANGE_S = (0.1, 3.0)


@dataclass(frozen=True)
class ClockConfig:
    """Wall seconds per tick; maps integer ticks to proper time."""

    capture_interval_s: float = 0.5

    def __post_init__(self):
        if self.capture_interval_s <= 0:
            raise ValueError("capture_interval_s must be > 0")

    def delay_seconds(self, offset_ticks: int) -> float:
        return offset_ticks * self.capture_interval_s


def warn_if_delay_untested(clock: ClockConfig, offset_ticks: int, what: str) -> None:
    """Delays realized outside the empirically tested 0.1-3.0 s range still
    run, but the configuration is flagged."""
    lo, hi = TESTED_DELAY_RANGE_S
    secs = clock.delay_seconds(offset_ticks)
    if not (lo <= secs <= hi):
        warnings.warn(
            f"{what} realizes a delay of {secs:g} s "
            f"(offset {offset_ticks} x {clock.capture_interval_s:g} s), "
            f"outside the tested range [{lo}, {hi}] s",
            UserWarning,
            stacklevel=3,
        )


@dataclass(frozen=True)
class Model:
    """Baseline wiring: the conscious process sees P_0 only."""


@dataclass(frozen=True)
class SplitScreen:
    """Two equally vivid presents: P_0 and P_j, j ticks apart."""

    offset_j: int

    def __post_init__(self):
        if self.offset_j < 1:
            raise ValueError("offset_j must be >= 1")


@dataclass(frozen=True)
class AlwaysBehind:
    """The present lags by a constant K ticks; P_0..P_{K-1} are memories of
    the robot's own future."""

    lag_k: int

    def __post_init__(self):
        if self.lag_k < 1:
            raise ValueError("lag_k must be >= 1")


@dataclass(frozen=True)
class IntermittentlyBehind:
    """Live by default; the operator may switch into the recorded past."""


RobotVariant = Model | SplitScreen | AlwaysBehind | IntermittentlyBehind


def validate_variant(variant: RobotVariant, depth: int) -> None:
    if isinstance(variant, SplitScreen) and variant.offset_j > depth:
        raise ValueError(f"offset_j {variant.offset_j} exceeds register depth {depth}")
    if isinstance(variant, AlwaysBehind) and variant.lag_k > depth:
        raise ValueError(f"lag_k {variant.lag_k} exceeds register depth {depth}")


def _register_entry(bank: RegisterBank, i: int) -> PresentEntry:
    p = bank.slots[i]
    if p is None:
        raise RegistersNotYetFilled(f"register P{i} is still empty")
    return PresentEntry(
        source=register_source(i),
        experienced_tick=p.capture_tick,
        configuration=p.configuration,
    )


def conscious_view(
    variant: RobotVariant,
    bank: RegisterBank,
    session: ReplaySession,
    store: FrameStore,
) -> ExperiencedPresent:
    """What the conscious process receives right now, by variant wiring.

    Strict: raises RegistersNotYetFilled if a required register is empty.
    The intermittent variant in replay peeks the cursor frame without moving
    it; stepping owns cursor motion.
    """
    if isinstance(variant, Model):
        return ExperiencedPresent(entries=(_register_entry(bank, 0),))
    if isinstance(variant, SplitScreen):
        return ExperiencedPresent(
            entries=(_register_entry(bank, 0), _register_entry(bank, variant.offset_j)))
    if isinstance(variant, AlwaysBehind):
        return ExperiencedPresent(entries=(_register_entry(bank, variant.lag_k),))
    # IntermittentlyBehind
    if not session.replaying:
        return ExperiencedPresent(entries=(_register_entry(bank, 0),))
    frame = store.get(session.cursor)
    return ExperiencedPresent(entries=(
        PresentEntry(
            source=SOURCE_REPLAY,
            experienced_tick=frame.tick,
            configuration=decode_frame(frame),
        ),
    ))


class Robot:
    """Mutable stepper over immutable state snapshots; one tick per step.

    Step order within a tick is fixed: capture/shift, schema update, operator
    command, conscious view, trace record.
    """

    def __init__(
        self,
        variant: RobotVariant,
        *,
        clock: ClockConfig | None = None,
        depth: int = 3,
        capacity: int = 64,
        auto_return: bool = True,
    ):
        clock = clock or ClockConfig()
        validate_variant(variant, depth)
        if isinstance(variant, SplitScreen):
            warn_if_delay_untested(clock, variant.offset_j, "split-screen offset_j")
        elif isinstance(variant, AlwaysBehind):
            warn_if_delay_untested(clock, variant.lag_k, "always-behind lag_k")
        self.variant = variant
        self.clock = clock
        self.bank = empty_bank(depth)
        self.schema = Schema()
        self.store = FrameStore(capacity)
        self.session = ReplaySession(auto_return=auto_return)
        self.rows: list[TraceRow] = []
        self.next_tick = 0
        # Frame the conscious process looked at this tick; the service cuts
        # its view window out of this.
        self.last_view_frame: PanoramicFrame | None = None

    @property
    def wall_tick(self) -> int:
        """Tick of the most recently completed step, -1 before the first."""
        return self.next_tick - 1

    def apply_command(self, cmd: OperatorCommand) -> None:
        """Route one operator command; replay routing needs the intermittent
        variant. Pan/Pause/Resume are presentation and pacing concerns owned
        by the service layer and do nothing here."""
        if isinstance(cmd, PressReplay):
            if not isinstance(self.variant, IntermittentlyBehind):
                raise ValueError("press_replay requires the intermittently-behind variant")
            if self.store.live_edge is None:
                raise OutOfRetention("nothing captured yet")
            target = cmd.resolve_target(self.store.live_edge)
            self.session = enter_replay(self.session, self.store, target)
        elif isinstance(cmd, ReturnToLive):
            self.session = return_to_live(self.session, self.store)
        elif isinstance(cmd, (Pan, Pause, Resume)):
            pass
        else:
            raise ValueError(f"unknown command {cmd!r}")

    def _view(self, env_frame: PanoramicFrame) -> tuple[str, ExperiencedPresent, PanoramicFrame | None]:
        if isinstance(self.variant, IntermittentlyBehind):
            mode = MODE_REPLAY if self.session.replaying else MODE_LIVE
            experienced = conscious_view(self.variant, self.bank, self.session, self.store)
            self.session, viewed = advance(self.session, self.store)
            return mode, experienced, viewed
        try:
            experienced = conscious_view(self.variant, self.bank, self.session, self.store)
        except RegistersNotYetFilled:
            if isinstance(self.variant, SplitScreen):
                # Warm-up: degrade to the best available single present.
                experienced = ExperiencedPresent(entries=(_register_entry(self.bank, 0),))
            elif isinstance(self.variant, AlwaysBehind):
                # Warm-up: nothing is experienced yet; the row still exists.
                experienced = ExperiencedPresent(entries=())
            else:
                raise
        viewed: PanoramicFrame | None = None
        if experienced.entries:
            first = experienced.entries[0]
            if first.experienced_tick == env_frame.tick:
                viewed = env_frame
            else:
                try:
                    viewed = self.store.get(first.experienced_tick)
                except OutOfRetention:
                    viewed = None
        return MODE_LIVE, experienced, viewed

    def step(self, env_frame: PanoramicFrame, commands: tuple[OperatorCommand, ...] = ()) -> TraceRow:
        """Advance one tick: returns (and records) the new trace row."""
        self.store = push_frame(self.store, env_frame)
        percept = Percept(
            capture_tick=env_frame.tick,
            frame_id=env_frame.checksum,
            configuration=decode_frame(env_frame),
        )
        self.bank, forgotten = capture(self.bank, percept)
        self.schema = update_schema(self.schema, percept)
        for cmd in commands:
            self.apply_command(cmd)
        mode, experienced, viewed = self._view(env_frame)
        self.last_view_frame = viewed
        row = TraceRow(
            wall_tick=env_frame.tick,
            mode=mode,
            experienced=experienced,
            forgotten_tick=None if forgotten is None else forgotten.capture_tick,
            schema=self.schema,
        )
        self.rows.append(row)
        self.next_tick = env_frame.tick + 1
        return row

    def trace(self) -> WorldlineTrace:
        return WorldlineTrace(rows=tuple(self.rows))


CommandScript = dict[int, tuple[OperatorCommand, ...]]


def script_from_pairs(pairs: list[tuple[int, OperatorCommand]]) -> CommandScript:
    script: CommandScript = {}
    for tick, cmd in pairs:
        script[tick] = script.get(tick, ()) + (cmd,)
    return script


def iterate_rows(
    variant: RobotVariant,
    timeline: Timeline,
    ticks: int,
    script: CommandScript | None = None,
    *,
    clock: ClockConfig | None = None,
    depth: int = 3,
    width: int = 36,
    capacity: int | None = None,
    auto_return: bool = True,
):
    """Yield trace rows one tick at a time; capacity defaults to the run length."""
    if ticks < 1:
        raise ValueError("ticks must be >= 1")
    script = script or {}
    robot = Robot(
        variant,
        clock=clock,
        depth=depth,
        capacity=ticks if capacity is None else capacity,
        auto_return=auto_return,
    )
    for t in range(ticks):
        frame = render_panorama(configuration_at(timeline, t), t, width)
        yield robot.step(frame, script.get(t, ()))


def run_worldline(
    variant: RobotVariant,
    timeline: Timeline,
    ticks: int,
    script: CommandScript | None = None,
    **kwargs,
) -> WorldlineTrace:
    """Deterministic trace of length `ticks`: same inputs, same bytes."""
    return WorldlineTrace(rows=tuple(iterate_rows(variant, timeline, ticks, script, **kwargs)))
