"""Time-shift replay engine: bounded frame store plus Live/Replay cursor.

The store is a ring of consecutively ticked frames with a hard capacity.
Entering replay pins the store from the target tick so the frames being
re-experienced cannot be evicted; a live push that would need to evict a
pinned frame fails loudly with ReplayOverrun rather than growing the ring.
Recording never stops: live frames keep being pushed while replaying.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

from .environment import PanoramicFrame
from .errors import (
    AlreadyReplaying,
    EmptyStore,
    NonMonotonicTick,
    OutOfRetention,
    ReplayOverrun,
)

MODE_LIVE = "live"
MODE_REPLAY = "replay"


class FrameStore:
    """Ring of frames ordered by tick, contiguous within retention."""

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError("capacity must be >= 1")
        self.capacity = capacity
        self._frames: deque[PanoramicFrame] = deque()
        self.pinned_from: int | None = None

    def __len__(self) -> int:
        return len(self._frames)

    @property
    def live_edge(self) -> int | None:
        return self._frames[-1].tick if self._frames else None

    @property
    def oldest_tick(self) -> int | None:
        return self._frames[0].tick if self._frames else None

    def get(self, tick: int) -> PanoramicFrame:
        oldest = self.oldest_tick
        if oldest is None or not (oldest <= tick <= self._frames[-1].tick):
            raise OutOfRetention(f"tick {tick} not retained")
        return self._frames[tick - oldest]

    def pin(self, tick: int) -> None:
        self.pinned_from = tick

    def unpin(self) -> None:
        self.pinned_from = None


def push_frame(store: FrameStore, f: PanoramicFrame) -> FrameStore:
    """Append the next live frame, evicting the oldest unpinned frame if full.

    The failed-push case (ReplayOverrun) leaves the store untouched.
    """
    expected = 0 if store.live_edge is None else store.live_edge + 1
    if f.tick != expected:
        raise NonMonotonicTick(f"pushed tick {f.tick}, expected {expected}")
    if len(store) == store.capacity:
        oldest = store.oldest_tick
        if store.pinned_from is not None and oldest >= store.pinned_from:
            raise ReplayOverrun(
                f"push of tick {f.tick} would evict pinned frame {oldest} "
                f"(pinned_from={store.pinned_from}, capacity={store.capacity})")
        store._frames.popleft()
    store._frames.append(f)
    return store


def retention_window(store: FrameStore) -> tuple[int, int]:
    """Inclusive (oldest_tick, newest_tick) bounds of retained frames."""
    if len(store) == 0:
        raise EmptyStore("no frames retained")
    return (store.oldest_tick, store.live_edge)


@dataclass(frozen=True)
class ReplaySession:
    """Cursor state machine: either at the live edge or walking the past.

    In replay, `entered_at` is the live edge at the moment the observer
    switched and `cursor` the tick about to be re-experienced. auto_return
    controls what happens when the cursor catches the live edge: return to
    live (scripted runs) or hold at the latest past frame (interactive runs).
    """

    mode: str = MODE_LIVE
    entered_at: int | None = None
    cursor: int | None = None
    auto_return: bool = True

    @property
    def replaying(self) -> bool:
        return self.mode == MODE_REPLAY


def enter_replay(session: ReplaySession, store: FrameStore, target_tick: int) -> ReplaySession:
    """Switch from live to replaying `target_tick`, pinning it in the store."""
    if session.replaying:
        raise AlreadyReplaying(f"already replaying (entered at {session.entered_at})")
    if len(store) == 0:
        raise OutOfRetention("store is empty")
    oldest, edge = retention_window(store)
    if not (oldest <= target_tick < edge):
        raise OutOfRetention(
            f"target {target_tick} outside replayable window [{oldest}, {edge})")
    store.pin(target_tick)
    return replace(session, mode=MODE_REPLAY, entered_at=edge, cursor=target_tick)


def return_to_live(session: ReplaySession, store: FrameStore) -> ReplaySession:
    """Leave the past; idempotent when already live. Clears the pin."""
    store.unpin()
    return replace(session, mode=MODE_LIVE, entered_at=None, cursor=None)


def advance(session: ReplaySession, store: FrameStore) -> tuple[ReplaySession, PanoramicFrame]:
    """Emit the frame the observer experiences now and move the cursor.

    Live: the newest frame, state unchanged. Replay: the frame at the cursor,
    bit-identical to the one pushed at capture time, then cursor + 1; when the
    cursor would pass the live edge the session either auto-returns to live or
    holds at the latest past frame.
    """
    if len(store) == 0:
        raise EmptyStore("cannot advance on an empty store")
    if not session.replaying:
        return session, store._frames[-1]
    frame = store.get(session.cursor)
    nxt = session.cursor + 1
    if nxt > store.live_edge:
        if session.auto_return:
            return return_to_live(session, store), frame
        nxt = store.live_edge
    return replace(session, cursor=nxt), frame
