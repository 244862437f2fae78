import random

import pytest

from chronoscope.environment import render_panorama
from chronoscope.errors import (
    AlreadyReplaying,
    EmptyStore,
    NonMonotonicTick,
    OutOfRetention,
    ReplayOverrun,
)
from chronoscope.replay import (
    MODE_LIVE,
    MODE_REPLAY,
    FrameStore,
    ReplaySession,
    advance,
    enter_replay,
    push_frame,
    retention_window,
    return_to_live,
)

W = 8


def frame(tick: int):
    return render_panorama("x", tick, W)


def filled_store(capacity: int, upto: int) -> FrameStore:
    store = FrameStore(capacity)
    for t in range(upto + 1):
        push_frame(store, frame(t))
    return store


def test_push_evicts_fifo():
    store = filled_store(4, 4)
    assert retention_window(store) == (1, 4)
    assert len(store) == 4


def test_push_over_pin_fails_loudly_and_leaves_store_unchanged():
    store = filled_store(4, 4)  # retained 1..4
    store.pin(1)
    with pytest.raises(ReplayOverrun):
        push_frame(store, frame(5))
    assert retention_window(store) == (1, 4)
    assert len(store) == 4


def test_push_rejects_gaps():
    store = filled_store(8, 5)
    with pytest.raises(NonMonotonicTick):
        push_frame(store, frame(7))


def test_enter_replay_nominal():
    store = filled_store(8, 10)
    store2 = filled_store(8, 10)
    session = ReplaySession()
    session = enter_replay(session, store, 6)
    assert session.mode == MODE_REPLAY
    assert session.entered_at == 10
    assert session.cursor == 6
    assert store.pinned_from == 6
    del store2


def test_enter_replay_out_of_retention():
    store = filled_store(8, 10)  # retained 3..10
    session = ReplaySession()
    with pytest.raises(OutOfRetention):
        enter_replay(session, store, 2)
    with pytest.raises(OutOfRetention):
        enter_replay(session, store, 10)  # the live edge itself is not the past
    with pytest.raises(OutOfRetention):
        enter_replay(session, store, 11)


def test_enter_replay_twice_rejected():
    store = filled_store(8, 10)
    session = enter_replay(ReplaySession(), store, 6)
    with pytest.raises(AlreadyReplaying):
        enter_replay(session, store, 5)


def test_advance_replay_emits_bit_identical_frame():
    store = filled_store(16, 11)
    pushed_checksums = {t: store.get(t).checksum for t in range(12)}
    session = enter_replay(ReplaySession(), store, 6)
    session, emitted = advance(session, store)
    assert emitted.tick == 6
    assert emitted.checksum == pushed_checksums[6]
    assert session.cursor == 7


def test_advance_live_is_idempotent_on_state():
    store = filled_store(8, 4)
    session = ReplaySession()
    for _ in range(3):
        session, emitted = advance(session, store)
        assert emitted.tick == 4
        assert session.mode == MODE_LIVE


def test_auto_return_when_cursor_catches_live_edge():
    store = filled_store(8, 5)
    session = enter_replay(ReplaySession(auto_return=True), store, 4)
    session, emitted = advance(session, store)
    assert (emitted.tick, session.cursor) == (4, 5)
    session, emitted = advance(session, store)  # cursor at edge: emit, then return
    assert emitted.tick == 5
    assert session.mode == MODE_LIVE
    assert store.pinned_from is None
    session, emitted = advance(session, store)
    assert emitted.tick == 5
    assert session.mode == MODE_LIVE


def test_hold_at_latest_past_frame_without_auto_return():
    store = filled_store(8, 5)
    session = enter_replay(ReplaySession(auto_return=False), store, 5 - 1)
    session, emitted = advance(session, store)
    assert emitted.tick == 4
    session, emitted = advance(session, store)
    assert emitted.tick == 5
    assert session.mode == MODE_REPLAY  # holding, not returning
    session, emitted = advance(session, store)
    assert emitted.tick == 5
    push_frame(store, frame(6))
    # the held frame is experienced once more this tick; playback then resumes
    session, emitted = advance(session, store)
    assert emitted.tick == 5
    assert session.cursor == 6
    session, emitted = advance(session, store)
    assert emitted.tick == 6
    assert session.mode == MODE_REPLAY


def test_return_to_live_idempotent_and_clears_pin():
    store = filled_store(8, 10)
    session = enter_replay(ReplaySession(), store, 6)
    session = return_to_live(session, store)
    assert session.mode == MODE_LIVE
    assert store.pinned_from is None
    again = return_to_live(session, store)
    assert again == session


def test_after_return_behaves_as_never_replayed():
    # state-machine equivalence: replayed-then-returned vs never-replayed
    store_a = filled_store(4, 5)
    session_a = enter_replay(ReplaySession(), store_a, 4)
    session_a, _ = advance(session_a, store_a)
    session_a = return_to_live(session_a, store_a)

    store_b = filled_store(4, 5)
    session_b = ReplaySession()

    for t in range(6, 12):
        push_frame(store_a, frame(t))
        push_frame(store_b, frame(t))
        session_a, fa = advance(session_a, store_a)
        session_b, fb = advance(session_b, store_b)
        assert fa == fb
        assert (session_a.mode, session_a.cursor) == (session_b.mode, session_b.cursor)
        assert retention_window(store_a) == retention_window(store_b)


def test_recording_never_stops_during_replay():
    store = filled_store(32, 9)
    session = enter_replay(ReplaySession(), store, 3)
    for t in range(10, 20):
        push_frame(store, frame(t))
        session, _ = advance(session, store)
    session = return_to_live(session, store)
    oldest, newest = retention_window(store)
    assert newest == 19
    retained = [store.get(t).tick for t in range(oldest, newest + 1)]
    assert retained == list(range(oldest, newest + 1))  # no gaps


def test_retention_window_examples():
    assert retention_window(filled_store(4, 4)) == (1, 4)
    assert retention_window(filled_store(4, 0)) == (0, 0)
    store = filled_store(10, 6)
    store.pin(1)
    assert retention_window(store) == (0, 6)  # capacity 10: nothing evicted
    with pytest.raises(EmptyStore):
        retention_window(FrameStore(4))


def test_store_get_out_of_retention():
    store = filled_store(4, 6)  # retained 3..6
    with pytest.raises(OutOfRetention):
        store.get(2)
    with pytest.raises(OutOfRetention):
        store.get(7)


def test_capacity_validation():
    with pytest.raises(ValueError):
        FrameStore(0)


# ---------------------------------------------------------------------------
# Brute-force reference model: flat list plus explicit rules, no ring logic.
# ---------------------------------------------------------------------------

class ReferenceEngine:
    def __init__(self, capacity: int, auto_return: bool):
        self.capacity = capacity
        self.frames: list = []
        self.pinned_from = None
        self.mode = MODE_LIVE
        self.cursor = None
        self.entered_at = None
        self.auto_return = auto_return

    def push(self, f):
        expected = self.frames[-1].tick + 1 if self.frames else 0
        if f.tick != expected:
            raise NonMonotonicTick("ref")
        if len(self.frames) == self.capacity:
            if self.pinned_from is not None and self.frames[0].tick >= self.pinned_from:
                raise ReplayOverrun("ref")
            self.frames = self.frames[1:]
        self.frames = self.frames + [f]

    def enter(self, target):
        if self.mode == MODE_REPLAY:
            raise AlreadyReplaying("ref")
        if not self.frames:
            raise OutOfRetention("ref")
        if not (self.frames[0].tick <= target < self.frames[-1].tick):
            raise OutOfRetention("ref")
        self.pinned_from = target
        self.mode = MODE_REPLAY
        self.cursor = target
        self.entered_at = self.frames[-1].tick

    def ret(self):
        self.pinned_from = None
        self.mode = MODE_LIVE
        self.cursor = None
        self.entered_at = None

    def advance(self):
        if not self.frames:
            raise EmptyStore("ref")
        if self.mode == MODE_LIVE:
            return self.frames[-1]
        emitted = next(f for f in self.frames if f.tick == self.cursor)
        nxt = self.cursor + 1
        if nxt > self.frames[-1].tick:
            if self.auto_return:
                self.ret()
                return emitted
            nxt = self.frames[-1].tick
        self.cursor = nxt
        return emitted

    def window(self):
        if not self.frames:
            raise EmptyStore("ref")
        return (self.frames[0].tick, self.frames[-1].tick)


def _run_fuzz_sequence(seed: int, n_ops: int) -> None:
    rng = random.Random(seed)
    capacity = rng.randint(1, 12)
    auto_return = rng.random() < 0.5
    store = FrameStore(capacity)
    session = ReplaySession(auto_return=auto_return)
    ref = ReferenceEngine(capacity, auto_return)
    next_tick = 0

    for _ in range(n_ops):
        op = rng.choices(("push", "advance", "enter", "return", "window"),
                         weights=(50, 25, 12, 8, 5))[0]
        if op == "push":
            f = frame(next_tick)
            real_exc = ref_exc = None
            try:
                push_frame(store, f)
            except Exception as exc:  # noqa: BLE001 - comparing behavior
                real_exc = type(exc)
            try:
                ref.push(f)
            except Exception as exc:  # noqa: BLE001
                ref_exc = type(exc)
            assert real_exc == ref_exc
            if real_exc is None:
                next_tick += 1
        elif op == "advance":
            real_exc = ref_exc = None
            real_frame = ref_frame = None
            try:
                session, real_frame = advance(session, store)
            except Exception as exc:  # noqa: BLE001
                real_exc = type(exc)
            try:
                ref_frame = ref.advance()
            except Exception as exc:  # noqa: BLE001
                ref_exc = type(exc)
            assert real_exc == ref_exc
            assert real_frame == ref_frame
        elif op == "enter":
            target = rng.randint(-2, next_tick + 2)
            real_exc = ref_exc = None
            try:
                session = enter_replay(session, store, target)
            except Exception as exc:  # noqa: BLE001
                real_exc = type(exc)
            try:
                ref.enter(target)
            except Exception as exc:  # noqa: BLE001
                ref_exc = type(exc)
            assert real_exc == ref_exc
        elif op == "return":
            session = return_to_live(session, store)
            ref.ret()
        else:
            real_exc = ref_exc = None
            real_win = ref_win = None
            try:
                real_win = retention_window(store)
            except Exception as exc:  # noqa: BLE001
                real_exc = type(exc)
            try:
                ref_win = ref.window()
            except Exception as exc:  # noqa: BLE001
                ref_exc = type(exc)
            assert real_exc == ref_exc
            assert real_win == ref_win

        # shadow-state agreement at every step
        assert len(store) <= capacity
        assert len(store) == len(ref.frames)
        assert store.pinned_from == ref.pinned_from
        assert (session.mode, session.cursor, session.entered_at) == (
            ref.mode, ref.cursor, ref.entered_at)
        if session.mode == MODE_REPLAY:
            oldest, newest = retention_window(store)
            assert oldest <= session.cursor <= newest


@pytest.mark.parametrize("seed", range(20))
def test_model_equivalence_fuzz(seed):
    _run_fuzz_sequence(seed, 200)
