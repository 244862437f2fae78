import warnings

import pytest

from chronoscope.commands import Pan, PressReplay, ReturnToLive
from chronoscope.environment import make_timeline, render_panorama
from chronoscope.errors import RegistersNotYetFilled
from chronoscope.registers import empty_bank
from chronoscope.replay import FrameStore, ReplaySession
from chronoscope.robot import (
    AlwaysBehind,
    ClockConfig,
    IntermittentlyBehind,
    Model,
    Robot,
    SplitScreen,
    conscious_view,
    run_worldline,
    script_from_pairs,
)
from chronoscope.trace import presents_of, serialize_trace

FIG_TL = make_timeline([(0, "c"), (2, "d"), (4, "e"), (6, "f"), (8, "g")])
CONST_TL = make_timeline([(0, "a")])


def stepped_robot(variant, ticks, *, depth=3, script=None, **kwargs):
    robot = Robot(variant, depth=depth, capacity=max(ticks, 1), **kwargs)
    script = script or {}
    for t in range(ticks):
        label = "abcdef"[t % 6]
        robot.step(render_panorama(label, t, 36), script.get(t, ()))
    return robot


def test_conscious_view_model():
    robot = stepped_robot(Model(), 6)  # bank now [f,e,d,c]
    view = conscious_view(Model(), robot.bank, robot.session, robot.store)
    assert [(e.source, e.experienced_tick, e.configuration) for e in view.entries] == [
        ("P0", 5, "f")]


def test_conscious_view_split_screen():
    robot = stepped_robot(Model(), 6)
    view = conscious_view(SplitScreen(offset_j=2), robot.bank, robot.session, robot.store)
    assert [(e.source, e.configuration) for e in view.entries] == [("P0", "f"), ("P2", "d")]


def test_conscious_view_always_behind_with_future_memory():
    robot = stepped_robot(Model(), 6)
    view = conscious_view(AlwaysBehind(lag_k=3), robot.bank, robot.session, robot.store)
    assert [(e.source, e.configuration) for e in view.entries] == [("P3", "c")]
    # registers ahead of the experienced present hold the robot's "future"
    future = [robot.bank.slots[i].configuration for i in range(3)]
    assert future == ["f", "e", "d"]
    assert all(robot.bank.slots[i].capture_tick > view.entries[0].experienced_tick
               for i in range(3))


def test_conscious_view_strict_on_empty_registers():
    bank = empty_bank(3)
    with pytest.raises(RegistersNotYetFilled):
        conscious_view(Model(), bank, ReplaySession(), FrameStore(4))


def test_model_robot_constant_environment():
    trace = run_worldline(Model(), CONST_TL, 3)
    assert [r.experienced.configurations() for r in trace.rows] == [("a",), ("a",), ("a",)]
    assert [r.mode for r in trace.rows] == ["live", "live", "live"]


def test_split_screen_warm_up_degrades_to_single_present():
    trace = run_worldline(SplitScreen(offset_j=1), CONST_TL, 3)
    assert len(trace.rows[0].experienced.entries) == 1
    assert trace.rows[0].experienced.entries[0].source == "P0"
    assert len(trace.rows[1].experienced.entries) == 2
    assert trace.rows[1].experienced.ticks() == (1, 0)


def test_always_behind_warm_up_rows_are_empty():
    trace = run_worldline(AlwaysBehind(lag_k=3), CONST_TL, 6)
    for t in range(3):
        assert trace.rows[t].experienced.entries == ()
    for t in range(3, 6):
        entries = trace.rows[t].experienced.entries
        assert len(entries) == 1
        assert entries[0].experienced_tick == t - 3
        assert entries[0].source == "P3"


def test_ib_press_replay_targets_past_tick():
    script = script_from_pairs([(10, PressReplay(target=6))])
    trace = run_worldline(IntermittentlyBehind(), CONST_TL, 12, script)
    row10 = trace.rows[10]
    assert row10.mode == "replay"
    assert row10.experienced.entries[0].experienced_tick == 6
    assert row10.experienced.entries[0].source == "replay"
    # replay plays forward one frame per tick
    assert trace.rows[11].experienced.entries[0].experienced_tick == 7


def test_command_applies_before_conscious_view_and_after_capture():
    # pressing at tick t for t-1 proves the fixed step order: the capture at
    # t has already happened (t-1 is strictly past), and the view at t is
    # already the replayed one
    script = script_from_pairs([(5, PressReplay(offset_back=1))])
    trace = run_worldline(IntermittentlyBehind(), CONST_TL, 7, script)
    assert trace.rows[5].mode == "replay"
    assert trace.rows[5].experienced.entries[0].experienced_tick == 4


def test_ib_with_empty_script_equals_model_trace():
    model = run_worldline(Model(), FIG_TL, 10)
    ib = run_worldline(IntermittentlyBehind(), FIG_TL, 10)
    assert model.rows == ib.rows


def test_run_worldline_deterministic_bytes():
    script = script_from_pairs([(5, PressReplay(offset_back=3)), (7, ReturnToLive())])
    a = run_worldline(IntermittentlyBehind(), FIG_TL, 10, script)
    b = run_worldline(IntermittentlyBehind(), FIG_TL, 10, script)
    assert serialize_trace(a) == serialize_trace(b)


def test_scripted_replay_revisits_a_one_tick_interval():
    tl = make_timeline([(0, "c"), (1, "d"), (2, "e"), (3, "f"), (4, "g")])
    script = script_from_pairs([(5, PressReplay(offset_back=3)), (7, ReturnToLive())])
    trace = run_worldline(IntermittentlyBehind(), tl, 8, script)
    walls = presents_of(trace, "e")
    assert walls == [2, 5]
    ticks = [e.experienced_tick for row in trace.rows if row.wall_tick in walls
             for e in row.experienced.entries if e.configuration == "e"]
    assert ticks == [2, 2]


def test_presents_of_absent_symbol():
    trace = run_worldline(Model(), FIG_TL, 6)
    assert presents_of(trace, "z") == []


def test_presents_of_model_two_tick_configuration():
    trace = run_worldline(Model(), FIG_TL, 10)
    # brute-force scan oracle over the trace rows
    expected = [r.wall_tick for r in trace.rows
                if "e" in r.experienced.configurations()]
    assert presents_of(trace, "e") == expected == [4, 5]


def test_forgotten_ticks_and_schema_in_rows():
    trace = run_worldline(Model(), FIG_TL, 7, depth=3)
    assert [r.forgotten_tick for r in trace.rows] == [None, None, None, None, 0, 1, 2]
    assert trace.rows[2].schema.last_configuration == "d"
    assert trace.rows[2].schema.change_count == 1
    assert trace.rows[2].schema.last_change_tick == 2


def test_replay_command_rejected_for_non_ib_variant():
    robot = stepped_robot(Model(), 3)
    with pytest.raises(ValueError):
        robot.apply_command(PressReplay(offset_back=1))


def test_pan_is_a_core_no_op():
    robot = stepped_robot(IntermittentlyBehind(), 3)
    before = (robot.session, len(robot.rows))
    robot.apply_command(Pan(yaw_cells=9))
    assert (robot.session, len(robot.rows)) == before


def test_clock_config_validation():
    with pytest.raises(ValueError):
        ClockConfig(capture_interval_s=0)
    assert ClockConfig(0.25).delay_seconds(4) == 1.0


def test_split_screen_delay_warning_iff_outside_tested_range():
    with pytest.warns(UserWarning):
        Robot(SplitScreen(offset_j=1), clock=ClockConfig(0.04), capacity=4)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        Robot(SplitScreen(offset_j=2), clock=ClockConfig(0.5), capacity=4)


def test_always_behind_delay_warning():
    with pytest.warns(UserWarning):
        Robot(AlwaysBehind(lag_k=7), clock=ClockConfig(0.5), depth=7, capacity=8)


def test_variant_parameters_respect_depth():
    with pytest.raises(ValueError):
        Robot(SplitScreen(offset_j=4), depth=3, capacity=4)
    with pytest.raises(ValueError):
        Robot(AlwaysBehind(lag_k=4), depth=3, capacity=4)
    with pytest.raises(ValueError):
        SplitScreen(offset_j=0)
    with pytest.raises(ValueError):
        AlwaysBehind(lag_k=0)


def test_run_worldline_rejects_zero_ticks():
    with pytest.raises(ValueError):
        run_worldline(Model(), CONST_TL, 0)
