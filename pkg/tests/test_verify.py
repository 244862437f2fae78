from chronoscope.commands import PressReplay, ReturnToLive
from chronoscope.environment import make_timeline
from chronoscope.robot import (
    AlwaysBehind,
    IntermittentlyBehind,
    Model,
    SplitScreen,
    run_worldline,
    script_from_pairs,
)
from chronoscope.trace import parse_trace, serialize_trace
from chronoscope.verify import (
    check_dual_present,
    check_lag,
    check_same_present_twice,
    check_shift_law,
    check_structure,
    trace_from_stream,
)

TL = make_timeline([(0, "c"), (2, "d"), (4, "e"), (6, "f"), (8, "g")])


def test_structure_and_shift_law_pass_on_model_trace():
    trace = run_worldline(Model(), TL, 10)
    assert check_structure(trace).passed
    assert check_shift_law(trace).passed


def test_shift_law_names_the_failing_tick():
    trace = run_worldline(Model(), TL, 10)
    text = serialize_trace(trace).decode()
    corrupted = text.replace('"wall_tick":4,"mode":"live","experienced":[{"source":"P0","experienced_tick":4',
                             '"wall_tick":4,"mode":"live","experienced":[{"source":"P0","experienced_tick":5')
    assert corrupted != text
    result = check_shift_law(parse_trace(corrupted))
    assert not result.passed
    assert "tick 4" in result.detail


def test_lag_check_reports_constant_lag():
    trace = run_worldline(AlwaysBehind(lag_k=3), TL, 12)
    result = check_lag(trace)
    assert result.passed
    assert "wall_tick - 3" in result.detail


def test_lag_check_fails_on_jitter():
    trace = run_worldline(AlwaysBehind(lag_k=3), TL, 12)
    text = serialize_trace(trace).decode()
    corrupted = text.replace('"experienced_tick":5', '"experienced_tick":6')
    result = check_lag(parse_trace(corrupted))
    assert not result.passed


def test_dual_present_check():
    trace = run_worldline(SplitScreen(offset_j=2), TL, 12)
    result = check_dual_present(trace)
    assert result.passed
    assert "t-2" in result.detail
    assert not check_dual_present(run_worldline(Model(), TL, 6)).passed


def test_same_present_twice_check():
    tl = make_timeline([(0, "c"), (1, "d"), (2, "e"), (3, "f"), (4, "g")])
    script = script_from_pairs([(5, PressReplay(offset_back=3)), (7, ReturnToLive())])
    trace = run_worldline(IntermittentlyBehind(), tl, 8, script)
    assert check_same_present_twice(trace, "e").passed
    assert not check_same_present_twice(trace, "g").passed
    assert not check_same_present_twice(run_worldline(Model(), tl, 5)).passed


def test_structure_rejects_wall_tick_gap():
    trace = run_worldline(Model(), TL, 5)
    text = serialize_trace(trace).decode()
    corrupted = text.replace('"wall_tick":3', '"wall_tick":7')
    assert not check_structure(parse_trace(corrupted)).passed


def test_trace_from_stream_reconstruction():
    messages = [
        {"v": 1, "wall_tick": 0, "mode": "live", "experienced_tick": 0,
         "configuration": "c", "view_cells": [], "yaw_cells": 0, "retention": [0, 0]},
        {"v": 1, "wall_tick": 1, "mode": "replay", "experienced_tick": 0,
         "configuration": "c", "view_cells": [], "yaw_cells": 0, "retention": [0, 1]},
        {"v": 1, "wall_tick": 2, "mode": "live", "experienced_tick": None,
         "configuration": None, "view_cells": [], "yaw_cells": 0, "retention": [0, 2]},
    ]
    trace = trace_from_stream(messages)
    assert [r.mode for r in trace.rows] == ["live", "replay", "live"]
    assert trace.rows[0].experienced.entries[0].source == "P0"
    assert trace.rows[1].experienced.entries[0].source == "replay"
    assert trace.rows[2].experienced.entries == ()
    assert check_structure(trace).passed
    assert check_shift_law(trace).passed
