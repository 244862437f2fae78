"""chronoscope: a deterministic simulator of robots whose experienced present
is an information-routing choice, with a bounded time-shift replay engine,
look-around viewport, operator service, and CLI."""

from .commands import OperatorCommand, Pan, Pause, PressReplay, Resume, ReturnToLive
from .environment import (
    ConfigurationSymbol,
    PanoramicFrame,
    Timeline,
    configuration_at,
    decode_cells,
    decode_frame,
    dominoes_timeline,
    make_timeline,
    render_panorama,
)
from .errors import (
    AlreadyReplaying,
    BadFov,
    ChronoscopeError,
    CorruptFrame,
    EmptyStore,
    NonMonotonicTick,
    OutOfRetention,
    RegistersNotYetFilled,
    ReplayOverrun,
    ScenarioError,
)
from .registers import Percept, RegisterBank, Schema, capture, empty_bank, predict, update_schema
from .replay import (
    FrameStore,
    ReplaySession,
    advance,
    enter_replay,
    push_frame,
    retention_window,
    return_to_live,
)
from .robot import (
    AlwaysBehind,
    ClockConfig,
    IntermittentlyBehind,
    Model,
    Robot,
    RobotVariant,
    SplitScreen,
    conscious_view,
    run_worldline,
    script_from_pairs,
)
from .trace import (
    ExperiencedPresent,
    PresentEntry,
    TraceRow,
    WorldlineTrace,
    load_trace,
    parse_trace,
    presents_of,
    serialize_trace,
)
from .viewport import Orientation, ViewWindow, extract_view

__version__ = "0.1.0"
