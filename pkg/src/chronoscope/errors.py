"""Exception types shared across the simulator."""


class ChronoscopeError(Exception):
    """Base class for all simulator errors."""

    code = "ChronoscopeError"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class NonMonotonicTick(ChronoscopeError):
    """A capture or push arrived with a tick that is not live_edge + 1."""

    code = "NonMonotonicTick"


class RegistersNotYetFilled(ChronoscopeError):
    """A register required by the robot variant has not been filled yet."""

    code = "RegistersNotYetFilled"


class CorruptFrame(ChronoscopeError):
    """Frame checksum does not match its cells, or cells are inconsistent."""

    code = "CorruptFrame"


class ReplayOverrun(ChronoscopeError):
    """A live push would have to evict a frame pinned for replay."""

    code = "ReplayOverrun"


class OutOfRetention(ChronoscopeError):
    """Replay target is outside the retained tick window (evicted or future)."""

    code = "OutOfRetention"


class AlreadyReplaying(ChronoscopeError):
    """enter_replay was called while a replay is already in progress."""

    code = "AlreadyReplaying"


class EmptyStore(ChronoscopeError):
    """Operation requires at least one stored frame."""

    code = "EmptyStore"


class BadFov(ChronoscopeError):
    """Requested field of view is outside 1..W cells."""

    code = "BadFov"


class ScenarioError(ChronoscopeError):
    """Scenario file failed schema validation."""

    code = "ScenarioError"
