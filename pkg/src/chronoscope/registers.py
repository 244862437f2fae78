"""Register pipeline: the robot's short-term past as a shift queue of percepts.

P_0 holds the newest capture; each new capture shifts every slot right and
the last slot's occupant is forgotten. The unconscious process folds each new
percept into a small schema of the environment (last configuration seen,
how often it changed, when it last changed), which backs a persistence
predictor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .environment import ConfigurationSymbol
from .errors import NonMonotonicTick


@dataclass(frozen=True)
class Percept:
    """One captured frame: the unit of experience.

    frame_id is the frame's checksum, the content fingerprint used by
    replay-exactness checks; the frame itself is retrievable from the frame
    store by capture_tick.
    """

    capture_tick: int
    frame_id: int
    configuration: ConfigurationSymbol

    def __post_init__(self):
        if self.capture_tick < 0:
            raise ValueError("capture_tick must be >= 0")


@dataclass(frozen=True)
class RegisterBank:
    """Ordered slots P_0..P_n; slot i holds the capture from i ticks ago."""

    slots: tuple[Percept | None, ...]

    @property
    def depth(self) -> int:
        """n: the number of memory registers behind P_0."""
        return len(self.slots) - 1

    def filled(self, i: int) -> Percept | None:
        return self.slots[i]


def empty_bank(depth: int = 3) -> RegisterBank:
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return RegisterBank(slots=(None,) * (depth + 1))


def capture(bank: RegisterBank, p: Percept) -> tuple[RegisterBank, Percept | None]:
    """Shift the pipeline right and store `p` in P_0.

    Returns the new bank and the percept forgotten out of P_n (None while the
    bank is still filling).
    """
    head = bank.slots[0]
    expected = 0 if head is None else head.capture_tick + 1
    if p.capture_tick != expected:
        raise NonMonotonicTick(
            f"capture tick {p.capture_tick}, expected {expected}")
    forgotten = bank.slots[-1]
    return RegisterBank(slots=(p,) + bank.slots[:-1]), forgotten


@dataclass(frozen=True)
class Schema:
    """Compact environment model maintained by the unconscious process."""

    last_configuration: ConfigurationSymbol | None = None
    change_count: int = 0
    last_change_tick: int | None = None


def update_schema(s: Schema, p: Percept) -> Schema:
    """Fold one percept in; the change counter ignores the very first capture."""
    changed = s.last_configuration is not None and p.configuration != s.last_configuration
    return Schema(
        last_configuration=p.configuration,
        change_count=s.change_count + (1 if changed else 0),
        last_change_tick=p.capture_tick if changed else s.last_change_tick,
    )


def predict(s: Schema) -> ConfigurationSymbol | None:
    """Persistence prediction: tomorrow looks like today. None before any capture."""
    return s.last_configuration
