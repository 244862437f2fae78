"""Operator commands, shared by scenario scripts and the service wire format."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ScenarioError


@dataclass(frozen=True)
class PressReplay:
    """Jump into the past: either to an absolute tick or a count of ticks back
    from the live edge at the moment the command is applied."""

    target: int | None = None
    offset_back: int | None = None

    def __post_init__(self):
        if (self.target is None) == (self.offset_back is None):
            raise ValueError("press_replay takes exactly one of target / offset_back")
        if self.offset_back is not None and self.offset_back < 1:
            raise ValueError("offset_back must be >= 1")
        if self.target is not None and self.target < 0:
            raise ValueError("target must be >= 0")

    def resolve_target(self, live_edge: int) -> int:
        return self.target if self.target is not None else live_edge - self.offset_back


@dataclass(frozen=True)
class Pan:
    yaw_cells: int


@dataclass(frozen=True)
class ReturnToLive:
    pass


@dataclass(frozen=True)
class Pause:
    pass


@dataclass(frozen=True)
class Resume:
    pass


OperatorCommand = PressReplay | Pan | ReturnToLive | Pause | Resume

_SIMPLE = {"return_to_live": ReturnToLive, "pause": Pause, "resume": Resume}


def command_from_json(obj: object) -> OperatorCommand:
    """Parse a command dict; raises ScenarioError on anything malformed."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise ScenarioError(f"command must be an object with a 'type': {obj!r}")
    ctype = obj["type"]
    try:
        if ctype == "press_replay":
            target = obj.get("target")
            offset = obj.get("offset_back")
            return PressReplay(
                target=None if target is None else int(target),
                offset_back=None if offset is None else int(offset),
            )
        if ctype == "pan":
            return Pan(yaw_cells=int(obj["yaw_cells"]))
        if ctype in _SIMPLE:
            return _SIMPLE[ctype]()
    except (ValueError, TypeError, KeyError) as exc:
        raise ScenarioError(f"bad {ctype} command: {exc}") from exc
    raise ScenarioError(f"unknown command type {ctype!r}")


def command_to_json(cmd: OperatorCommand) -> dict:
    if isinstance(cmd, PressReplay):
        out: dict = {"type": "press_replay"}
        if cmd.target is not None:
            out["target"] = cmd.target
        else:
            out["offset_back"] = cmd.offset_back
        return out
    if isinstance(cmd, Pan):
        return {"type": "pan", "yaw_cells": cmd.yaw_cells}
    for name, cls in _SIMPLE.items():
        if isinstance(cmd, cls):
            return {"type": name}
    raise TypeError(f"not a command: {cmd!r}")
