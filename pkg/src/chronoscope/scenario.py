"""Scenario files: one JSON document describing a complete deterministic run.

A scenario fixes the clock, the robot wiring, the environment timeline, the
run length, frame-store capacity, and a command script. Validation errors
raise ScenarioError (CLI exit code 2); anything that validates here runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .commands import (
    Pause,
    PressReplay,
    Resume,
    command_from_json,
    command_to_json,
)
from .environment import Timeline, dominoes_timeline, timeline_from_json, timeline_to_json
from .errors import ScenarioError
from .robot import (
    AlwaysBehind,
    ClockConfig,
    CommandScript,
    IntermittentlyBehind,
    Model,
    RobotVariant,
    SplitScreen,
    validate_variant,
    warn_if_delay_untested,
)

DEFAULT_DEPTH = 3
DEFAULT_WIDTH = 36
DEFAULT_FOV = 9
DEFAULT_INTERVAL_S = 0.5

VARIANT_NAMES = ("model", "split_screen", "always_behind", "intermittently_behind")


@dataclass(frozen=True)
class Scenario:
    clock: ClockConfig
    variant: RobotVariant
    depth: int
    timeline: Timeline
    ticks: int
    capacity: int
    width: int
    fov: int
    auto_return: bool
    script: CommandScript = field(default_factory=dict)

    def variant_name(self) -> str:
        return {
            Model: "model",
            SplitScreen: "split_screen",
            AlwaysBehind: "always_behind",
            IntermittentlyBehind: "intermittently_behind",
        }[type(self.variant)]


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ScenarioError(msg)


def _parse_variant(robot_obj: dict) -> tuple[RobotVariant, int]:
    _require(isinstance(robot_obj, dict), "robot must be an object")
    name = robot_obj.get("variant")
    _require(name in VARIANT_NAMES, f"robot.variant must be one of {VARIANT_NAMES}, got {name!r}")
    depth = robot_obj.get("depth", DEFAULT_DEPTH)
    _require(isinstance(depth, int) and depth >= 1, "robot.depth must be an integer >= 1")
    try:
        if name == "model":
            variant: RobotVariant = Model()
        elif name == "split_screen":
            variant = SplitScreen(offset_j=int(robot_obj["offset_j"]))
        elif name == "always_behind":
            variant = AlwaysBehind(lag_k=int(robot_obj["lag_k"]))
        else:
            variant = IntermittentlyBehind()
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad robot parameters: {exc}") from exc
    try:
        validate_variant(variant, depth)
    except ValueError as exc:
        raise ScenarioError(str(exc)) from exc
    return variant, depth


def _parse_timeline(obj: object) -> Timeline:
    _require(isinstance(obj, dict), "timeline must be an object")
    if "dominoes" in obj:
        params = obj["dominoes"]
        _require(isinstance(params, dict), "timeline.dominoes must be an object")
        try:
            return dominoes_timeline(
                rows=int(params["rows"]),
                per_row=int(params["per_row"]),
                ticks_per_event=int(params["ticks_per_event"]),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ScenarioError(f"bad dominoes parameters: {exc}") from exc
    try:
        return timeline_from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise ScenarioError(f"bad timeline: {exc}") from exc


def _parse_script(obj: object, ticks: int, variant: RobotVariant,
                  clock: ClockConfig) -> CommandScript:
    if obj is None:
        return {}
    _require(isinstance(obj, list), "script must be a list of {tick, command}")
    script: CommandScript = {}
    for item in obj:
        _require(isinstance(item, dict) and "tick" in item and "command" in item,
                 f"script entries must be {{tick, command}}: {item!r}")
        tick = item["tick"]
        _require(isinstance(tick, int) and 0 <= tick < ticks,
                 f"script tick {tick!r} outside 0..{ticks - 1}")
        cmd = command_from_json(item["command"])
        if isinstance(cmd, (Pause, Resume)):
            raise ScenarioError("pause/resume are interactive pacing commands, not scriptable")
        if isinstance(cmd, PressReplay):
            _require(isinstance(variant, IntermittentlyBehind),
                     "press_replay requires the intermittently_behind variant")
            if cmd.offset_back is not None:
                warn_if_delay_untested(clock, cmd.offset_back, "scripted replay offset_back")
        script[tick] = script.get(tick, ()) + (cmd,)
    return script


_ALLOWED_KEYS = {"v", "clock", "robot", "timeline", "ticks", "capacity",
                 "width", "fov", "auto_return", "script"}


def scenario_from_json(obj: object) -> Scenario:
    _require(isinstance(obj, dict), "scenario must be a JSON object")
    unknown = set(obj) - _ALLOWED_KEYS
    _require(not unknown, f"unknown scenario keys: {sorted(unknown)}")
    clock_obj = obj.get("clock", {})
    _require(isinstance(clock_obj, dict), "clock must be an object")
    try:
        clock = ClockConfig(capture_interval_s=float(
            clock_obj.get("capture_interval_s", DEFAULT_INTERVAL_S)))
    except (TypeError, ValueError) as exc:
        raise ScenarioError(f"bad clock: {exc}") from exc

    variant, depth = _parse_variant(obj.get("robot", {}))
    timeline = _parse_timeline(obj.get("timeline"))

    ticks = obj.get("ticks")
    _require(isinstance(ticks, int) and ticks >= 1, f"ticks must be an integer >= 1, got {ticks!r}")

    capacity = obj.get("capacity", ticks)
    _require(isinstance(capacity, int) and capacity >= 1, "capacity must be an integer >= 1")
    width = obj.get("width", DEFAULT_WIDTH)
    _require(isinstance(width, int) and width >= 8, "width must be an integer >= 8")
    fov = obj.get("fov", DEFAULT_FOV)
    _require(isinstance(fov, int) and 1 <= fov <= width, "fov must be an integer in 1..width")
    auto_return = obj.get("auto_return", True)
    _require(isinstance(auto_return, bool), "auto_return must be a boolean")

    script = _parse_script(obj.get("script"), ticks, variant, clock)
    return Scenario(
        clock=clock,
        variant=variant,
        depth=depth,
        timeline=timeline,
        ticks=ticks,
        capacity=capacity,
        width=width,
        fov=fov,
        auto_return=auto_return,
        script=script,
    )


def scenario_to_json(sc: Scenario) -> dict:
    """Resolved scenario (all defaults filled in), servable as-is."""
    robot: dict = {"variant": sc.variant_name(), "depth": sc.depth}
    if isinstance(sc.variant, SplitScreen):
        robot["offset_j"] = sc.variant.offset_j
    elif isinstance(sc.variant, AlwaysBehind):
        robot["lag_k"] = sc.variant.lag_k
    script = []
    for tick in sorted(sc.script):
        for cmd in sc.script[tick]:
            script.append({"tick": tick, "command": command_to_json(cmd)})
    return {
        "v": 1,
        "clock": {"capture_interval_s": sc.clock.capture_interval_s},
        "robot": robot,
        "timeline": timeline_to_json(sc.timeline),
        "ticks": sc.ticks,
        "capacity": sc.capacity,
        "width": sc.width,
        "fov": sc.fov,
        "auto_return": sc.auto_return,
        "script": script,
    }


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    return scenario_from_json(obj)


def bundled_scenario_names() -> list[str]:
    root = resources.files("chronoscope") / "scenarios"
    return sorted(p.name[:-len(".json")] for p in root.iterdir() if p.name.endswith(".json"))


def resolve_scenario_path(name_or_path: str) -> Path:
    """Accept either a filesystem path or the name of a bundled scenario."""
    p = Path(name_or_path)
    if p.exists():
        return p
    candidate = resources.files("chronoscope") / "scenarios" / f"{name_or_path}.json"
    if candidate.is_file():
        return Path(str(candidate))
    raise ScenarioError(
        f"no such scenario file or bundled name: {name_or_path!r} "
        f"(bundled: {', '.join(bundled_scenario_names())})")
