"""Worldline traces: the per-tick record of what the robot experienced.

One JSON object per row, one row per line, with a fixed field order so that
identical runs serialize to identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .environment import ConfigurationSymbol
from .registers import Schema

SOURCE_REPLAY = "replay"


def register_source(i: int) -> str:
    return f"P{i}"


@dataclass(frozen=True)
class PresentEntry:
    """One experienced moment: where it was routed from, which tick it shows,
    and the configuration seen there."""

    source: str  # "P0".."Pn" or "replay"
    experienced_tick: int
    configuration: ConfigurationSymbol


@dataclass(frozen=True)
class ExperiencedPresent:
    """What the conscious process receives this tick.

    Model/always-behind/intermittent variants route exactly one entry; the
    split-screen variant routes two. Empty only on always-behind warm-up rows,
    before the lagged register has filled.
    """

    entries: tuple[PresentEntry, ...]

    def ticks(self) -> tuple[int, ...]:
        return tuple(e.experienced_tick for e in self.entries)

    def configurations(self) -> tuple[ConfigurationSymbol, ...]:
        return tuple(e.configuration for e in self.entries)


@dataclass(frozen=True)
class TraceRow:
    wall_tick: int
    mode: str  # "live" | "replay"
    experienced: ExperiencedPresent
    forgotten_tick: int | None
    schema: Schema | None


@dataclass(frozen=True)
class WorldlineTrace:
    rows: tuple[TraceRow, ...]

    def __len__(self) -> int:
        return len(self.rows)


def row_to_obj(row: TraceRow) -> dict:
    """Fixed-order dict for byte-deterministic JSONL."""
    return {
        "wall_tick": row.wall_tick,
        "mode": row.mode,
        "experienced": [
            {
                "source": e.source,
                "experienced_tick": e.experienced_tick,
                "configuration": e.configuration,
            }
            for e in row.experienced.entries
        ],
        "forgotten_tick": row.forgotten_tick,
        "schema": None if row.schema is None else {
            "last": row.schema.last_configuration,
            "changes": row.schema.change_count,
            "last_change_tick": row.schema.last_change_tick,
        },
    }


def row_from_obj(obj: dict) -> TraceRow:
    entries = tuple(
        PresentEntry(
            source=str(e["source"]),
            experienced_tick=int(e["experienced_tick"]),
            configuration=str(e["configuration"]),
        )
        for e in obj.get("experienced", [])
    )
    schema_obj = obj.get("schema")
    schema = None
    if schema_obj is not None:
        schema = Schema(
            last_configuration=schema_obj.get("last"),
            change_count=int(schema_obj.get("changes", 0)),
            last_change_tick=schema_obj.get("last_change_tick"),
        )
    return TraceRow(
        wall_tick=int(obj["wall_tick"]),
        mode=str(obj["mode"]),
        experienced=ExperiencedPresent(entries=entries),
        forgotten_tick=obj.get("forgotten_tick"),
        schema=schema,
    )


def serialize_row(row: TraceRow) -> bytes:
    return json.dumps(row_to_obj(row), separators=(",", ":")).encode("utf-8") + b"\n"


def serialize_trace(trace: WorldlineTrace) -> bytes:
    return b"".join(serialize_row(r) for r in trace.rows)


def parse_trace(text: str | bytes) -> WorldlineTrace:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        obj = json.loads(line)
        if "error" in obj:
            # Partial traces end with an error row; it carries no experience.
            continue
        rows.append(row_from_obj(obj))
    return WorldlineTrace(rows=tuple(rows))


def load_trace(path: str | Path) -> WorldlineTrace:
    return parse_trace(Path(path).read_bytes())


def presents_of(trace: WorldlineTrace, c: ConfigurationSymbol) -> list[int]:
    """All wall ticks whose experienced entries include configuration c."""
    return [row.wall_tick for row in trace.rows
            if c in row.experienced.configurations()]


def worldline_summary(trace: WorldlineTrace) -> str:
    """Two-column textual worldline: wall tick vs experienced tick(s)."""
    lines = ["wall_tick  experienced_tick"]
    for row in trace.rows:
        ticks = ",".join(str(t) for t in row.experienced.ticks()) or "-"
        marker = " *" if row.mode == "replay" else ""
        lines.append(f"{row.wall_tick:>9}  {ticks}{marker}")
    return "\n".join(lines) + "\n"
