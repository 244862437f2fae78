"""Time-varying external scene: configuration timelines and panoramic frames.

The external object (a card stack, rows of dominoes) is modeled as a
piecewise-constant timeline of configuration symbols. Each tick the scene is
rendered into a synthetic panoramic frame: a ring of W glyph cells, each
carrying the configuration label plus its azimuth, so the configuration is
recoverable from any contiguous slice of the ring (partial-view decoding).
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from pathlib import Path

from .errors import CorruptFrame

# A configuration symbol is a short opaque label such as "e" or "row2.3".
ConfigurationSymbol = str

MIN_PANORAMA_WIDTH = 8

# Reserved by the cell glyph format ("<label>@<azimuth>") and the checksum
# payload layout.
_RESERVED_CHARS = ("@", "\x1e", "\x1f")


def _check_label(label: ConfigurationSymbol) -> None:
    if not label:
        raise ValueError("configuration label must be non-empty")
    for ch in _RESERVED_CHARS:
        if ch in label:
            raise ValueError(f"configuration label may not contain {ch!r}: {label!r}")


@dataclass(frozen=True)
class Timeline:
    """Piecewise-constant configuration history, total from tick 0.

    segments are (start_tick, configuration) pairs with strictly increasing
    start ticks, the first at 0; the final segment extends forever.
    """

    segments: tuple[tuple[int, ConfigurationSymbol], ...]
    alphabet: frozenset[ConfigurationSymbol]

    def __post_init__(self):
        if not self.segments:
            raise ValueError("timeline needs at least one segment")
        if self.segments[0][0] != 0:
            raise ValueError("first segment must start at tick 0")
        prev = -1
        for start, label in self.segments:
            if start <= prev:
                raise ValueError("segment start_ticks must be strictly increasing")
            prev = start
            _check_label(label)
            if label not in self.alphabet:
                raise ValueError(f"segment label {label!r} not in alphabet")


def make_timeline(segments: list[tuple[int, ConfigurationSymbol]],
                  alphabet: list[ConfigurationSymbol] | None = None) -> Timeline:
    """Build a Timeline; the alphabet defaults to the labels used."""
    labels = [label for _, label in segments]
    if alphabet is None:
        alphabet = labels
    return Timeline(segments=tuple((int(t), str(c)) for t, c in segments),
                    alphabet=frozenset(alphabet))


def configuration_at(tl: Timeline, tick: int) -> ConfigurationSymbol:
    """Configuration of the last segment with start_tick <= tick."""
    if tick < 0:
        raise ValueError("tick must be >= 0")
    current = tl.segments[0][1]
    for start, label in tl.segments:
        if start > tick:
            break
        current = label
    return current


def dominoes_timeline(rows: int, per_row: int, ticks_per_event: int) -> Timeline:
    """Timeline of an experimenter laying down `rows` rows of dominoes.

    rows x per_row segments labeled row{r}.{k}, each ticks_per_event long.
    """
    if rows < 1 or per_row < 1 or ticks_per_event < 1:
        raise ValueError("dominoes parameters must all be >= 1")
    segments = []
    tick = 0
    for r in range(1, rows + 1):
        for k in range(1, per_row + 1):
            segments.append((tick, f"row{r}.{k}"))
            tick += ticks_per_event
    return make_timeline(segments)


def timeline_to_json(tl: Timeline) -> dict:
    return {
        "alphabet": sorted(tl.alphabet),
        "segments": [[start, label] for start, label in tl.segments],
    }


def timeline_from_json(obj: dict) -> Timeline:
    segments = [(int(s[0]), str(s[1])) for s in obj["segments"]]
    alphabet = [str(a) for a in obj["alphabet"]]
    return make_timeline(segments, alphabet)


def load_timeline(path: str | Path) -> Timeline:
    return timeline_from_json(json.loads(Path(path).read_text()))


@dataclass(frozen=True)
class PanoramicFrame:
    """One synthetic 360-degree capture: W glyph cells plus a tick stamp.

    The checksum covers both the cells and the tick, so two captures of an
    unchanged scene are still distinguishable frames; replay-exactness checks
    compare checksums to bind frames to their capture instants.
    """

    tick: int
    cells: tuple[str, ...]
    checksum: int

    @property
    def width(self) -> int:
        return len(self.cells)


def _frame_checksum(tick: int, cells: tuple[str, ...]) -> int:
    payload = str(tick).encode("utf-8") + b"\x1e" + "\x1f".join(cells).encode("utf-8")
    return zlib.crc32(payload)


def render_panorama(c: ConfigurationSymbol, tick: int, width: int) -> PanoramicFrame:
    """Deterministically render configuration `c` as a ring of glyph cells.

    Every cell carries the label and its azimuth index, so any contiguous
    window of the ring (down to a single cell, and in particular any quarter)
    decodes back to the configuration.
    """
    _check_label(c)
    if width < MIN_PANORAMA_WIDTH:
        raise ValueError(f"panorama width must be >= {MIN_PANORAMA_WIDTH}")
    if tick < 0:
        raise ValueError("tick must be >= 0")
    cells = tuple(f"{c}@{i}" for i in range(width))
    return PanoramicFrame(tick=tick, cells=cells, checksum=_frame_checksum(tick, cells))


def decode_cells(cells: tuple[str, ...] | list[str]) -> ConfigurationSymbol:
    """Recover the configuration from any contiguous run of glyph cells.

    Raises CorruptFrame if the cells disagree about the label or are not
    well-formed glyphs.
    """
    if not cells:
        raise CorruptFrame("no cells to decode")
    label: str | None = None
    for cell in cells:
        head, sep, azimuth = cell.rpartition("@")
        if not sep or not head or not azimuth.isdigit():
            raise CorruptFrame(f"malformed glyph cell {cell!r}")
        if label is None:
            label = head
        elif head != label:
            raise CorruptFrame(f"cells disagree: {label!r} vs {head!r}")
    assert label is not None
    return label


def decode_frame(f: PanoramicFrame) -> ConfigurationSymbol:
    """Inverse of render_panorama on the configuration component.

    Verifies the checksum first; a frame whose bytes were altered after
    rendering raises CorruptFrame.
    """
    if _frame_checksum(f.tick, f.cells) != f.checksum:
        raise CorruptFrame(f"checksum mismatch for frame at tick {f.tick}")
    label = decode_cells(f.cells)
    for i, cell in enumerate(f.cells):
        if cell != f"{label}@{i}":
            raise CorruptFrame(f"cell {i} out of place: {cell!r}")
    return label
