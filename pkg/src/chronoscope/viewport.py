"""Look-around semantics: cut a view window out of a stored panoramic frame.

Orientation is applied at viewing time, never at capture time, so a replayed
frame can be examined at yaws the observer never used while it was live.
"""

from __future__ import annotations

from dataclasses import dataclass

from .environment import PanoramicFrame
from .errors import BadFov


@dataclass(frozen=True)
class Orientation:
    """Cell-quantized azimuth of the observer's gaze."""

    yaw_cells: int = 0


@dataclass(frozen=True)
class ViewWindow:
    """Contiguous (mod W) slice of a frame, centered on the viewing yaw.

    source_tick records which capture instant the cells came from; the cells
    themselves are taken from the frame unmodified.
    """

    cells: tuple[str, ...]
    source_tick: int
    yaw_cells: int


def extract_view(f: PanoramicFrame, o: Orientation, fov_cells: int) -> ViewWindow:
    """Pure window extraction: yaw sits at the window midpoint (left-biased
    for even fov), wrapping around the ring."""
    width = f.width
    if not (1 <= fov_cells <= width):
        raise BadFov(f"fov {fov_cells} outside 1..{width}")
    yaw = o.yaw_cells % width
    start = (yaw - fov_cells // 2) % width
    cells = tuple(f.cells[(start + k) % width] for k in range(fov_cells))
    return ViewWindow(cells=cells, source_tick=f.tick, yaw_cells=yaw)
