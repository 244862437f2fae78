"""Frame-store throughput measurement: push/advance over synthetic frames.

Eviction must be O(1) amortized; the report shows per-op cost per decile so a
growing trend is visible, plus the observed store-size ceiling.
"""

from __future__ import annotations

import time

from .environment import render_panorama
from .replay import FrameStore, ReplaySession, advance, push_frame

BENCH_WIDTH = 16
FLATNESS_LIMIT = 3.0


def run_bench(frames: int, capacity: int, width: int = BENCH_WIDTH) -> dict:
    """Push `frames` consecutive frames through a store of `capacity`,
    advancing a live cursor each tick; returns a JSON-able report."""
    if frames < 1 or capacity < 1:
        raise ValueError("frames and capacity must be >= 1")
    store = FrameStore(capacity)
    session = ReplaySession(auto_return=True)
    labels = ("a", "b", "c", "d")

    decile = max(1, frames // 10)
    buckets: list[tuple[int, int]] = []  # (ops, elapsed_ns)
    max_size = 0
    done = 0
    t_start = time.perf_counter_ns()
    while done < frames:
        batch = min(decile, frames - done)
        t0 = time.perf_counter_ns()
        for k in range(done, done + batch):
            frame = render_panorama(labels[k & 3], k, width)
            push_frame(store, frame)
            session, _ = advance(session, store)
            if len(store) > max_size:
                max_size = len(store)
        buckets.append((batch, time.perf_counter_ns() - t0))
        done += batch
    elapsed_ns = time.perf_counter_ns() - t_start

    per_op = [ns / ops for ops, ns in buckets]
    flatness = (per_op[-1] / per_op[0]) if len(per_op) >= 2 and per_op[0] > 0 else 1.0
    return {
        "v": 1,
        "frames": frames,
        "capacity": capacity,
        "width": width,
        "max_store_size": max_size,
        "evictions": max(0, frames - capacity),
        "elapsed_s": elapsed_ns / 1e9,
        "ops_per_s": frames / (elapsed_ns / 1e9) if elapsed_ns else float("inf"),
        "decile_avg_ns": [round(x, 1) for x in per_op],
        "flatness_ratio": round(flatness, 3),
        "flat_within_3x": flatness <= FLATNESS_LIMIT,
    }
