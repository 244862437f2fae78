"""Headless entry points: simulate, verify, serve, bench.

Exit codes: 0 success, 1 failed verification check, 2 scenario/usage error,
3 runtime error during simulation (partial trace plus an error row is
written).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import run_bench
from .errors import ChronoscopeError, ScenarioError
from .robot import iterate_rows
from .scenario import load_scenario, resolve_scenario_path
from .trace import (
    WorldlineTrace,
    load_trace,
    serialize_row,
    worldline_summary,
)
from . import verify as verify_mod

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_SCHEMA = 2
EXIT_RUNTIME = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chronoscope",
        description="Deterministic time-shifted-perception simulator",
        epilog="CHRONOSCOPE_SEED is reserved; all generators are deterministic in v1.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario file to a JSONL trace")
    p_sim.add_argument("--scenario", required=True,
                       help="scenario file path or bundled name (e.g. same_present_twice, dominoes)")
    p_sim.add_argument("--out", required=True, help="output trace path (JSONL)")
    p_sim.add_argument("--summary", action="store_true",
                       help="print a two-column wall/experienced worldline afterwards")
    p_sim.set_defaults(func=cmd_simulate)

    p_ver = sub.add_parser("verify", help="run named invariant checks over a trace")
    p_ver.add_argument("--trace", required=True, help="trace path (JSONL)")
    p_ver.add_argument("--checks", default="structure,shift-law",
                       help=f"comma list from: {', '.join(verify_mod.CHECK_NAMES)}")
    p_ver.add_argument("--scenario", default=None,
                       help="scenario for the determinism re-run check")
    p_ver.add_argument("--symbol", default=None,
                       help="configuration the same-present-twice check must find")
    p_ver.set_defaults(func=cmd_verify)

    p_srv = sub.add_parser("serve", help="run the interactive operator service")
    p_srv.add_argument("--scenario", required=True)
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--fast", action="store_true",
                       help="unpaced ticking gated on stream acks (for tests)")
    p_srv.add_argument("--ui", default=None, help="directory of built UI files to serve at /")
    p_srv.set_defaults(func=cmd_serve)

    p_bench = sub.add_parser("bench", help="measure frame-store push/advance throughput")
    p_bench.add_argument("--frames", type=int, default=100_000)
    p_bench.add_argument("--capacity", type=int, default=1_000)
    p_bench.add_argument("--width", type=int, default=16)
    p_bench.set_defaults(func=cmd_bench)

    return parser


def cmd_simulate(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(resolve_scenario_path(args.scenario))
    except ScenarioError as exc:
        print(f"scenario error: {exc.message}", file=sys.stderr)
        return EXIT_SCHEMA
    out = Path(args.out)
    rows = []
    wall_tick = -1
    with out.open("wb") as fh:
        try:
            for row in iterate_rows(
                scenario.variant,
                scenario.timeline,
                scenario.ticks,
                scenario.script,
                clock=scenario.clock,
                depth=scenario.depth,
                width=scenario.width,
                capacity=scenario.capacity,
                auto_return=scenario.auto_return,
            ):
                fh.write(serialize_row(row))
                rows.append(row)
                wall_tick = row.wall_tick
        except ChronoscopeError as exc:
            error_row = {"error": {"code": exc.code, "message": exc.message,
                                   "wall_tick": wall_tick + 1}}
            fh.write(json.dumps(error_row, separators=(",", ":")).encode("utf-8") + b"\n")
            print(f"runtime error at tick {wall_tick + 1}: {exc.code}: {exc.message}",
                  file=sys.stderr)
            return EXIT_RUNTIME
    print(f"wrote {len(rows)} rows to {out}", file=sys.stderr)
    if args.summary:
        print(worldline_summary(WorldlineTrace(rows=tuple(rows))), end="")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    try:
        trace_bytes = Path(args.trace).read_bytes()
    except OSError as exc:
        print(f"cannot read trace: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        trace = load_trace(args.trace)
    except (ValueError, KeyError) as exc:
        print(f"trace is not parseable JSONL: {exc}", file=sys.stderr)
        return EXIT_SCHEMA

    names = [n.strip() for n in args.checks.split(",") if n.strip()]
    unknown = [n for n in names if n not in verify_mod.CHECK_NAMES]
    if unknown:
        print(f"unknown checks: {', '.join(unknown)}", file=sys.stderr)
        return EXIT_SCHEMA

    scenario = None
    if "determinism" in names:
        if args.scenario is None:
            print("determinism check needs --scenario", file=sys.stderr)
            return EXIT_SCHEMA
        try:
            scenario = load_scenario(resolve_scenario_path(args.scenario))
        except ScenarioError as exc:
            print(f"scenario error: {exc.message}", file=sys.stderr)
            return EXIT_SCHEMA

    results = []
    for name in names:
        if name == "structure":
            results.append(verify_mod.check_structure(trace))
        elif name == "shift-law":
            results.append(verify_mod.check_shift_law(trace))
        elif name == "lag":
            results.append(verify_mod.check_lag(trace))
        elif name == "dual-present":
            results.append(verify_mod.check_dual_present(trace))
        elif name == "same-present-twice":
            results.append(verify_mod.check_same_present_twice(trace, args.symbol))
        elif name == "determinism":
            results.append(verify_mod.check_determinism(trace_bytes, scenario))
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK_FAILED


def cmd_serve(args: argparse.Namespace) -> int:
    try:
        scenario = load_scenario(resolve_scenario_path(args.scenario))
    except ScenarioError as exc:
        print(f"scenario error: {exc.message}", file=sys.stderr)
        return EXIT_SCHEMA
    import uvicorn

    from .service import create_app

    app = create_app(scenario, fast=args.fast, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    report = run_bench(args.frames, args.capacity, args.width)
    print(json.dumps(report, indent=2))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
