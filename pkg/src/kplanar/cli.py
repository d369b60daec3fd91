"""Command-line front end: ``kplanar <subcommand> ...``.

Exit codes: 0 success, 1 validation or check failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io as _io
import json
import sys
import time
from pathlib import Path

from . import algo
from .errors import KPlanarError, NotKPlane
from .gen import GenConfig, gen_random_kplane
from .geometry import GeometricDrawing
from .ingest import ingest_geometric
from .io import parse_drawing, render_svg, serialize_drawing
from .model import DrawingState, build_initial_state, is_initial, is_simple, measures, validate_state


class UsageError(Exception):
    pass


def load_state(data: bytes) -> DrawingState:
    """A DrawingState from geometric or combinatorial file contents."""
    parsed = parse_drawing(data)
    if isinstance(parsed, GeometricDrawing):
        return build_initial_state(ingest_geometric(parsed))
    net, state = parsed
    return state if state is not None else build_initial_state(net)


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str | None, data: bytes) -> None:
    if path is None or path == "-":
        sys.stdout.buffer.write(data)
        return
    try:
        Path(path).write_bytes(data)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _json_bytes(obj) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=1) + "\n").encode("utf-8")


def _summary(state: DrawingState) -> dict:
    m = measures(state)
    return {
        "n": len(state.network.graph.vertices),
        "m": len(state.network.graph.edges),
        "total_crossings": m.total_crossings,
        "max_crossings": m.max_crossings,
        "crossings": {str(e): x for e, x in sorted(m.crossings.items())},
        "simple": is_simple(state),
    }


# --------------------------------------------------------------------------
# subcommands


def cmd_ingest(args) -> int:
    gd = parse_drawing(_read(args.input))
    if not isinstance(gd, GeometricDrawing):
        raise UsageError("ingest expects a geometric drawing")
    state = build_initial_state(ingest_geometric(gd))
    _write(args.output, serialize_drawing(state))
    return 0


def cmd_check(args) -> int:
    state = load_state(_read(args.input))
    rep = validate_state(state)
    simple = is_simple(state)
    ok = rep.ok and (simple or not args.simple)
    out = {
        "ok": ok,
        "valid": rep.ok,
        "checks": [{"name": c.name, "ok": c.ok, "detail": c.detail} for c in rep.checks],
        **_summary(state),
    }
    if args.report:
        _write(args.report, _json_bytes(out))
    for c in rep.checks:
        print(f"{c.name}: {'ok' if c.ok else 'FAIL ' + c.detail}", file=sys.stderr)
    print(f"simple: {simple}", file=sys.stderr)
    return 0 if ok else 1


def cmd_simplify(args) -> int:
    state = load_state(_read(args.input))
    if not is_initial(state):
        state = algo.replanarize(state)
    before = _summary(state)
    if args.algo == "general":
        k = args.k if args.k is not None else max(1, before["max_crossings"])
        if k < 1:
            raise UsageError("-k must be positive")
        result, trace = algo.algorithm1(state, k)
        trace_obj = trace.to_json()
        iterations = len(trace.steps)
    else:
        if before["max_crossings"] > 4:
            print(
                f"error: --algo 4planar needs a 4-plane drawing; an edge has {before['max_crossings']} crossings",
                file=sys.stderr,
            )
            return 1
        k = 4
        result, trace = algo.algorithm2(state)
        trace_obj = trace.to_json()
        iterations = len(trace.phase1) + len(trace.phase2) + len(trace.phase3)
    rep = validate_state(result)
    after = _summary(result)
    report = {
        "algo": args.algo,
        "k": k,
        "f_bound": algo.f_bound(k) if args.algo == "general" else 8,
        "iterations": iterations,
        "before": before,
        "after": after,
        "valid": rep.ok,
    }
    if args.output:
        _write(args.output, serialize_drawing(result))
    if args.report:
        _write(args.report, _json_bytes(report))
    if args.trace:
        _write(args.trace, _json_bytes(trace_obj))
    return 0 if rep.ok and after["simple"] else 1


def cmd_render(args) -> int:
    state = load_state(_read(args.input))
    _write(args.output, render_svg(state))
    return 0


def cmd_gen(args) -> int:
    try:
        cfg = GenConfig(args.n, args.m, args.k, args.seed, args.max_attempts)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _write(args.output, serialize_drawing(gen_random_kplane(cfg)))
    return 0


def cmd_bench(args) -> int:
    files = sorted(Path(args.dir).glob("*.json"))
    _write(args.output, experiment_report(files, args.k, timing=not args.no_timing))
    return 0


# --------------------------------------------------------------------------
# experiment report

REPORT_COLUMNS = [
    "input",
    "n",
    "m",
    "k",
    "max_x_before",
    "max_x_algo1",
    "max_x_algo2",
    "iterations_algo1",
    "operations_algo2",
    "seconds_algo1",
    "seconds_algo2",
    "f_bound",
    "error",
]


def experiment_report(inputs, k: int, timing: bool = True) -> bytes:
    """CSV with one row per input file (paths or ``(name, bytes)`` pairs)."""
    buf = _io.StringIO()
    w = csv.DictWriter(buf, fieldnames=REPORT_COLUMNS, lineterminator="\n")
    w.writeheader()
    fk = algo.f_bound(k)
    for item in inputs:
        name, data = (item if isinstance(item, tuple) else (Path(item).name, Path(item).read_bytes()))
        row = dict.fromkeys(REPORT_COLUMNS, "")
        row.update(input=name, k=k, f_bound=f"{fk:.2f}")
        try:
            state = load_state(data)
            if not is_initial(state):
                state = algo.replanarize(state)
            m0 = measures(state)
            row.update(n=len(state.network.graph.vertices), m=len(state.network.graph.edges), max_x_before=m0.max_crossings)
            t0 = time.perf_counter()
            s1, tr1 = algo.algorithm1(state.copy(), k)
            t1 = time.perf_counter()
            row.update(max_x_algo1=measures(s1).max_crossings, iterations_algo1=len(tr1.steps))
            if timing:
                row["seconds_algo1"] = f"{t1 - t0:.4f}"
            if k <= 4:
                t0 = time.perf_counter()
                s2, tr2 = algo.algorithm2(state.copy())
                t1 = time.perf_counter()
                row.update(
                    max_x_algo2=measures(s2).max_crossings,
                    operations_algo2=len(tr2.phase1) + len(tr2.phase2) + len(tr2.phase3),
                )
                if timing:
                    row["seconds_algo2"] = f"{t1 - t0:.4f}"
        except (KPlanarError, OSError) as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
        w.writerow(row)
    return buf.getvalue().encode("utf-8")


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kplanar", description="Simplify k-plane topological drawings.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="planarize a geometric drawing into a combinatorial file")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", dest="output")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("check", help="validate a drawing")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--simple", action="store_true", help="also require a simple drawing")
    s.add_argument("--report")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("simplify", help="run Algorithm 1 (general) or Algorithm 2 (4planar)")
    s.add_argument("--algo", choices=["general", "4planar"], required=True)
    s.add_argument("-k", type=int, help="local crossing bound of the input (general only)")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", dest="output")
    s.add_argument("--report")
    s.add_argument("--trace", help="write the operation trace as JSON")
    s.add_argument("--seed", type=int, default=0, help="accepted for uniformity; the algorithms are deterministic")
    s.set_defaults(func=cmd_simplify)

    s = sub.add_parser("render", help="draw the current state as SVG")
    s.add_argument("--svg", action="store_true", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", dest="output")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("gen", help="generate a random k-plane drawing")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-attempts", type=int, default=0)
    s.add_argument("--out", dest="output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("bench", help="CSV experiment report over a directory of drawings")
    s.add_argument("--dir", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--out", dest="output")
    s.add_argument("--no-timing", action="store_true", help="leave the wall-time columns empty")
    s.set_defaults(func=cmd_bench)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NotKPlane as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except KPlanarError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
