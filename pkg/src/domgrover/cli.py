"""Command-line front end.

Exit codes: 0 success, 1 error (bad input, failed verification), 2 when the
instance has no size-k dominating set.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .counter import CounterError, compare_counters
from .graph import Graph, GraphError, dominating_predicate, load_graph
from .grover import GroverError, run_grover
from .oracle import LayoutError, build_oracle, plan_layout
from .qcount import CountingConfig, CountingError, run_quantum_counting
from .sim import DEFAULT_QUBIT_CAP, SimulationError, UncomputationError, extract_phase_table

EXIT_OK, EXIT_ERROR, EXIT_NO_SOLUTION = 0, 1, 2

_POLICIES = {"exact": "exact", "uniform2": "paper_uniform2"}
_ERRORS = (GraphError, LayoutError, GroverError, CountingError, CounterError, SimulationError, OSError)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value}")
    return value


def _add_graph_args(p: argparse.ArgumentParser, k_required: bool = True) -> None:
    p.add_argument("--graph", required=True, help="graph file (DIMACS 'p edge' or JSON)")
    p.add_argument("--format", choices=("dimacs", "json"), help="default: from file extension")
    p.add_argument("--k", type=_positive, required=k_required, help="dominating set size")
    p.add_argument("--width-policy", choices=tuple(_POLICIES), default="exact")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="domgrover", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="run Grover search for size-k dominating sets")
    _add_graph_args(solve)
    solve.add_argument("--mode", choices=("compressed", "dense"), default="compressed")
    solve.add_argument("--shots", type=_positive, default=1000)
    solve.add_argument("--seed", type=_non_negative, default=0)
    solve.add_argument("--reps", type=_non_negative, help="override the repetition count")
    solve.add_argument("--out", choices=("ascii", "json", "csv"), default="ascii")
    solve.add_argument("--dense-cap", type=_positive, default=DEFAULT_QUBIT_CAP)
    solve.add_argument("--m-source", choices=("classical", "qcount"), default="classical")
    solve.set_defaults(func=cmd_solve)

    verify = sub.add_parser("verify", help="check the oracle against brute force (all k if --k omitted)")
    _add_graph_args(verify, k_required=False)
    verify.add_argument("--drop-uncompute", action="store_true", help=argparse.SUPPRESS)
    verify.set_defaults(func=cmd_verify)

    metrics = sub.add_parser("metrics", help="compare baseline and improved counters")
    metrics.add_argument("--max-width", type=int, required=True)
    metrics.add_argument("--out", choices=("ascii", "json"), default="ascii")
    metrics.set_defaults(func=cmd_metrics)

    count = sub.add_parser("count", help="estimate the solution count by quantum counting")
    _add_graph_args(count)
    count.add_argument("--t", type=int, default=7, help="counting qubits")
    count.add_argument("--shots", type=_positive, default=1000)
    count.add_argument("--seed", type=_non_negative, default=0)
    count.add_argument("--out", choices=("ascii", "json"), default="ascii")
    count.set_defaults(func=cmd_count)
    return parser


def _load(args) -> Graph:
    return load_graph(args.graph, args.format)


def _fmt_set(bits: str) -> str:
    members = [str(i) for i, b in enumerate(reversed(bits)) if b == "1"]
    return "{" + ",".join(members) + "}"


def cmd_solve(args) -> int:
    g = _load(args)
    result = run_grover(
        g,
        args.k,
        mode=args.mode,
        reps=args.reps,
        shots=args.shots,
        seed=args.seed,
        width_policy=_POLICIES[args.width_policy],
        dense_cap=args.dense_cap,
        m_source=args.m_source,
    )
    if args.out == "json":
        print(result.to_json())
    elif args.out == "csv":
        print(result.histogram.to_csv(), end="")
    else:
        plan, b = result.plan, result.layout.breakdown()
        print(f"graph: n={g.n} edges={len(g.edges)} k={args.k}")
        print(
            f"layout: {b['total']} qubits (vertex {b['vertex']}, checker {b['checker']}, "
            f"size {b['size']}, phase {b['phase']})"
        )
        print(f"plan: N={plan.N} M={plan.M} r={plan.r} mode={plan.mode} shots={plan.shots} seed={plan.seed}")
        for note in result.notes:
            print(f"note: {note}")
        print(f"exact target mass: {result.exact_target_mass:.6f}")
        print(f"solutions ({len(result.solutions)}):")
        for bits in result.solutions:
            print(f"  {bits} {_fmt_set(bits)}")
        print("histogram:")
        print(result.histogram.to_ascii())
    return EXIT_NO_SOLUTION if not result.solutions else EXIT_OK


def cmd_verify(args) -> int:
    g = _load(args)
    ks = [args.k] if args.k is not None else range(1, g.n + 1)
    policy = _POLICIES[args.width_policy]
    for k in ks:
        layout = plan_layout(g, k, policy)
        oracle = build_oracle(g, k, layout, uncompute=not args.drop_uncompute)
        try:
            table = extract_phase_table(oracle, layout)
        except UncomputationError as exc:
            print(f"k={k}: uncomputation violation: {exc}")
            return EXIT_ERROR
        for x in range(1 << g.n):
            expected = dominating_predicate(g, k, x)
            if bool(table.table[x]) != expected:
                bits = format(x, f"0{g.n}b")
                print(f"k={k}: mismatch at x={bits}: oracle={int(table.table[x])} expected={int(expected)}")
                return EXIT_ERROR
        print(f"k={k}: ok ({table.count}/{1 << g.n} marked, {layout.total_qubits} qubits, uncomputation verified)")
    return EXIT_OK


def cmd_metrics(args) -> int:
    if args.max_width < 2:
        print("error: --max-width must be at least 2", file=sys.stderr)
        return EXIT_ERROR
    rows = [compare_counters(w) for w in range(2, args.max_width + 1)]
    if args.out == "json":
        print(json.dumps([
            {"width": r.width, "x_delta": r.x_delta, "depth_delta": r.depth_delta,
             "x_baseline": r.census_baseline["X"], "x_improved": r.census_improved["X"],
             "depth_baseline": r.depth_baseline, "depth_improved": r.depth_improved}
            for r in rows
        ], indent=2))
        return EXIT_OK
    print(f"{'width':>5} {'x_delta':>7} {'depth_delta':>11} {'x_base':>6} {'x_impr':>6} {'d_base':>6} {'d_impr':>6}")
    for r in rows:
        print(
            f"{r.width:>5} {r.x_delta:>7} {r.depth_delta:>11} {r.census_baseline['X']:>6} "
            f"{r.census_improved['X']:>6} {r.depth_baseline:>6} {r.depth_improved:>6}"
        )
    return EXIT_OK


def cmd_count(args) -> int:
    cfg = CountingConfig(args.t, args.shots, args.seed)
    g = _load(args)
    result = run_quantum_counting(g, args.k, cfg, _POLICIES[args.width_policy])
    if args.out == "json":
        print(result.to_json())
        return EXIT_OK
    print(f"t={result.t} N={result.N} shots={cfg.shots} seed={cfg.seed}")
    print(f"{'y':>5} {'count':>6} {'M_est':>8}")
    counts = result.outcome_counts()
    for y in sorted(counts, key=lambda y: (-counts[y], y)):
        print(f"{y:>5} {counts[y]:>6} {result.M_estimates[y]:>8.3f}")
    print(f"rounded mode: {result.M_rounded_mode}")
    print(f"classical M: {result.classical_M}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except _ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
