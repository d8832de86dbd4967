"""Command-line harness.

    dcqdca partition       --gen ws:16,4,0.3 --k 3 --out run/
    dcqdca solve-single    --graph p5.el --k 2 --budget 6 --seed 1 --out run/
    dcqdca solve-iterative --gen ws:60,4,0.3 --k 8 --sweeps 2 --seed 1 --out run/
    dcqdca exact           --graph p5.el
    dcqdca inspect         --graph p5.el --k 2 --budget 2 --out run/
    dcqdca compare         runA/report.json runB/report.json
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from pathlib import Path

import numpy as np

from dcqdca.ansatz import (
    ScheduleError,
    build_interleaved_schedule,
    build_schedule,
    cut_count,
    sparsify_interleaved,
    sparsify_separator,
)
from dcqdca.graph import Graph, GraphError, OracleLimitError, exact_mis, load_graph, parse_generator
from dcqdca.optimize import OptimizationError, OptimizerConfig, initial_point
from dcqdca.partition import (
    DEFAULT_EPSILON,
    PartitionError,
    edge_partition,
    replication_cost,
    validate_partition,
)
from dcqdca.simulator import MAX_QUBITS, SimulationError, simulate
from dcqdca.solver import SolverConfig, SolverError, choose_k, solve_iterative, solve_single

logger = logging.getLogger("dcqdca")

COMPARE_FIELDS = ["weight", "approx_ratio", "inactive_mixers", "cut_count", "circuits_run"]


class CompareError(ValueError):
    pass


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph", help="graph file (edge list or Matrix Market)")
    src.add_argument("--gen", help="generator: reg:n,d or ws:n,k,beta")
    p.add_argument("--format", choices=["edge-list", "matrix-market"], default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output directory")


def _add_solver_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--auto-k", action="store_true",
                   help="pick the smallest k whose local subproblems fit --max-qubits")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p.add_argument("--budget", type=int, default=6)
    p.add_argument("--shots", type=int, default=1024)
    p.add_argument("--sweeps", type=int, default=2)
    p.add_argument("--layers", type=int, default=1)
    p.add_argument("--max-evals", type=int, default=500)
    p.add_argument("--restarts", type=int, default=3)
    p.add_argument("--max-qubits", type=int, default=MAX_QUBITS)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dcqdca", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="mode", required=True)

    p = sub.add_parser("partition", help="edge-partition a graph and report its separator")
    _add_graph_args(p)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)

    for name in ("solve-single", "solve-iterative"):
        p = sub.add_parser(name)
        _add_graph_args(p)
        _add_solver_args(p)
        if name == "solve-single":
            p.add_argument("--no-defer", action="store_true",
                           help="interleave separator mixers instead of deferring them")

    p = sub.add_parser("exact", help="exact maximum independent set")
    _add_graph_args(p)

    p = sub.add_parser("inspect", help="dump the mixer schedule and a state snapshot")
    _add_graph_args(p)
    _add_solver_args(p)
    p.add_argument("--top", type=int, default=10, help="amplitudes to include in state.json")

    p = sub.add_parser("compare", help="side-by-side comparison of two report.json files")
    p.add_argument("reports", nargs=2)
    p.add_argument("--out", default=None)
    return parser


def _load(args) -> tuple[Graph, str]:
    if args.gen:
        return parse_generator(args.gen, args.seed), args.gen
    fmt = args.format
    if fmt is None:
        fmt = "matrix-market" if args.graph.endswith(".mtx") else "edge-list"
    g, _ = load_graph(args.graph, fmt)
    return g, args.graph


def _solver_config(args, g: Graph) -> SolverConfig:
    k = args.k
    if getattr(args, "auto_k", False):
        k = choose_k(g, args.max_qubits, args.epsilon, args.seed)
    return SolverConfig(
        k=k,
        epsilon=args.epsilon,
        budget=args.budget,
        shots=args.shots,
        sweeps=args.sweeps,
        layers=args.layers,
        optimizer=OptimizerConfig(max_evals=args.max_evals, restarts=args.restarts, seed=args.seed),
        seed=args.seed,
        max_qubits=args.max_qubits,
        deferred=not getattr(args, "no_defer", False),
    )


def _oracle(g: Graph):
    try:
        return exact_mis(g)
    except OracleLimitError as exc:
        logger.info("%s; approximation ratio skipped", exc)
        return None


def _out_dir(args) -> Path:
    out = Path(args.out or ".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_partition(args) -> int:
    g, _ = _load(args)
    p = edge_partition(g, args.k, args.epsilon, args.seed)
    problems = validate_partition(g, p)
    (_out_dir(args) / "partition.json").write_text(p.to_json() + "\n")
    print(
        f"k={p.k} separator={len(p.separator)} parts={[len(x) for x in p.parts]} "
        f"replication={replication_cost(g, p.labels)} violations={len(problems)}"
    )
    return 0 if not problems else 1


def cmd_solve(args) -> int:
    g, source = _load(args)
    cfg = _solver_config(args, g)
    oracle = _oracle(g)
    solve = solve_single if args.mode == "solve-single" else solve_iterative
    report = solve(g, cfg, oracle)
    report.graph["source"] = source
    report.write(_out_dir(args))
    print(report.summary())
    return 0


def cmd_exact(args) -> int:
    g, _ = _load(args)
    sol = exact_mis(g)
    if args.out:
        (_out_dir(args) / "exact.json").write_text(
            json.dumps({"weight": sol.weight, "vertices": sol.vertices}, indent=2) + "\n"
        )
    print(f"weight={sol.weight}")
    return 0


def cmd_inspect(args) -> int:
    g, _ = _load(args)
    cfg = _solver_config(args, g)
    p = edge_partition(g, min(cfg.k, g.m), cfg.epsilon, cfg.seed)
    S = set(p.separator)
    parts = [set(x) for x in p.parts]
    if cfg.deferred:
        kept, _ = sparsify_separator(g, S, cfg.budget)
        sched = build_schedule(g, parts, kept, cfg.layers, separator_inactive=S - kept)
    else:
        kept = sparsify_interleaved(g, parts, S, cfg.budget)
        sched = build_interleaved_schedule(g, parts, kept, cfg.layers, S - kept)
    out = _out_dir(args)
    dump = sched.to_dict()
    dump["cut_count"] = cut_count(g, kept, S)
    (out / "schedule.json").write_text(json.dumps(dump, indent=2) + "\n")
    (out / "partition.json").write_text(p.to_json() + "\n")
    if sched.n_qubits <= cfg.max_qubits and sched.active_slots:
        x0 = initial_point(cfg.optimizer, sched.num_params, np.random.default_rng(cfg.seed))
        state = simulate(sched, x0)
        (out / "state.json").write_text(
            json.dumps({"params": x0.tolist(), "qubits": list(sched.qubits),
                        "top": state.top(args.top)}, indent=2) + "\n"
        )
    print(
        f"qubits={sched.n_qubits} active={len(sched.active_slots)} inactive={sched.inactive_count} "
        f"params={sched.num_params} cuts={dump['cut_count']}"
    )
    return 0


def compare_reports(a: dict, b: dict) -> list[dict]:
    if a["graph"]["fingerprint"] != b["graph"]["fingerprint"]:
        raise CompareError("reports describe different graphs")
    rows = []
    for f in COMPARE_FIELDS:
        va, vb = a.get(f), b.get(f)
        delta = None if va is None or vb is None else vb - va
        rows.append({"metric": f, "a": va, "b": vb, "delta": delta})
    return rows


def cmd_compare(args) -> int:
    a, b = (json.loads(Path(r).read_text()) for r in args.reports)
    rows = compare_reports(a, b)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["metric", "a", "b", "delta"], lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        (_out_dir(args) / "compare.csv").write_text(buf.getvalue())
    sys.stdout.write(buf.getvalue())
    return 0


COMMANDS = {
    "partition": cmd_partition,
    "solve-single": cmd_solve,
    "solve-iterative": cmd_solve,
    "exact": cmd_exact,
    "inspect": cmd_inspect,
    "compare": cmd_compare,
}

ERRORS = (
    GraphError, PartitionError, ScheduleError, SimulationError, OptimizationError,
    SolverError, CompareError, OSError, KeyError, json.JSONDecodeError,
)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.mode](args)
    except ERRORS as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
