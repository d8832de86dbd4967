"""Single-circuit and iterative deferred-constraint solvers."""

from __future__ import annotations

import csv
import json
import logging
import time
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from dcqdca.ansatz import (
    MixerSchedule,
    build_interleaved_schedule,
    build_schedule,
    cut_count,
    order_vertices,
    schedule_wire_cuts,
    sparsify_interleaved,
    sparsify_separator,
)
from dcqdca.graph import Graph, Solution, is_independent
from dcqdca.optimize import OptimizerConfig, optimize
from dcqdca.partition import DEFAULT_EPSILON, EdgePartition, edge_partition, make_partition
from dcqdca.simulator import MAX_QUBITS, sample, simulate

logger = logging.getLogger(__name__)


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    k: int = 2
    epsilon: float = DEFAULT_EPSILON
    budget: int = 6
    shots: int = 1024
    sweeps: int = 2
    layers: int = 1
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    seed: int = 0
    max_qubits: int = MAX_QUBITS
    deferred: bool = True

    def __post_init__(self):
        if self.budget < 0:
            raise SolverError("budget must be >= 0")
        if self.shots < 1:
            raise SolverError("shots must be >= 1")
        if self.sweeps < 1:
            raise SolverError("sweeps must be >= 1")
        if self.k < 1:
            raise SolverError("k must be >= 1")
        if self.layers < 1:
            raise SolverError("layers must be >= 1")


@dataclass
class CircuitRecord:
    vertex: int | None
    scheduled: int
    qubits: int
    active: int
    inactive: int
    cut_count: int
    best_loss: float | None
    trace: list[tuple[int, float, int]] = field(default_factory=list)


@dataclass
class RunReport:
    graph: dict
    algorithm: str
    config: dict
    solution: Solution
    inactive_mixers: int
    cut_count: int
    circuits_run: int
    circuits: list[CircuitRecord]
    partition: EdgePartition | None
    approx_ratio: float | None = None
    optimum: int | None = None
    progress: list[dict] = field(default_factory=list)
    skipped: list[dict] = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def loss_traces(self) -> list[list[tuple[int, float, int]]]:
        return [c.trace for c in self.circuits]

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "graph": self.graph,
            "algorithm": self.algorithm,
            "config": self.config,
            "solution": {
                "bits": self.solution.bitstring(),
                "weight": self.solution.weight,
                "vertices": self.solution.vertices,
            },
            "weight": self.solution.weight,
            "approx_ratio": self.approx_ratio,
            "optimum": self.optimum,
            "inactive_mixers": self.inactive_mixers,
            "cut_count": self.cut_count,
            "circuits_run": self.circuits_run,
            "circuits": [
                {k: v for k, v in asdict(c).items() if k != "trace"} for c in self.circuits
            ],
            "skipped": self.skipped,
            "progress": self.progress,
            "partition": self.partition.to_dict() if self.partition else None,
        }
        if timing:
            d["timing"] = {"wall_time": self.wall_time}
        return d

    def write(self, out_dir: str | Path) -> list[Path]:
        """Write report.json, trace.csv and partition.json into ``out_dir``."""
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        written = [out / "report.json"]
        written[0].write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n")
        if self.partition is not None:
            (out / "partition.json").write_text(self.partition.to_json() + "\n")
            written.append(out / "partition.json")
        if self.algorithm == "iterative":
            written.append(out / "trace.csv")
            write_progress_csv(self.progress, written[-1])
            written.append(out / "losses.csv")
            write_loss_csv(self.circuits, written[-1])
        else:
            written.append(out / "trace.csv")
            write_loss_csv(self.circuits, written[-1])
        return written

    def summary(self) -> str:
        ratio = "n/a" if self.approx_ratio is None else f"{self.approx_ratio:.4f}"
        return (
            f"weight={self.solution.weight} ratio={ratio} inactive_mixers={self.inactive_mixers} "
            f"cuts={self.cut_count} circuits={self.circuits_run}"
        )


def write_loss_csv(circuits: list[CircuitRecord], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["circuit", "eval_index", "loss", "restart_id"])
        for ci, c in enumerate(circuits):
            for idx, val, rid in c.trace:
                w.writerow([ci, idx, repr(float(val)), rid])


def write_progress_csv(progress: list[dict], path: Path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=["step", "sweep", "vertex", "accepted", "weight"])
        w.writeheader()
        w.writerows(progress)


def graph_info(g: Graph) -> dict:
    return {"n": g.n, "m": g.m, "fingerprint": g.fingerprint()}


def compute_report(g: Graph, sol: Solution, oracle: Solution | None = None) -> dict:
    if not is_independent(g, sol.bits):
        raise SolverError("solution is not an independent set")
    if oracle is None:
        return {"weight": sol.weight, "approx_ratio": None, "optimum": None}
    ratio = sol.weight / oracle.weight if oracle.weight else 1.0
    return {"weight": sol.weight, "approx_ratio": ratio, "optimum": oracle.weight}


def _sub_seed(seed: int, *keys: int) -> int:
    return int(np.random.SeedSequence([seed, *keys]).generate_state(1)[0])


def _partition(g: Graph, cfg: SolverConfig) -> EdgePartition:
    if g.m == 0:
        return make_partition(g, [], 1, cfg.epsilon)
    return edge_partition(g, min(cfg.k, g.m), cfg.epsilon, seed=cfg.seed)


def _run_circuit(
    g: Graph, schedule: MixerSchedule, cfg: SolverConfig, key: tuple[int, ...]
) -> tuple[dict[int, int] | None, CircuitRecord]:
    """Optimize and sample one circuit; returns the best sampled assignment over its qubits."""
    rec = CircuitRecord(None, len(schedule.slots), schedule.n_qubits,
                        len(schedule.active_slots), schedule.inactive_count, 0, None)
    if not schedule.active_slots:
        return None, rec
    opt_cfg = replace(cfg.optimizer, seed=_sub_seed(cfg.seed, 1, *key))
    res = optimize(schedule, opt_cfg)
    rec.best_loss = float(res.loss)
    rec.trace = res.trace
    state = simulate(schedule, res.params)
    counts = sample(state, cfg.shots, _sub_seed(cfg.seed, 2, *key))
    sub, ids = g.subgraph(schedule.qubits)
    best, best_key = None, None
    for bits in counts:
        assign = {v: int(b) for v, b in zip(schedule.qubits, bits)}
        local = [assign[v] for v in ids]
        if not is_independent(sub, local):
            continue
        # heaviest first, then lexicographically smallest in vertex-id order
        key = (-sum(local), "".join(map(str, local)))
        if best_key is None or key < best_key:
            best, best_key = assign, key
    return best, rec


def solve_single(g: Graph, cfg: SolverConfig, oracle: Solution | None = None) -> RunReport:
    """One circuit over the whole graph with a sparsified, deferred separator."""
    t0 = time.perf_counter()
    if g.n == 0:
        raise SolverError("empty graph")
    if g.n > cfg.max_qubits:
        raise SolverError(
            f"{g.n} vertices exceed the {cfg.max_qubits}-qubit cap; use solve_iterative"
        )
    part = _partition(g, cfg)
    S = set(part.separator)
    parts = [set(p) for p in part.parts]
    home = {v: i for i, p in enumerate(parts) for v in p}
    home.update({s: len(parts) for s in S})
    if cfg.deferred:
        kept, _ = sparsify_separator(g, S, cfg.budget)
        schedule = build_schedule(g, parts, kept, cfg.layers, separator_inactive=S - kept)
        cuts = cut_count(g, kept, S)
    else:
        kept = sparsify_interleaved(g, parts, S, cfg.budget)
        schedule = build_interleaved_schedule(g, parts, kept, cfg.layers, S - kept)
        cuts = schedule_wire_cuts(schedule, home)
    assign, rec = _run_circuit(g, schedule, cfg, (0,))
    rec.cut_count = cuts
    bits = [0] * g.n
    if assign:
        for v, b in assign.items():
            bits[v] = b
    sol = Solution.from_bits(bits)
    acct = compute_report(g, sol, oracle)
    return RunReport(
        graph=graph_info(g),
        algorithm="single",
        config=config_dict(cfg),
        solution=sol,
        inactive_mixers=schedule.inactive_count,
        cut_count=cuts,
        circuits_run=1 if schedule.active_slots else 0,
        circuits=[rec],
        partition=part,
        approx_ratio=acct["approx_ratio"],
        optimum=acct["optimum"],
        wall_time=time.perf_counter() - t0,
    )


def local_problem(
    g: Graph, parts: list[set[int]], s: int, x: list[int]
) -> tuple[list[set[int]], set[int]]:
    """Parts touching separator vertex ``s``, and the local conflict set.

    A local vertex conflicts when a neighbor outside the local problem is
    currently set; its mixer is switched off so the frozen remainder of the
    solution can never be violated.
    """
    nb = set(g.neighbors(s))
    local_parts = [p for p in parts if p & nb]
    local = set().union(*local_parts) | {s}
    conflict = {v for v in local if any(x[u] for u in g.neighbors(v) if u not in local)}
    return local_parts, conflict


def max_local_qubits(g: Graph, part: EdgePartition) -> int:
    parts = [set(p) for p in part.parts]
    best = 0
    for s in part.separator:
        nb = set(g.neighbors(s))
        best = max(best, 1 + sum(len(p) for p in parts if p & nb))
    return best


def choose_k(
    g: Graph, max_qubits: int, epsilon: float = DEFAULT_EPSILON, seed: int = 0, k_min: int = 2
) -> int:
    """Smallest k whose partition keeps every local subproblem within ``max_qubits``."""
    for k in range(k_min, g.m + 1):
        if max_local_qubits(g, edge_partition(g, k, epsilon, seed)) <= max_qubits:
            return k
    raise SolverError(f"no k keeps local subproblems within {max_qubits} qubits")


def solve_iterative(g: Graph, cfg: SolverConfig, oracle: Solution | None = None) -> RunReport:
    """Sweep the separator, re-solving the parts around one separator vertex at a time.

    A local result is kept only when the global set stays independent and its
    weight does not drop, so the weight trace is non-decreasing.
    """
    t0 = time.perf_counter()
    if g.n == 0:
        raise SolverError("empty graph")
    part = _partition(g, cfg)
    S = set(part.separator)
    parts = [set(p) for p in part.parts]
    order = order_vertices(g, S)
    x = [0] * g.n
    weight = 0
    circuits: list[CircuitRecord] = []
    progress: list[dict] = []
    skipped: list[dict] = []
    inactive_total = 0
    max_cuts = 0
    if not order:
        logger.warning("separator is empty: no local subproblems to solve")
    step = 0
    for sweep in range(cfg.sweeps):
        for s in order:
            local_parts, conflict = local_problem(g, parts, s, x)
            sep_on = {s} - conflict
            circuit = (set().union(*local_parts) - conflict) | sep_on
            cuts = cut_count(g, sep_on, S)
            if cuts > cfg.budget:
                skipped.append({"sweep": sweep, "vertex": s, "reason": f"needs {cuts} cuts"})
                continue
            if len(circuit) > cfg.max_qubits:
                logger.info("skipping separator vertex %d: %d qubits", s, len(circuit))
                skipped.append({"sweep": sweep, "vertex": s, "reason": f"{len(circuit)} qubits"})
                continue
            schedule = build_schedule(
                g, local_parts, sep_on, cfg.layers,
                separator_inactive={s} & conflict, inactive=conflict - {s},
            )
            if not schedule.active_slots:
                skipped.append({"sweep": sweep, "vertex": s, "reason": "no active mixers"})
                continue
            assign, rec = _run_circuit(g, schedule, cfg, (sweep, s))
            rec.vertex = s
            rec.cut_count = cuts
            circuits.append(rec)
            inactive_total += rec.inactive
            max_cuts = max(max_cuts, cuts)
            accepted = False
            if assign is not None:
                trial = list(x)
                for v in circuit:
                    trial[v] = 0
                for v, b in assign.items():
                    trial[v] = b
                if sum(trial) >= weight and is_independent(g, trial):
                    x, weight, accepted = trial, sum(trial), True
            progress.append(
                {"step": step, "sweep": sweep, "vertex": s, "accepted": int(accepted), "weight": weight}
            )
            step += 1
    sol = Solution.from_bits(x)
    acct = compute_report(g, sol, oracle)
    return RunReport(
        graph=graph_info(g),
        algorithm="iterative",
        config=config_dict(cfg),
        solution=sol,
        inactive_mixers=inactive_total,
        cut_count=max_cuts,
        circuits_run=len(circuits),
        circuits=circuits,
        partition=part,
        approx_ratio=acct["approx_ratio"],
        optimum=acct["optimum"],
        progress=progress,
        skipped=skipped,
        wall_time=time.perf_counter() - t0,
    )


def config_dict(cfg: SolverConfig) -> dict:
    d = asdict(cfg)
    d["optimizer"] = asdict(cfg.optimizer)
    return d
