"""Balanced edge partitioning and the vertex separator it induces."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from dcqdca.graph import Graph

DEFAULT_EPSILON = 0.05


class PartitionError(ValueError):
    pass


@dataclass(frozen=True)
class EdgePartition:
    k: int
    epsilon: float
    labels: tuple[int, ...]
    parts: tuple[tuple[int, ...], ...]
    separator: tuple[int, ...]

    def block_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for lab in self.labels:
            sizes[lab] += 1
        return sizes

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "epsilon": self.epsilon,
            "labels": list(self.labels),
            "separator": list(self.separator),
            "parts": [list(p) for p in self.parts],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "EdgePartition":
        return cls(
            k=int(d["k"]),
            epsilon=float(d["epsilon"]),
            labels=tuple(int(x) for x in d["labels"]),
            parts=tuple(tuple(int(v) for v in p) for p in d["parts"]),
            separator=tuple(int(v) for v in d["separator"]),
        )


def balance_cap(m: int, k: int, epsilon: float) -> int:
    # guard against 1.05 * 20 evaluating to 20.999...
    return math.floor((1 + epsilon) * math.ceil(m / k) + 1e-9)


def _check_labels(g: Graph, labels: Sequence[int]) -> None:
    if len(labels) != g.m:
        raise PartitionError(f"{len(labels)} labels for {g.m} edges")
    if any(lab < 0 for lab in labels):
        raise PartitionError("every edge needs a block label")


def _incident_labels(g: Graph, labels: Sequence[int]) -> list[set[int]]:
    seen: list[set[int]] = [set() for _ in range(g.n)]
    for (u, v), lab in zip(g.edges, labels):
        seen[u].add(lab)
        seen[v].add(lab)
    return seen


def replication_cost(g: Graph, labels: Sequence[int]) -> int:
    """Sum over vertices of (distinct incident blocks - 1); isolated vertices count 0."""
    _check_labels(g, labels)
    return sum(max(len(s) - 1, 0) for s in _incident_labels(g, labels))


def separator_from_labels(g: Graph, labels: Sequence[int]) -> set[int]:
    _check_labels(g, labels)
    return {v for v, s in enumerate(_incident_labels(g, labels)) if len(s) >= 2}


def induced_parts(
    g: Graph, labels: Sequence[int], separator: set[int] | Sequence[int], k: int | None = None
) -> list[set[int]]:
    """Vertex classes left after removing the separator.

    Vertex ``v`` goes to part ``i`` when every edge at ``v`` is labelled ``i``.
    Isolated vertices go, one at a time in id order, to the smallest part.
    """
    _check_labels(g, labels)
    if k is None:
        k = max(labels, default=0) + 1
    sep = set(separator)
    parts: list[set[int]] = [set() for _ in range(k)]
    isolated = []
    for v, s in enumerate(_incident_labels(g, labels)):
        if v in sep:
            continue
        if not s:
            isolated.append(v)
        else:
            (lab,) = s
            parts[lab].add(v)
    for v in isolated:
        i = min(range(k), key=lambda j: (len(parts[j]), j))
        parts[i].add(v)
    return parts


def make_partition(g: Graph, labels: Sequence[int], k: int, epsilon: float) -> EdgePartition:
    sep = separator_from_labels(g, labels)
    parts = induced_parts(g, labels, sep, k)
    return EdgePartition(
        k=k,
        epsilon=epsilon,
        labels=tuple(int(x) for x in labels),
        parts=tuple(tuple(sorted(p)) for p in parts),
        separator=tuple(sorted(sep)),
    )


def validate_partition(g: Graph, p: EdgePartition) -> list[str]:
    """Return a list of human-readable invariant violations (empty when valid)."""
    problems = []
    if len(p.labels) != g.m:
        return [f"label count {len(p.labels)} != edge count {g.m}"]
    if any(not 0 <= lab < p.k for lab in p.labels):
        return [f"labels must lie in 0..{p.k - 1}"]
    cap = balance_cap(g.m, p.k, p.epsilon)
    for i, size in enumerate(p.block_sizes()):
        if size > cap:
            problems.append(f"balance: block {i} has {size} edges > cap {cap}")
    expected = separator_from_labels(g, p.labels)
    sep = set(p.separator)
    if sep != expected:
        problems.append(
            f"separator: missing {sorted(expected - sep)}, unexpected {sorted(sep - expected)}"
        )
    seen: set[int] = set()
    for i, part in enumerate(p.parts):
        overlap = seen & set(part)
        if overlap:
            problems.append(f"disjoint: part {i} repeats {sorted(overlap)}")
        if sep & set(part):
            problems.append(f"disjoint: part {i} meets separator at {sorted(sep & set(part))}")
        seen |= set(part)
    if seen | sep != set(range(g.n)):
        problems.append(f"cover: vertices {sorted(set(range(g.n)) - seen - sep)} unassigned")
    home = {v: i for i, part in enumerate(p.parts) for v in part}
    for u, v in g.edges:
        if u in sep or v in sep:
            continue
        if home.get(u) != home.get(v):
            problems.append(f"edge: ({u}, {v}) crosses parts without touching the separator")
    return problems


# ---------------------------------------------------------------- heuristic


class _State:
    """Per-vertex block counts, kept incrementally for cheap delta evaluation."""

    def __init__(self, g: Graph, k: int):
        self.g = g
        self.labels = [-1] * g.m
        self.count = np.zeros((g.n, k), dtype=np.int64)
        self.size = [0] * k

    def assign(self, e: int, b: int) -> None:
        u, v = self.g.edges[e]
        old = self.labels[e]
        if old >= 0:
            self.count[u, old] -= 1
            self.count[v, old] -= 1
            self.size[old] -= 1
        self.labels[e] = b
        self.count[u, b] += 1
        self.count[v, b] += 1
        self.size[b] += 1

    def blocks_at(self, v: int) -> int:
        return int(np.count_nonzero(self.count[v]))


def _grow(g: Graph, k: int, cap: int, rng: np.random.Generator, inc: list[list[int]]) -> list[int]:
    st = _State(g, k)
    remaining = g.m

    def free_edges(x: int) -> list[int]:
        return [f for f in inc[x] if st.labels[f] < 0]

    for b in range(k):
        target = remaining if b == k - 1 else math.ceil(remaining / (k - b))
        core: set[int] = set()
        boundary: set[int] = set()

        def take(e: int) -> None:
            nonlocal remaining
            st.assign(e, b)
            remaining -= 1

        while st.size[b] < target:
            open_ = [x for x in boundary - core if free_edges(x)]
            if open_:
                # expand the boundary vertex that pulls in the fewest new vertices
                def cost(x: int) -> tuple[int, int, int]:
                    fresh = [g.edges[f][0] + g.edges[f][1] - x for f in free_edges(x)]
                    outside = [y for y in fresh if y not in boundary]
                    repl = sum(1 for y in outside if st.blocks_at(y) > 0)
                    return (len(outside), repl, x)

                x = min(open_, key=cost)
            else:
                free = [e for e in range(g.m) if st.labels[e] < 0]
                e0 = free[int(rng.integers(len(free)))]
                u, v = g.edges[e0]
                x = min((u, v), key=lambda y: (len(free_edges(y)), y))
                boundary.add(x)
            core.add(x)
            for f in free_edges(x):
                if st.size[b] >= target:
                    break
                if st.labels[f] >= 0:
                    continue
                y = g.edges[f][0] + g.edges[f][1] - x
                take(f)
                if y not in boundary:
                    boundary.add(y)
                    for h in free_edges(y):
                        if st.size[b] >= target:
                            break
                        z = g.edges[h][0] + g.edges[h][1] - y
                        if z in boundary:
                            take(h)
        # spend the imbalance slack only on edges closing inside the block
        if b < k - 1:
            for x in sorted(boundary):
                for f in free_edges(x):
                    if st.size[b] >= cap:
                        break
                    z = g.edges[f][0] + g.edges[f][1] - x
                    if z in boundary:
                        take(f)
    _refine(g, st, k, cap)
    return st.labels


def _refine(g: Graph, st: _State, k: int, cap: int) -> None:
    improved = True
    while improved:
        improved = False
        for e in range(g.m):
            src = st.labels[e]
            if st.size[src] <= 1:
                continue
            u, v = g.edges[e]
            best_b, best_delta = -1, 0
            for b in range(k):
                if b == src or st.size[b] >= cap:
                    continue
                delta = 0
                for x in (u, v):
                    # leaving src drops a replica if e was x's only src edge
                    if st.count[x, src] == 1:
                        delta -= 1
                    if st.count[x, b] == 0:
                        delta += 1
                if delta < best_delta:
                    best_b, best_delta = b, delta
            if best_b >= 0:
                st.assign(e, best_b)
                improved = True


def edge_partition(
    g: Graph, k: int, epsilon: float = DEFAULT_EPSILON, seed: int = 0, attempts: int = 8
) -> EdgePartition:
    """Greedy neighborhood-expansion edge partitioner.

    Blocks are grown one at a time from a random seed edge by repeatedly taking
    the adjacent unassigned edge that replicates the fewest vertices, then a
    single-edge move pass lowers the replication cost further. The best of
    ``attempts`` randomized runs is returned.
    """
    if g.m == 0:
        raise PartitionError("graph has no edges to partition")
    if not 1 <= k <= g.m:
        raise PartitionError(f"need 1 <= k <= |E|={g.m}, got k={k}")
    if epsilon < 0:
        raise PartitionError("epsilon must be non-negative")
    if k == 1:
        return make_partition(g, [0] * g.m, 1, epsilon)
    cap = balance_cap(g.m, k, epsilon)
    inc: list[list[int]] = [[] for _ in range(g.n)]
    for e, (u, v) in enumerate(g.edges):
        inc[u].append(e)
        inc[v].append(e)
    rng = np.random.default_rng(seed)
    best, best_cost = None, None
    for _ in range(max(attempts, 1)):
        labels = _grow(g, k, cap, rng, inc)
        cost = replication_cost(g, labels)
        if best_cost is None or cost < best_cost:
            best, best_cost = labels, cost
    return make_partition(g, best, k, epsilon)
