"""Graph container, file loaders, random generators and classical MIS oracles."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import networkx as nx
import scipy.io
import scipy.sparse

logger = logging.getLogger(__name__)

ORACLE_LIMIT_ENV = "DCQDCA_ORACLE_LIMIT"
DEFAULT_ORACLE_LIMIT = 40


class GraphError(ValueError):
    """Raised for malformed graph input or infeasible generator parameters."""


class OracleLimitError(GraphError):
    """The graph is larger than the exact oracle is allowed to handle."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a simple graph, dropping self-loops and merging duplicate edges."""
        clean = set()
        loops = dupes = 0
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                loops += 1
                continue
            e = (u, v) if u < v else (v, u)
            if e in clean:
                dupes += 1
            clean.add(e)
        if loops or dupes:
            logger.info("dropped %d self-loops, merged %d duplicate edges", loops, dupes)
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in clean:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return cls(n, tuple(sorted(clean)), tuple(tuple(sorted(a)) for a in nbrs))

    @classmethod
    def from_networkx(cls, G: nx.Graph) -> "Graph":
        nodes = sorted(G.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls.from_edges(len(nodes), ((index[u], index[v]) for u, v in G.edges()))

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def subgraph(self, vertices: Iterable[int]) -> tuple["Graph", list[int]]:
        """Induced subgraph on ``vertices``; returns it with the new->old id map."""
        keep = sorted(set(vertices))
        index = {v: i for i, v in enumerate(keep)}
        sub = [(index[u], index[v]) for u, v in self.edges if u in index and v in index]
        return Graph.from_edges(len(keep), sub), keep

    def fingerprint(self) -> str:
        import hashlib

        h = hashlib.sha256(f"{self.n};".encode())
        for u, v in self.edges:
            h.update(f"{u},{v};".encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class Solution:
    bits: tuple[int, ...]
    weight: int

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> "Solution":
        b = tuple(int(x) for x in bits)
        if any(x not in (0, 1) for x in b):
            raise ValueError("bits must be 0/1")
        return cls(b, sum(b))

    @classmethod
    def from_set(cls, n: int, vertices: Iterable[int]) -> "Solution":
        bits = [0] * n
        for v in vertices:
            bits[v] = 1
        return cls.from_bits(bits)

    @property
    def vertices(self) -> list[int]:
        return [v for v, b in enumerate(self.bits) if b]

    def bitstring(self) -> str:
        return "".join(map(str, self.bits))


# ---------------------------------------------------------------- loading


def _parse_edge_list(text: str) -> list[tuple[int, int]]:
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise GraphError(f"line {lineno}: expected 'u v', got {raw!r}")
        try:
            pairs.append((int(parts[0]), int(parts[1])))
        except ValueError as exc:
            raise GraphError(f"line {lineno}: non-integer vertex id in {raw!r}") from exc
    return pairs


def load_graph(path: str | os.PathLike, format: str = "edge-list") -> tuple[Graph, list[int]]:
    """Read a graph file and compact its vertex ids to ``0..n-1``.

    Returns the graph together with ``orig``, where ``orig[i]`` is the id the
    file used for vertex ``i``. Edge lists may be 0- or 1-based; Matrix Market
    ids are always 1-based. Diagonal entries and repeated edges are dropped.
    """
    path = Path(path)
    if format in ("edge-list", "edgelist", "el"):
        pairs = _parse_edge_list(path.read_text())
    elif format in ("matrix-market", "mtx", "mm"):
        try:
            mat = scipy.io.mmread(str(path))
        except Exception as exc:  # scipy raises a mix of ValueError/IndexError
            raise GraphError(f"cannot parse Matrix Market file {path}: {exc}") from exc
        if mat.shape[0] != mat.shape[1]:
            raise GraphError(f"adjacency matrix must be square, got {mat.shape}")
        coo = scipy.sparse.coo_matrix(mat)
        pairs = [(int(r) + 1, int(c) + 1) for r, c in zip(coo.row, coo.col)]
        if mat.shape[0] == 0:
            raise GraphError("empty graph")
        ids = list(range(1, mat.shape[0] + 1))
        index = {v: i for i, v in enumerate(ids)}
        g = Graph.from_edges(len(ids), ((index[u], index[v]) for u, v in pairs))
        return g, ids
    else:
        raise GraphError(f"unknown graph format {format!r}")

    if not pairs:
        raise GraphError("empty graph")
    ids = sorted({v for e in pairs for v in e})
    if ids[0] < 0:
        raise GraphError("negative vertex id")
    # 1-based files are shifted; vertices absent from every edge are not recoverable
    base = 1 if ids[0] >= 1 else 0
    full = list(range(base, ids[-1] + 1))
    index = {v: i for i, v in enumerate(full)}
    g = Graph.from_edges(len(full), ((index[u], index[v]) for u, v in pairs))
    return g, full


def save_edge_list(g: Graph, path: str | os.PathLike) -> None:
    Path(path).write_text("".join(f"{u} {v}\n" for u, v in g.edges))


# ---------------------------------------------------------------- generators


def gen_random_regular(n: int, d: int, seed: int) -> Graph:
    if d >= n or d < 0:
        raise GraphError(f"need 0 <= d < n, got d={d}, n={n}")
    if (n * d) % 2:
        raise GraphError(f"n*d must be even, got n={n}, d={d}")
    try:
        G = nx.random_regular_graph(d, n, seed=seed)
    except nx.NetworkXError as exc:
        raise GraphError(f"pairing model failed for seed {seed}; retry with a new seed") from exc
    return Graph.from_networkx(G)


def gen_watts_strogatz(n: int, k: int, beta: float, seed: int, tries: int = 100) -> Graph:
    """Connected Watts-Strogatz graph; seeds ``seed, seed+1, ...`` until one is connected."""
    if k % 2 or k < 2 or k >= n:
        raise GraphError(f"need even 2 <= k < n, got k={k}, n={n}")
    if not 0.0 <= beta <= 1.0:
        raise GraphError(f"beta must lie in [0, 1], got {beta}")
    for attempt in range(tries):
        G = nx.watts_strogatz_graph(n, k, beta, seed=seed + attempt)
        if nx.is_connected(G):
            return Graph.from_networkx(G)
    raise GraphError(f"no connected Watts-Strogatz graph after {tries} tries")


def parse_generator(text: str, seed: int) -> Graph:
    """Parse ``reg:n,d`` or ``ws:n,k,beta`` and build the graph."""
    kind, _, args = text.partition(":")
    vals = [a.strip() for a in args.split(",") if a.strip()]
    try:
        if kind == "reg" and len(vals) == 2:
            return gen_random_regular(int(vals[0]), int(vals[1]), seed)
        if kind == "ws" and len(vals) == 3:
            return gen_watts_strogatz(int(vals[0]), int(vals[1]), float(vals[2]), seed)
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"bad generator arguments in {text!r}") from exc
    raise GraphError(f"unknown generator {text!r} (expected reg:n,d or ws:n,k,beta)")


# ---------------------------------------------------------------- MIS


def is_independent(g: Graph, bits: Sequence[int]) -> bool:
    if len(bits) != g.n:
        raise ValueError(f"bitstring length {len(bits)} != n={g.n}")
    return not any(bits[u] and bits[v] for u, v in g.edges)


def _oracle_limit(limit: int | None) -> int:
    if limit is not None:
        return limit
    return int(os.environ.get(ORACLE_LIMIT_ENV, DEFAULT_ORACLE_LIMIT))


def _clique_cover_size(mask: int, nbr: list[int]) -> int:
    cover = 0
    while mask:
        low = mask & -mask
        clique = low
        cand = mask & nbr[low.bit_length() - 1]
        while cand:
            u = cand & -cand
            clique |= u
            cand &= nbr[u.bit_length() - 1]
        mask &= ~clique
        cover += 1
    return cover


def _components(mask: int, nbr: list[int]) -> list[int]:
    comps = []
    while mask:
        seen = frontier = mask & -mask
        while frontier:
            grow = 0
            f = frontier
            while f:
                b = f & -f
                grow |= nbr[b.bit_length() - 1]
                f ^= b
            frontier = grow & mask & ~seen
            seen |= frontier
        comps.append(seen)
        mask &= ~seen
    return comps


def _mis_mask(mask: int, nbr: list[int]) -> int:
    """Maximum independent set of the subgraph induced by ``mask`` (bitmask in, bitmask out)."""
    taken = 0
    # degree <= 1 vertices always belong to some maximum independent set
    changed = True
    while changed and mask:
        changed = False
        m = mask
        while m:
            b = m & -m
            m ^= b
            v = b.bit_length() - 1
            if not mask & b:
                continue
            if (nbr[v] & mask).bit_count() <= 1:
                taken |= b
                mask &= ~(b | nbr[v])
                changed = True
    if not mask:
        return taken
    comps = _components(mask, nbr)
    if len(comps) > 1:
        for c in comps:
            taken |= _mis_mask(c, nbr)
        return taken
    return taken | _branch(mask, nbr)


def _branch(mask: int, nbr: list[int]) -> int:
    best = 0
    best_size = 0

    def search(mask: int, cur: int, size: int) -> None:
        nonlocal best, best_size
        if not mask:
            if size > best_size:
                best, best_size = cur, size
            return
        if size + _clique_cover_size(mask, nbr) <= best_size:
            return
        comps = _components(mask, nbr)
        if len(comps) > 1:
            sub = 0
            for c in comps:
                sub |= _mis_mask(c, nbr)
            total = size + sub.bit_count()
            if total > best_size:
                best, best_size = cur | sub, total
            return
        # branch on the maximum-degree vertex, lowest id on ties
        v, dv = -1, -1
        m = mask
        while m:
            b = m & -m
            m ^= b
            u = b.bit_length() - 1
            du = (nbr[u] & mask).bit_count()
            if du > dv:
                v, dv = u, du
        bv = 1 << v
        if dv <= 1:
            sub = _mis_mask(mask, nbr)
            search(0, cur | sub, size + sub.bit_count())
            return
        search(mask & ~(bv | nbr[v]), cur | bv, size + 1)
        search(mask & ~bv, cur, size)

    search(mask, 0, 0)
    return best


def exact_mis(g: Graph, limit: int | None = None) -> Solution:
    """Maximum independent set by branch and bound.

    Branches on a maximum-degree vertex, prunes with a greedy clique cover
    bound and splits disconnected remainders into independent subproblems.
    Raises :class:`OracleLimitError` when ``g.n`` exceeds ``limit`` (default
    from ``$DCQDCA_ORACLE_LIMIT``, else 40).
    """
    cap = _oracle_limit(limit)
    if g.n > cap:
        raise OracleLimitError(f"graph has {g.n} vertices, oracle limit is {cap}")
    nbr = [sum(1 << u for u in g.adjacency[v]) for v in range(g.n)]
    mask = _mis_mask((1 << g.n) - 1, nbr)
    return Solution.from_set(g.n, (v for v in range(g.n) if mask >> v & 1))


def greedy_mis(g: Graph) -> Solution:
    """Min-degree greedy: take the lowest-degree vertex, delete its closed neighborhood, repeat."""
    alive = set(range(g.n))
    deg = [g.degree(v) for v in range(g.n)]
    chosen = []
    while alive:
        v = min(alive, key=lambda u: (deg[u], u))
        chosen.append(v)
        removed = {v} | (set(g.adjacency[v]) & alive)
        alive -= removed
        for r in removed:
            for w in g.adjacency[r]:
                if w in alive:
                    deg[w] -= 1
    return Solution.from_set(g.n, chosen)
