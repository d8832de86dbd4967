import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_corpus
from oracles import brute_force_partition_cost, brute_force_partitions
from dcqdca.graph import Graph, gen_watts_strogatz
from dcqdca.partition import (
    EdgePartition,
    PartitionError,
    balance_cap,
    edge_partition,
    induced_parts,
    make_partition,
    replication_cost,
    separator_from_labels,
    validate_partition,
)

# P5 edges in sorted order: 01, 12, 23, 34
P5_LABELS = [0, 0, 1, 1]


def test_balance_cap():
    assert balance_cap(4, 2, 0.0) == 2
    assert balance_cap(120, 8, 0.05) == 15
    assert balance_cap(40, 2, 0.05) == 21


def test_replication_cost_examples(p5):
    assert replication_cost(p5, [0] * 4) == 0
    assert replication_cost(p5, P5_LABELS) == 1
    tri = Graph.from_edges(3, [(0, 1), (0, 2), (1, 2)])
    assert replication_cost(tri, [0, 1, 2]) == 3


def test_replication_cost_missing_label(p5):
    with pytest.raises(PartitionError):
        replication_cost(p5, [0, 0, 1])
    with pytest.raises(PartitionError):
        replication_cost(p5, [0, -1, 1, 1])


def test_separator_from_labels(p5):
    assert separator_from_labels(p5, [0] * 4) == set()
    assert separator_from_labels(p5, P5_LABELS) == {2}


def test_separator_fig1_style_graph():
    # two triangles joined through the bridge 2-3 into a second block
    g = Graph.from_edges(7, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5), (5, 6), (4, 6)])
    results = list(brute_force_partitions(g, 2, 0.05))
    best = min(c for _, c, _ in results)
    optimal_seps = {sep for _, c, sep in results if c == best}
    p = edge_partition(g, 2, 0.05, seed=0)
    assert replication_cost(g, p.labels) == best == 1
    assert frozenset(p.separator) in optimal_seps
    assert set(p.separator) == {3}


def test_induced_parts(p5):
    parts = induced_parts(p5, P5_LABELS, {2}, 2)
    assert parts == [{0, 1}, {3, 4}]
    assert induced_parts(p5, [0] * 4, set(), 1) == [set(range(5))]


def test_induced_parts_isolated_to_smallest():
    g = Graph.from_edges(7, [(0, 1), (1, 2), (3, 4)])
    parts = induced_parts(g, [0, 0, 1], set(), 2)
    # 5 -> part 1 (size 2 < 3), then 6 -> part 0 (tie 3 vs 3, lowest index)
    assert parts == [{0, 1, 2, 6}, {3, 4, 5}]


def test_edge_partition_p5(p5):
    p = edge_partition(p5, 2, 0.0, seed=0)
    assert replication_cost(p5, p.labels) == brute_force_partition_cost(p5, 2, 0.0) == 1
    assert p.separator == (2,)
    assert sorted(map(sorted, p.parts)) == [[0, 1], [3, 4]]


def test_edge_partition_star(star4):
    p = edge_partition(star4, 2, 0.0, seed=0)
    assert replication_cost(star4, p.labels) == brute_force_partition_cost(star4, 2, 0.0) == 1
    assert p.separator == (0,)
    assert sorted(len(x) for x in p.parts) == [2, 2]
    assert set().union(*map(set, p.parts)) == {1, 2, 3, 4}


def test_edge_partition_single_block(p5):
    p = edge_partition(p5, 1, 0.05)
    assert p.labels == (0, 0, 0, 0) and p.separator == () and p.parts == ((0, 1, 2, 3, 4),)


def test_edge_partition_errors(p5):
    with pytest.raises(PartitionError):
        edge_partition(p5, 5, 0.0)
    with pytest.raises(PartitionError):
        edge_partition(Graph.from_edges(3, []), 1, 0.0)
    with pytest.raises(PartitionError):
        edge_partition(p5, 2, -0.1)


def test_edge_partition_deterministic():
    g = gen_watts_strogatz(40, 4, 0.3, 2)
    assert edge_partition(g, 5, 0.05, seed=9) == edge_partition(g, 5, 0.05, seed=9)


def test_validate_flags_balance(p5):
    p = make_partition(p5, [0, 0, 0, 1], 2, 0.0)
    problems = validate_partition(p5, p)
    assert any(msg.startswith("balance") for msg in problems)


def test_validate_flags_tampered_separator(p5):
    p = make_partition(p5, P5_LABELS, 2, 0.0)
    assert validate_partition(p5, p) == []
    bad = EdgePartition(p.k, p.epsilon, p.labels, p.parts, ())
    problems = validate_partition(p5, bad)
    assert any(msg.startswith("separator") for msg in problems)


def test_validate_flags_crossing_edge(p5):
    bad = EdgePartition(2, 0.0, tuple(P5_LABELS), ((0,), (1, 3, 4)), (2,))
    problems = validate_partition(p5, bad)
    assert any(msg.startswith("edge") for msg in problems)


def test_json_roundtrip():
    g = gen_watts_strogatz(20, 4, 0.3, 1)
    p = edge_partition(g, 3, 0.05, seed=1)
    d = json.loads(p.to_json())
    assert set(d) == {"k", "epsilon", "labels", "separator", "parts"}
    assert EdgePartition.from_dict(d) == p


@pytest.mark.parametrize("g", small_corpus(), ids=lambda g: f"n{g.n}m{g.m}")
@pytest.mark.parametrize("k", [2, 3])
def test_partitioner_valid_on_corpus(g, k):
    if g.m < k:
        pytest.skip("fewer edges than blocks")
    p = edge_partition(g, k, 0.05, seed=k)
    assert validate_partition(g, p) == []


def test_separator_invariant_under_block_relabeling():
    rng = random.Random(4)
    for g in small_corpus():
        labels = [rng.randrange(3) for _ in range(g.m)]
        perm = [2, 0, 1]
        assert separator_from_labels(g, labels) == separator_from_labels(g, [perm[x] for x in labels])


@settings(max_examples=40, deadline=None)
@given(
    n=st.integers(3, 8),
    edges=st.lists(st.tuples(st.integers(0, 7), st.integers(0, 7)), min_size=2, max_size=10),
    seed=st.integers(0, 1000),
)
def test_heuristic_quality_small(n, edges, seed):
    g = Graph.from_edges(n, [(u % n, v % n) for u, v in edges])
    if g.m < 2:
        return
    p = edge_partition(g, 2, 0.05, seed=seed)
    assert validate_partition(g, p) == []
    assert replication_cost(g, p.labels) <= 2 * brute_force_partition_cost(g, 2, 0.05)
