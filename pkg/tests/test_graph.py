import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_graph, path_graph, small_corpus
from oracles import bfs_connected, brute_force_mis, parse_mtx_pattern
from dcqdca.graph import (
    Graph,
    GraphError,
    OracleLimitError,
    Solution,
    exact_mis,
    gen_random_regular,
    gen_watts_strogatz,
    greedy_mis,
    is_independent,
    load_graph,
    parse_generator,
)


def assert_simple(g: Graph):
    for v in range(g.n):
        assert v not in g.adjacency[v]
        assert len(set(g.adjacency[v])) == len(g.adjacency[v])
        for u in g.adjacency[v]:
            assert v in g.adjacency[u]
    assert len(set(g.edges)) == len(g.edges)
    assert all(u < v for u, v in g.edges)


def test_edge_list_roundtrip(tmp_path):
    f = tmp_path / "g.el"
    f.write_text("0 1\n1 2\n")
    g, ids = load_graph(f)
    assert g.n == 3 and set(g.edges) == {(0, 1), (1, 2)}
    assert ids == [0, 1, 2]


def test_edge_list_self_loop_dropped(tmp_path):
    f = tmp_path / "g.el"
    f.write_text("# comment\n0 1\n2 2\n1 0\n1 2  # trailing\n")
    g, _ = load_graph(f)
    assert set(g.edges) == {(0, 1), (1, 2)}
    assert_simple(g)


def test_edge_list_one_based(tmp_path):
    f = tmp_path / "g.el"
    f.write_text("1 2\n2 3\n")
    g, ids = load_graph(f)
    assert g.n == 3 and ids == [1, 2, 3]
    assert set(g.edges) == {(0, 1), (1, 2)}


@pytest.mark.parametrize("text", ["0 1\n1\n", "0 x\n"])
def test_edge_list_parse_error(tmp_path, text):
    f = tmp_path / "bad.el"
    f.write_text(text)
    with pytest.raises(GraphError):
        load_graph(f)


def test_edge_list_empty(tmp_path):
    f = tmp_path / "empty.el"
    f.write_text("# nothing\n")
    with pytest.raises(GraphError):
        load_graph(f)


def test_matrix_market_p5(data_dir):
    g, _ = load_graph(data_dir / "p5.mtx", "matrix-market")
    n, edges = parse_mtx_pattern((data_dir / "p5.mtx").read_text())
    assert g.n == n == 5
    assert set(g.edges) == edges == {(0, 1), (1, 2), (2, 3), (3, 4)}


def test_matrix_market_garbage(tmp_path):
    f = tmp_path / "bad.mtx"
    f.write_text("not a matrix\n")
    with pytest.raises(GraphError):
        load_graph(f, "matrix-market")


def test_random_regular_k4():
    for seed in range(3):
        g = gen_random_regular(4, 3, seed)
        assert set(g.edges) == set(complete_graph(4).edges)


def test_random_regular_degrees_and_determinism():
    g = gen_random_regular(16, 3, 7)
    assert all(g.degree(v) == 3 for v in range(16))
    assert_simple(g)
    assert gen_random_regular(16, 3, 7) == g


def test_random_regular_infeasible():
    with pytest.raises(GraphError):
        gen_random_regular(5, 3, 0)
    with pytest.raises(GraphError):
        gen_random_regular(4, 4, 0)


def test_watts_strogatz_ring():
    g = gen_watts_strogatz(6, 2, 0.0, 0)
    assert set(g.edges) == {(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)}


@pytest.mark.parametrize("beta", [0.3, 1.0])
def test_watts_strogatz_connected(beta):
    g = gen_watts_strogatz(16, 4, beta, 3)
    assert g.m == 32
    assert bfs_connected(g)
    assert_simple(g)
    assert gen_watts_strogatz(16, 4, beta, 3) == g


@pytest.mark.parametrize("args", [(10, 3, 0.1), (10, 10, 0.1), (10, 4, 1.5)])
def test_watts_strogatz_bad_params(args):
    with pytest.raises(GraphError):
        gen_watts_strogatz(*args, seed=0)


def test_parse_generator():
    assert parse_generator("reg:8,3", 1).n == 8
    assert parse_generator("ws:12,4,0.2", 1).m == 24
    with pytest.raises(GraphError):
        parse_generator("er:10,0.2", 1)


def test_is_independent(p5):
    assert is_independent(p5, [1, 0, 1, 0, 1])
    assert not is_independent(p5, [1, 1, 0, 0, 0])
    assert is_independent(p5, [0] * 5)
    with pytest.raises(ValueError):
        is_independent(p5, [0, 1])


def test_exact_small(p5, k4):
    s = exact_mis(p5)
    assert s.weight == 3 and is_independent(p5, s.bits)
    assert exact_mis(k4).weight == 1


def test_exact_reg12_matches_enumeration():
    g = gen_random_regular(12, 3, 7)
    # frozen from brute_force_mis(g)
    assert brute_force_mis(g) == 5
    assert exact_mis(g).weight == 5


def test_exact_limit(monkeypatch):
    g = path_graph(12)
    with pytest.raises(OracleLimitError):
        exact_mis(g, limit=10)
    monkeypatch.setenv("DCQDCA_ORACLE_LIMIT", "11")
    with pytest.raises(OracleLimitError):
        exact_mis(g)
    monkeypatch.setenv("DCQDCA_ORACLE_LIMIT", "12")
    assert exact_mis(g).weight == 6


def test_exact_matches_networkx_clique_on_complement():
    import networkx as nx

    for seed in range(3):
        g = gen_watts_strogatz(24, 4, 0.5, seed)
        H = nx.complement(g.to_networkx())
        _, w = nx.max_weight_clique(H, weight=None)
        assert exact_mis(g).weight == w


def test_greedy(p5, k4):
    assert greedy_mis(p5).weight == 3
    assert greedy_mis(k4).weight == 1
    assert greedy_mis(Graph.from_edges(5, [])).weight == 5


def test_solution_weight():
    s = Solution.from_bits([1, 0, 1, 1])
    assert s.weight == 3 and s.vertices == [0, 2, 3] and s.bitstring() == "1011"


@pytest.mark.parametrize("g", small_corpus(), ids=lambda g: f"n{g.n}m{g.m}")
def test_oracles_agree(g):
    best = brute_force_mis(g)
    ex = exact_mis(g)
    gr = greedy_mis(g)
    assert is_independent(g, ex.bits) and ex.weight == best
    assert is_independent(g, gr.bits) and gr.weight <= best
    # greedy output is maximal
    for v in range(g.n):
        if not gr.bits[v]:
            assert any(gr.bits[u] for u in g.adjacency[v])


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 11),
    edges=st.lists(st.tuples(st.integers(0, 10), st.integers(0, 10)), max_size=30),
)
def test_exact_vs_enumeration_property(n, edges):
    g = Graph.from_edges(n, [(u % n, v % n) for u, v in edges])
    assert_simple(g)
    assert exact_mis(g).weight == brute_force_mis(g)
