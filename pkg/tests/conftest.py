import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from dcqdca.graph import Graph, gen_random_regular, gen_watts_strogatz  # noqa: E402

DATA = Path(__file__).parent / "data"


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


@pytest.fixture
def p5():
    return path_graph(5)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def star4():
    return star_graph(4)


@pytest.fixture
def data_dir():
    return DATA


def small_corpus():
    """Deterministic mix of small graphs (n <= 10) used by several fuzz tests."""
    import networkx as nx

    out = [path_graph(5), complete_graph(4), star_graph(4), path_graph(8)]
    for seed in range(6):
        out.append(gen_random_regular(8, 3, seed))
        out.append(gen_watts_strogatz(9, 4, 0.4, seed))
        out.append(Graph.from_networkx(nx.gnp_random_graph(10, 0.3, seed=seed)))
    return out


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def record(request):
    """Print and remember one PASS/FAIL line for an acceptance criterion."""

    def _record(number: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {detail}"
        print(line)
        request.config.stash.setdefault(ACCEPTANCE, []).append((number, line))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
