from __future__ import annotations

import networkx as nx
import pytest

from leafpower.generator import SplitMix64
from leafpower.graph import Graph

# one line per acceptance criterion, printed in the terminal summary
RESULTS: dict[int, tuple[bool, str]] = {}


def atlas_graphs(max_n: int, connected: bool = True) -> list[Graph]:
    """Every graph up to isomorphism on 1..max_n vertices (max_n <= 7), from the networkx atlas."""
    out = []
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() > max_n:
            continue
        if connected and not nx.is_connected(h):
            continue
        out.append(Graph(h.number_of_nodes(), list(h.edges())))
    return out


def random_graph(rng: SplitMix64, n: int, p: float) -> Graph:
    return Graph(n, [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < p])


def random_chordal(rng: SplitMix64, n: int) -> Graph:
    """Each new vertex joins a random clique of the current graph, so the graph stays chordal."""
    adj: list[set[int]] = []
    for x in range(n):
        nbrs: set[int] = set()
        if x and rng.random() < 0.9:
            u = rng.below(x)
            nbrs = {u}
            pool = sorted(adj[u])
            rng.shuffle(pool)
            for w in pool:
                if rng.random() < 0.6 and all(w in adj[y] for y in nbrs):
                    nbrs.add(w)
        adj.append(set(nbrs))
        for y in nbrs:
            adj[y].add(x)
    return Graph(n, [(a, b) for a in range(n) for b in adj[a] if a < b])


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


@pytest.fixture(scope="session")
def connected_atlas6():
    return atlas_graphs(6)


def pytest_terminal_summary(terminalreporter):
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(RESULTS):
        ok, detail = RESULTS[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail}")
