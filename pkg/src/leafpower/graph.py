"""Simple undirected graphs over dense integer vertex ids."""

from __future__ import annotations

from collections import deque
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised for malformed graph input (bad vertex ids, loops, ...)."""


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``."""

    __slots__ = ("n", "adj", "_hash")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            adj[u].add(v)
            adj[v].add(u)
        self.n = n
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in adj)
        self._hash = None

    @classmethod
    def from_adjacency(cls, adj: Sequence[Iterable[int]]) -> "Graph":
        edges = [(u, v) for u, nb in enumerate(adj) for v in nb if u < v]
        return cls(len(adj), edges)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.adj))
        return self._hash

    def __len__(self) -> int:
        return self.n

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> frozenset[int]:
        self._check(v)
        return self.adj[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in sorted(self.adj[u]) if u < v]

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def is_clique(self, vs: Iterable[int]) -> bool:
        vs = list(vs)
        return all(vs[j] in self.adj[vs[i]] for i in range(len(vs)) for j in range(i + 1, len(vs)))

    def _check(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise GraphError(f"vertex {v} out of range for n={self.n}")


def _checked(g: Graph, x: Iterable[int]) -> frozenset[int]:
    x = frozenset(x)
    for v in x:
        g._check(v)
    return x


def neighbors_open(g: Graph, x: Iterable[int]) -> frozenset[int]:
    """N(X): neighbours of members of X lying outside X."""
    x = _checked(g, x)
    out: set[int] = set()
    for v in x:
        out |= g.adj[v]
    return frozenset(out - x)


def neighbors_closed(g: Graph, x: Iterable[int]) -> frozenset[int]:
    """N[X] = N(X) | X."""
    x = _checked(g, x)
    return neighbors_open(g, x) | x


def connected_components(g: Graph, within: Iterable[int] | None = None) -> list[frozenset[int]]:
    """Vertex sets of the connected components, in order of smallest member.

    With ``within`` the components of the induced subgraph ``g[within]`` are
    returned instead.
    """
    allowed = set(range(g.n)) if within is None else set(within)
    seen: set[int] = set()
    parts = []
    for s in sorted(allowed):
        if s in seen:
            continue
        comp = {s}
        seen.add(s)
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in g.adj[u]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.add(w)
                    queue.append(w)
        parts.append(frozenset(comp))
    return parts


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def max_cardinality_search(g: Graph) -> list[int]:
    """Maximum cardinality search order (first visited first).

    The reverse of the returned order is a perfect elimination ordering
    whenever ``g`` is chordal.
    """
    n = g.n
    weight = [0] * n
    buckets: list[set[int]] = [set(range(n))]
    numbered = [False] * n
    order = []
    top = 0
    for _ in range(n):
        while top > 0 and not buckets[top]:
            top -= 1
        v = min(buckets[top])
        buckets[top].discard(v)
        numbered[v] = True
        order.append(v)
        for w in g.adj[v]:
            if not numbered[w]:
                buckets[weight[w]].discard(w)
                weight[w] += 1
                if weight[w] == len(buckets):
                    buckets.append(set())
                buckets[weight[w]].add(w)
                if weight[w] > top:
                    top = weight[w]
    return order


def is_perfect_elimination_order(g: Graph, peo: Sequence[int]) -> bool:
    """Check that each vertex's later neighbours form a clique (O(n + m))."""
    pos = {v: i for i, v in enumerate(peo)}
    if len(pos) != g.n:
        return False
    for v in peo:
        later = [w for w in g.adj[v] if pos[w] > pos[v]]
        if not later:
            continue
        parent = min(later, key=pos.__getitem__)
        # later neighbours of v other than its parent must be neighbours of the parent
        for w in later:
            if w != parent and w not in g.adj[parent]:
                return False
    return True


def is_chordal(g: Graph) -> tuple[bool, list[int] | None]:
    """Return ``(True, peo)`` for chordal graphs, ``(False, None)`` otherwise."""
    peo = list(reversed(max_cardinality_search(g)))
    if is_perfect_elimination_order(g, peo):
        return True, peo
    return False, None


def induced_subgraph(g: Graph, x: Iterable[int]) -> tuple[Graph, dict[int, int], list[int]]:
    """G[X] with dense relabelling.

    Returns ``(sub, to_sub, to_host)``: ``to_sub`` maps host ids to sub ids
    and ``to_host[i]`` is the host id of sub vertex ``i``.  Relabelling keeps
    the host order.
    """
    to_host = sorted(_checked(g, x))
    to_sub = {v: i for i, v in enumerate(to_host)}
    edges = [(to_sub[u], to_sub[v]) for u in to_host for v in g.adj[u] if v in to_sub and u < v]
    return Graph(len(to_host), edges), to_sub, to_host


def remove_vertices(g: Graph, x: Iterable[int]) -> tuple[Graph, dict[int, int], list[int]]:
    """G - X, relabelled as in :func:`induced_subgraph`."""
    x = _checked(g, x)
    return induced_subgraph(g, [v for v in range(g.n) if v not in x])


def bfs_order(g: Graph, start: int) -> list[int]:
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in sorted(g.adj[u]):
            if w not in seen:
                seen.add(w)
                order.append(w)
                queue.append(w)
    return order


def true_twin_classes(g: Graph) -> list[list[int]]:
    """Classes of vertices sharing the same closed neighbourhood."""
    classes: dict[frozenset[int], list[int]] = {}
    for v in range(g.n):
        classes.setdefault(g.adj[v] | {v}, []).append(v)
    return sorted(classes.values())
