"""Exhaustive k-leaf-root search for small graphs.

Candidate roots are unrooted trees whose internal nodes have degree at least
three and whose edges carry integer lengths in ``1..k+1``.  A length of
``k+1`` stands for "any length above k"; that is enough because a path is
short (at most ``k``) exactly when none of its edges is clamped and the sum
is at most ``k``.

Leaves are inserted one vertex at a time (in BFS order), either hanging from
an existing internal node or from a new node splitting an edge.  After each
insertion the new leaf's adjacencies are checked, so partial trees that
cannot extend are discarded early.  States are deduplicated per level with a
canonical form.
"""

from __future__ import annotations

from typing import Iterator

from .errors import ResourceError
from .graph import Graph, bfs_order, connected_components, induced_subgraph, max_cardinality_search
from .tree import RootedTree, TreeBuilder, ValuedTree, canonical_code, from_edges, valued_restrict

DEFAULT_LIMIT = 7


class _State:
    """Weighted unrooted tree. Nodes ``0..``; ``label[v]`` is a vertex or -1."""

    __slots__ = ("adj", "label", "leaf")

    def __init__(self, adj: list[dict[int, int]], label: list[int], leaf: dict[int, int]):
        self.adj = adj
        self.label = label
        self.leaf = leaf

    def copy(self) -> "_State":
        return _State([dict(a) for a in self.adj], list(self.label), dict(self.leaf))

    def edges(self) -> list[tuple[int, int, int]]:
        return [(a, b, w) for a, nb in enumerate(self.adj) for b, w in nb.items() if a < b]

    def leaf_distances(self, src: int, cap: int) -> dict[int, int]:
        """Clamped distances (anything above ``cap`` reported as ``cap + 1``) to leaf labels."""
        dist = {src: 0}
        stack = [src]
        out = {}
        while stack:
            u = stack.pop()
            du = dist[u]
            if self.label[u] >= 0 and u != src:
                out[self.label[u]] = du
                continue
            for w, ln in self.adj[u].items():
                if w not in dist:
                    dist[w] = min(cap + 1, du + ln)
                    stack.append(w)
        return out

    def canonical(self, anchor_label: int):
        """Canonical form rooted at the leaf holding ``anchor_label``."""
        start = self.leaf[anchor_label]
        parent = {start: -1}
        order = [start]
        for u in order:
            for w in self.adj[u]:
                if w not in parent:
                    parent[w] = u
                    order.append(w)
        code = {}
        for u in reversed(order):
            if self.label[u] >= 0 and u != start:
                code[u] = (0, self.label[u])
            else:
                kids = sorted((self.adj[u][c], code[c]) for c in self.adj[u] if parent.get(c) == u)
                code[u] = (1, tuple(kids))
        return code[start]

    def to_rooted(self, z: int) -> RootedTree:
        """Subdivide every edge into unit edges and root at the neighbour of leaf ``z``."""
        b_edges = []
        labels = list(self.label)
        count = len(self.adj)
        for a, b, w in self.edges():
            prev = a
            for _ in range(w - 1):
                labels.append(-1)
                b_edges.append((prev, count))
                prev = count
                count += 1
            b_edges.append((prev, b))
        zn = self.leaf[z]
        # neighbour of z after subdivision
        nb = [y for x, y in b_edges if x == zn] + [x for x, y in b_edges if y == zn]
        return from_edges(count, b_edges, nb[0], labels)


def _start(order: list[int], g: Graph, k: int) -> list[_State]:
    if len(order) == 1:
        return [_State([{}], [order[0]], {order[0]: 0})]
    a, b = order[0], order[1]
    out = []
    for w in range(2, k + 2):
        if (w <= k) == g.has_edge(a, b):
            out.append(_State([{1: w}, {0: w}], [a, b], {a: 0, b: 1}))
    return out


def _extensions(s: _State, x: int, k: int) -> Iterator[tuple[_State, int]]:
    """All ways to add leaf ``x``; yields the new state and the new leaf node."""
    top = k + 1
    # hang from an existing internal node
    for u, lab in enumerate(s.label):
        if lab >= 0:
            continue
        for p in range(1, top + 1):
            t = s.copy()
            xn = len(t.adj)
            t.adj.append({u: p})
            t.adj[u][xn] = p
            t.label.append(x)
            t.leaf[x] = xn
            yield t, xn
    # split an edge
    for a, b, w in s.edges():
        if w <= k:
            splits = [(i, w - i) for i in range(1, w)]
        else:
            splits = [(i, j) for i in range(1, top + 1) for j in range(1, top + 1) if i + j >= top]
        for i, j in splits:
            for p in range(1, top + 1):
                t = s.copy()
                m = len(t.adj)
                xn = m + 1
                del t.adj[a][b]
                del t.adj[b][a]
                t.adj.append({a: i, b: j, xn: p})
                t.adj.append({m: p})
                t.adj[a][m] = i
                t.adj[b][m] = j
                t.label += [-1, x]
                t.leaf[x] = xn
                yield t, xn


def _consistent(s: _State, xn: int, x: int, g: Graph, k: int) -> bool:
    for lab, d in s.leaf_distances(xn, k).items():
        if (d <= k) != g.has_edge(x, lab):
            return False
    return True


def _search(g: Graph, k: int, first_only: bool, order: list[int] | None = None,
            max_steps: int | None = None) -> list[_State]:
    """Realisations of connected ``g``: all of them, or just one when ``first_only``.

    ``max_steps`` bounds the number of states expanded by the first-only
    search; running out returns ``[]`` like a failed search.
    """
    order = order or bfs_order(g, 0)
    anchor = order[0]
    starts = _start(order, g, k)
    if len(order) <= 2:
        return starts[:1] if first_only else starts
    if first_only:
        seen: list[set] = [set() for _ in order]
        stack = [(st, 2) for st in starts]
        steps = 0
        while stack:
            steps += 1
            if max_steps is not None and steps > max_steps:
                return []
            st, i = stack.pop()
            x = order[i]
            for t, xn in _extensions(st, x, k):
                if not _consistent(t, xn, x, g, k):
                    continue
                key = t.canonical(anchor)
                if key in seen[i]:
                    continue
                seen[i].add(key)
                if i + 1 == len(order):
                    return [t]
                stack.append((t, i + 1))
        return []
    level = starts
    for i in range(2, len(order)):
        x = order[i]
        nxt = {}
        for st in level:
            for t, xn in _extensions(st, x, k):
                if _consistent(t, xn, x, g, k):
                    nxt.setdefault(t.canonical(anchor), t)
        level = list(nxt.values())
        if not level:
            break
    return level


def _check(g: Graph, k: int, limit: int) -> None:
    if k < 1:
        raise ValueError("k must be positive")
    if g.n > limit:
        raise ResourceError(f"oracle limited to {limit} vertices, graph has {g.n}")


def oracle_is_k_leaf_power(g: Graph, k: int, limit: int = DEFAULT_LIMIT) -> tuple[bool, RootedTree | None]:
    """Decide by exhaustive search; returns ``(verdict, witness or None)``.

    Components are searched independently; their witnesses are hung from a
    common root through paths long enough to keep them apart.
    """
    _check(g, k, limit)
    if g.n == 0:
        return True, None
    parts = []
    for comp in connected_components(g):
        sub, _, to_host = induced_subgraph(g, comp)
        found = _search(sub, k, first_only=True)
        if not found:
            return False, None
        t = found[0].to_rooted(0) if sub.n > 1 else RootedTree([-1], [0])
        parts.append((t, to_host))
    return True, _combine(parts, k)


def _combine(parts: list[tuple[RootedTree, list[int]]], k: int) -> RootedTree:
    if len(parts) == 1:
        t, to_host = parts[0]
        return RootedTree(t.parent, [-1 if x == -1 else to_host[x] for x in t.label])
    b = TreeBuilder()
    root = b.add(-1)
    for t, to_host in parts:
        hook = root
        for _ in range(k):
            hook = b.add(hook)
        mapping = {}
        for u in t.preorder():
            p = hook if u == t.root else mapping[t.parent[u]]
            lab = t.label[u]
            mapping[u] = b.add(p, -1 if lab == -1 else to_host[lab])
    return b.build()


def search_root(g: Graph, k: int, max_steps: int) -> RootedTree | None:
    """Depth-first hunt for one k-leaf root of connected ``g``, any size.

    Vertices are placed in maximum cardinality search order so each new leaf
    meets as many adjacency constraints as possible.  Gives up (``None``)
    after ``max_steps`` expanded states, so ``None`` proves nothing.
    """
    if g.n <= 2 or len(connected_components(g)) != 1:
        raise ValueError("need a connected graph with at least three vertices")
    order = max_cardinality_search(g)
    found = _search(g, k, True, order, max_steps)
    if not found:
        return None
    return found[0].to_rooted(order[0])


def oracle_all_roots(g: Graph, z: int, k: int, limit: int = DEFAULT_LIMIT) -> list[RootedTree]:
    """Every realisation (as a clamped weighted topology, expanded) rooted at z's parent."""
    _check(g, k, limit)
    if len(connected_components(g)) != 1:
        raise ValueError("graph must be connected")
    if g.n == 1:
        return [RootedTree([-1], [0])]
    perm = [z] + [v for v in range(g.n) if v != z]
    # put z first so the BFS order starts there
    h = Graph(g.n, [(perm.index(a), perm.index(b)) for a, b in g.edges()])
    out = []
    for st in _search(h, k, first_only=False):
        t = st.to_rooted(0)
        out.append(RootedTree(t.parent, [-1 if x == -1 else perm[x] for x in t.label]))
    return out


def oracle_enumerate_root_restrictions(g: Graph, z: int, k: int,
                                       limit: int = DEFAULT_LIMIT) -> list[ValuedTree]:
    """Valued restrictions to ``N[z]`` of all k-leaf roots rooted at z's parent."""
    _check(g, k, limit)
    if g.n == 1:
        return [ValuedTree(RootedTree([-1], [z]), [None])]
    closed = g.adj[z] | {z}
    seen = {}
    for t in oracle_all_roots(g, z, k, limit):
        v = valued_restrict(t, closed)
        seen.setdefault(canonical_code(v), v)
    return [seen[c] for c in sorted(seen)]
