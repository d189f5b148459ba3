"""Nice tree decompositions of connected chordal graphs with clique bags.

Construction: perfect elimination order, maximal cliques, a clique tree via
a maximum-weight spanning tree on clique intersections, then the usual
introduce/forget/join expansion.  A chain of forget nodes on top shrinks the
root bag to ``{z}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import Graph, is_chordal, is_connected, neighbors_closed

LEAF, INTRODUCE, FORGET, JOIN = "leaf", "introduce", "forget", "join"


class DecompositionError(ValueError):
    """Input graph does not meet the builder's preconditions."""


@dataclass
class NiceDecomposition:
    """Nodes are dense ids; ``children[i]`` lists the children of node ``i``.

    ``vertex[i]`` is the introduced or forgotten vertex (``-1`` otherwise).
    ``below[i]`` is the set of vertices in bags of the subtree at ``i`` and
    ``nbhd[i]`` is ``N[bag] & below``.
    """

    z: int
    bags: list[frozenset[int]] = field(default_factory=list)
    kind: list[str] = field(default_factory=list)
    vertex: list[int] = field(default_factory=list)
    children: list[tuple[int, ...]] = field(default_factory=list)
    root: int = -1
    below: list[frozenset[int]] = field(default_factory=list)
    nbhd: list[frozenset[int]] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.bags)

    def _add(self, bag, kind, vertex=-1, children=()) -> int:
        self.bags.append(frozenset(bag))
        self.kind.append(kind)
        self.vertex.append(vertex)
        self.children.append(tuple(children))
        return len(self.bags) - 1

    def postorder(self) -> list[int]:
        out, stack = [], [self.root]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out[::-1]

    def width(self) -> int:
        return max(len(b) for b in self.bags) - 1

    def _cache(self, g: Graph) -> None:
        n = len(self.bags)
        below: list = [None] * n
        nbhd: list = [None] * n
        for i in self.postorder():
            acc = set(self.bags[i])
            for c in self.children[i]:
                acc |= below[c]
            below[i] = frozenset(acc)
            nbhd[i] = neighbors_closed(g, self.bags[i]) & below[i]
        self.below, self.nbhd = below, nbhd


def maximal_cliques_chordal(g: Graph, peo: list[int]) -> list[frozenset[int]]:
    pos = {v: i for i, v in enumerate(peo)}
    cands = [frozenset([v, *(w for w in g.adj[v] if pos[w] > pos[v])]) for v in peo]
    cands = sorted(set(cands), key=lambda c: (-len(c), sorted(c)))
    out: list[frozenset[int]] = []
    for c in cands:
        if not any(c <= d for d in out):
            out.append(c)
    return out


def clique_tree(cliques: list[frozenset[int]]) -> list[tuple[int, int]]:
    """Maximum-weight spanning tree on pairwise intersection sizes (Kruskal)."""
    pairs = []
    for i in range(len(cliques)):
        for j in range(i + 1, len(cliques)):
            w = len(cliques[i] & cliques[j])
            if w:
                pairs.append((-w, i, j))
    pairs.sort()
    parent = list(range(len(cliques)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    edges = []
    for _, i, j in pairs:
        a, b = find(i), find(j)
        if a != b:
            parent[a] = b
            edges.append((i, j))
    return edges


def build_nice_decomposition(g: Graph, z: int) -> NiceDecomposition:
    """Nice decomposition rooted at the bag ``{z}``; every bag is a clique."""
    if not (0 <= z < g.n):
        raise DecompositionError(f"z={z} is not a vertex")
    if not is_connected(g):
        raise DecompositionError("graph must be connected")
    ok, peo = is_chordal(g)
    if not ok:
        raise DecompositionError("graph must be chordal")
    cliques = maximal_cliques_chordal(g, peo)
    adj: list[list[int]] = [[] for _ in cliques]
    for i, j in clique_tree(cliques):
        adj[i].append(j)
        adj[j].append(i)
    top = next(i for i, c in enumerate(cliques) if z in c)
    # orient the clique tree away from ``top``
    order, cparent = [top], {top: -1}
    for u in order:
        for w in adj[u]:
            if w not in cparent:
                cparent[w] = u
                order.append(w)
    d = NiceDecomposition(z=z)
    made: dict[int, int] = {}
    for ci in reversed(order):
        bag = cliques[ci]
        branches = []
        for cj in adj[ci]:
            if cparent.get(cj) != ci:
                continue
            node, cur = made[cj], set(cliques[cj])
            for v in sorted(cliques[cj] - bag):
                cur.discard(v)
                node = d._add(cur, FORGET, v, (node,))
            for v in sorted(bag - cliques[cj]):
                cur.add(v)
                node = d._add(cur, INTRODUCE, v, (node,))
            branches.append(node)
        if not branches:
            verts = sorted(bag)
            cur = {verts[0]}
            node = d._add(cur, LEAF)
            for v in verts[1:]:
                cur.add(v)
                node = d._add(cur, INTRODUCE, v, (node,))
            branches.append(node)
        node = branches[0]
        for other in branches[1:]:
            node = d._add(bag, JOIN, -1, (node, other))
        made[ci] = node
    node, cur = made[top], set(cliques[top])
    for v in sorted(cur - {z}):
        cur.discard(v)
        node = d._add(cur, FORGET, v, (node,))
    d.root = node
    d._cache(g)
    return d


def validate_decomposition(g: Graph, d: NiceDecomposition) -> tuple[bool, str | None]:
    """Independent check of the nice-decomposition invariants.

    Returns ``(True, None)`` or ``(False, description)`` for the first issue.
    """
    n = len(d.bags)
    if not (0 <= d.root < n):
        return False, "root id out of range"
    parent = [-1] * n
    for i, ch in enumerate(d.children):
        for c in ch:
            if parent[c] != -1 or c == d.root:
                return False, f"node {c} has two parents"
            parent[c] = i
    # reachability from the root
    seen, stack = {d.root}, [d.root]
    while stack:
        u = stack.pop()
        for c in d.children[u]:
            if c in seen:
                return False, "cycle in decomposition"
            seen.add(c)
            stack.append(c)
    if len(seen) != n:
        return False, "decomposition is not connected"
    if d.bags[d.root] != frozenset([d.z]):
        return False, f"root bag is {sorted(d.bags[d.root])}, expected [{d.z}]"
    for i in range(n):
        bag, ch, kind, v = d.bags[i], d.children[i], d.kind[i], d.vertex[i]
        if not bag:
            return False, f"bag {i} is empty"
        if not g.is_clique(bag):
            return False, f"bag {i} is not a clique"
        if kind == LEAF:
            ok = not ch and len(bag) == 1
        elif kind == INTRODUCE:
            ok = len(ch) == 1 and v in bag and d.bags[ch[0]] == bag - {v}
        elif kind == FORGET:
            ok = len(ch) == 1 and v not in bag and d.bags[ch[0]] == bag | {v}
        elif kind == JOIN:
            ok = len(ch) == 2 and all(d.bags[c] == bag for c in ch)
        else:
            ok = False
        if not ok:
            return False, f"node {i} violates the {kind} shape"
    covered = set()
    for bag in d.bags:
        covered |= bag
    if covered != set(range(g.n)):
        return False, f"vertices {sorted(set(range(g.n)) - covered)} appear in no bag"
    for u, w in g.edges():
        if not any(u in b and w in b for b in d.bags):
            return False, f"edge ({u}, {w}) is not covered"
    for v in range(g.n):
        holders = [i for i in range(n) if v in d.bags[i]]
        tops = [i for i in holders if parent[i] == -1 or v not in d.bags[parent[i]]]
        if len(tops) != 1:
            return False, f"bags holding vertex {v} are not connected"
    return True, None
