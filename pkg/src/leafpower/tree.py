"""Rooted trees whose leaves are graph vertices, plus valued trees.

A :class:`RootedTree` stores a parent array (``-1`` marks the root) and a
label array (the graph vertex held by a leaf, ``-1`` for internal nodes).
A :class:`ValuedTree` adds a value per internal node: the distance to the
nearest leaf that was cut away by a restriction, or ``INF``.

Heights follow the convention that a single node has height 1.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, Sequence

from .graph import Graph

INF = math.inf


class TreeError(ValueError):
    """Malformed tree or bad arguments to a tree operation."""


class RootedTree:
    __slots__ = ("parent", "label", "root", "children", "_leaf_node", "_depth", "_post", "_pre")

    def __init__(self, parent: Sequence[int], label: Sequence[int]):
        if len(parent) != len(label) or not parent:
            raise TreeError("parent and label arrays must be non-empty and equally long")
        self.parent = tuple(parent)
        self.label = tuple(label)
        n = len(self.parent)
        children: list[list[int]] = [[] for _ in range(n)]
        roots = []
        for v, p in enumerate(self.parent):
            if p == -1:
                roots.append(v)
            elif 0 <= p < n and p != v:
                children[p].append(v)
            else:
                raise TreeError(f"bad parent {p} for node {v}")
        if len(roots) != 1:
            raise TreeError(f"expected exactly one root, found {len(roots)}")
        self.root = roots[0]
        self.children = tuple(tuple(c) for c in children)
        leaf_node = {}
        for v in range(n):
            if self.children[v]:
                if self.label[v] != -1:
                    raise TreeError(f"internal node {v} carries label {self.label[v]}")
            else:
                lab = self.label[v]
                if lab < 0:
                    raise TreeError(f"leaf node {v} has no label")
                if lab in leaf_node:
                    raise TreeError(f"label {lab} used by two leaves")
                leaf_node[lab] = v
        self._leaf_node = leaf_node
        # depth doubles as a connectivity/acyclicity check
        depth = [-1] * n
        depth[self.root] = 0
        queue = deque([self.root])
        seen = 1
        while queue:
            u = queue.popleft()
            for c in self.children[u]:
                depth[c] = depth[u] + 1
                seen += 1
                queue.append(c)
        if seen != n:
            raise TreeError("parent relation is not a single tree")
        self._depth = tuple(depth)
        self._post = self._pre = None

    # basic queries -------------------------------------------------------
    def __len__(self) -> int:
        return len(self.parent)

    def __repr__(self) -> str:
        return f"RootedTree({to_nested(self)!r})"

    def is_leaf(self, v: int) -> bool:
        return not self.children[v]

    def leaves(self) -> list[int]:
        return [v for v in range(len(self.parent)) if not self.children[v]]

    def internal_nodes(self) -> list[int]:
        return [v for v in range(len(self.parent)) if self.children[v]]

    def leaf_labels(self) -> frozenset[int]:
        return frozenset(self._leaf_node)

    def node_of(self, label: int) -> int:
        try:
            return self._leaf_node[label]
        except KeyError:
            raise TreeError(f"no leaf labelled {label}") from None

    def depth(self, v: int) -> int:
        return self._depth[v]

    def height(self) -> int:
        return 1 + max(self._depth)

    def preorder(self, start: int | None = None) -> list[int]:
        if start is None or start == self.root:
            if self._pre is None:
                self._pre = self._walk_pre(self.root)
            return self._pre
        return self._walk_pre(start)

    def _walk_pre(self, start: int) -> list[int]:
        out = []
        stack = [start]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(reversed(self.children[u]))
        return out

    def postorder(self, start: int | None = None) -> list[int]:
        """Children before parents.  Whole-tree orders are cached; do not mutate them."""
        if start is None or start == self.root:
            if self._post is None:
                self._post = self._rev_pre(self.root)[::-1]
            return self._post
        return self._rev_pre(start)[::-1]

    def _rev_pre(self, start: int | None) -> list[int]:
        out = []
        stack = [self.root if start is None else start]
        while stack:
            u = stack.pop()
            out.append(u)
            stack.extend(self.children[u])
        return out

    def subtree_leaves(self, v: int) -> list[int]:
        return [self.label[u] for u in self.preorder(v) if not self.children[u]]

    def neighbors(self, v: int) -> list[int]:
        p = self.parent[v]
        return list(self.children[v]) + ([p] if p != -1 else [])

    def distances_from(self, v: int) -> list[int]:
        """Distance from node ``v`` to every node."""
        dist = [-1] * len(self.parent)
        dist[v] = 0
        queue = deque([v])
        while queue:
            u = queue.popleft()
            for w in self.neighbors(u):
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        return dist


class ValuedTree:
    """A rooted tree with a value on every internal node (``None`` on leaves)."""

    __slots__ = ("tree", "sigma")

    def __init__(self, tree: RootedTree, sigma: Sequence[float | int | None]):
        if len(sigma) != len(tree):
            raise TreeError("sigma must have one entry per node")
        sig = []
        for v, s in enumerate(sigma):
            if tree.children[v]:
                if s is None or (s != INF and (int(s) != s or s < 0)):
                    raise TreeError(f"internal node {v} needs a value in N or INF, got {s!r}")
                sig.append(INF if s == INF else int(s))
            else:
                sig.append(None)
        self.tree = tree
        self.sigma = tuple(sig)

    def __repr__(self) -> str:
        return f"ValuedTree({to_nested(self.tree, self.sigma)!r})"

    def __len__(self) -> int:
        return len(self.tree)

    def height(self) -> int:
        return self.tree.height()

    def is_bounded(self, s: int) -> bool:
        return all(x is None or x == INF or x <= s for x in self.sigma)

    def subtree(self, v: int) -> "ValuedTree":
        """The valued subtree rooted at node ``v`` (values copied as is)."""
        nodes = self.tree.preorder(v)
        idx = {u: i for i, u in enumerate(nodes)}
        parent = [-1 if u == v else idx[self.tree.parent[u]] for u in nodes]
        t = RootedTree(parent, [self.tree.label[u] for u in nodes])
        return ValuedTree(t, [self.sigma[u] for u in nodes])


class TreeBuilder:
    """Mutable helper for assembling trees node by node."""

    def __init__(self) -> None:
        self.parent: list[int] = []
        self.label: list[int] = []
        self.sigma: list[float | int | None] = []

    def add(self, parent: int, label: int = -1, sigma: float | int | None = None) -> int:
        self.parent.append(parent)
        self.label.append(label)
        self.sigma.append(sigma)
        return len(self.parent) - 1

    def add_path(self, parent: int, length: int, label: int) -> int:
        """Hang a path of ``length`` edges below ``parent`` ending in leaf ``label``."""
        if length < 1:
            raise TreeError("path length must be positive")
        node = parent
        for _ in range(length - 1):
            node = self.add(node)
        return self.add(node, label)

    def graft(self, parent: int, tree: RootedTree, top: int | None = None) -> dict[int, int]:
        """Copy the subtree of ``tree`` at ``top`` below ``parent``; returns the node map."""
        top = tree.root if top is None else top
        mapping = {}
        for u in tree.preorder(top):
            p = parent if u == top else mapping[tree.parent[u]]
            mapping[u] = self.add(p, tree.label[u])
        return mapping

    def build(self) -> RootedTree:
        return RootedTree(self.parent, self.label)

    def build_valued(self) -> ValuedTree:
        return ValuedTree(self.build(), self.sigma)


# construction helpers ----------------------------------------------------

def from_nested(spec) -> RootedTree:
    """Build a tree from nested lists: an int is a leaf, a list is an internal node.

    >>> from_nested([0, [1, 2]]).height()
    3
    """
    return _from_nested(spec, valued=False)


def valued_from_nested(spec) -> ValuedTree:
    """Like :func:`from_nested` but internal nodes are ``(sigma, [children])``."""
    return _from_nested(spec, valued=True)


def _from_nested(spec, valued: bool):
    b = TreeBuilder()
    stack = [(spec, -1)]
    while stack:
        item, parent = stack.pop()
        if isinstance(item, int):
            b.add(parent, item)
            continue
        if valued:
            sigma, kids = item
        else:
            sigma, kids = INF, item
        if not kids:
            raise TreeError("internal node without children")
        node = b.add(parent, -1, sigma)
        for c in reversed(list(kids)):
            stack.append((c, node))
    return b.build_valued() if valued else b.build()


def to_nested(t: RootedTree, sigma: Sequence | None = None, node: int | None = None):
    """Inverse of :func:`from_nested` (or of :func:`valued_from_nested` with ``sigma``)."""
    node = t.root if node is None else node
    if not t.children[node]:
        return t.label[node]
    kids = [to_nested(t, sigma, c) for c in t.children[node]]
    return kids if sigma is None else (sigma[node], kids)


def from_edges(node_count: int, edges: Iterable[tuple[int, int]], root: int,
               label: Sequence[int]) -> RootedTree:
    """Root an unrooted tree given by ``edges`` at ``root``."""
    adj: list[list[int]] = [[] for _ in range(node_count)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = [-2] * node_count
    parent[root] = -1
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if parent[w] == -2:
                parent[w] = u
                queue.append(w)
    if -2 in parent:
        raise TreeError("edge set is not connected")
    return RootedTree(parent, label)


# distances and verification ----------------------------------------------

def tree_distance(t: RootedTree, a: int, b: int) -> int:
    """Number of edges on the path between nodes ``a`` and ``b``."""
    n = len(t)
    if not (0 <= a < n and 0 <= b < n):
        raise TreeError(f"unknown node in ({a}, {b})")
    d = 0
    while t.depth(a) > t.depth(b):
        a = t.parent[a]
        d += 1
    while t.depth(b) > t.depth(a):
        b = t.parent[b]
        d += 1
    while a != b:
        a, b = t.parent[a], t.parent[b]
        d += 2
    return d


def leaf_distance_matrix(t: RootedTree) -> dict[int, dict[int, int]]:
    """Pairwise distances between leaf labels."""
    out = {}
    for lab in t.leaf_labels():
        dist = t.distances_from(t.node_of(lab))
        out[lab] = {t.label[v]: dist[v] for v in t.leaves()}
    return out


def verify_k_leaf_root(g: Graph, t: RootedTree, k: int) -> tuple[bool, tuple[int, int, int] | None]:
    """Check that ``t`` is a k-leaf root of ``g``.

    Returns ``(True, None)`` or ``(False, (u, v, dist))`` for the first pair
    (in vertex order) whose adjacency disagrees with its tree distance.
    Raises :class:`TreeError` when the leaf labels are not exactly ``V(g)``.
    """
    if t.leaf_labels() != frozenset(range(g.n)):
        raise TreeError("leaf labels of the tree must be exactly the graph's vertices")
    for u in range(g.n):
        dist = t.distances_from(t.node_of(u))
        for v in range(u + 1, g.n):
            d = dist[t.node_of(v)]
            if (d <= k) != (v in g.adj[u]):
                return False, (u, v, d)
    return True, None


# restrictions --------------------------------------------------------------

def _kept_nodes(t: RootedTree, x: frozenset[int]) -> tuple[list[bool], int]:
    n = len(t)
    count = [0] * n
    for v in t.postorder():
        if not t.children[v]:
            count[v] = 1 if t.label[v] in x else 0
        else:
            count[v] = sum(count[c] for c in t.children[v])
    # a node lies on a path between two kept leaves iff it has kept leaves
    # below it and either kept leaves elsewhere or two children with kept leaves
    top = t.root
    while t.children[top]:
        live = [c for c in t.children[top] if count[c]]
        if len(live) != 1:
            break
        top = live[0]
    keep = [False] * n
    for v in t.preorder(top):
        if count[v]:
            keep[v] = True
    return keep, top


def _check_subset(t: RootedTree, x: Iterable[int]) -> frozenset[int]:
    x = frozenset(x)
    if not x:
        raise TreeError("restriction needs a non-empty leaf set")
    missing = x - t.leaf_labels()
    if missing:
        raise TreeError(f"labels {sorted(missing)} are not leaves of the tree")
    return x


def restrict(t: RootedTree, x: Iterable[int]) -> tuple[RootedTree, list[int]]:
    """Minimal subtree spanning the leaves labelled by ``x``.

    Returns ``(sub, corr)`` where ``corr[i]`` is the node of ``t`` that node
    ``i`` of ``sub`` stands for.
    """
    x = _check_subset(t, x)
    keep, top = _kept_nodes(t, x)
    corr = [v for v in t.preorder(top) if keep[v]]
    idx = {v: i for i, v in enumerate(corr)}
    parent = [-1 if v == top else idx[t.parent[v]] for v in corr]
    return RootedTree(parent, [t.label[v] for v in corr]), corr


def valued_restrict_with_map(t: RootedTree, x: Iterable[int],
                             sigma: Sequence | None = None) -> tuple[ValuedTree, list[int]]:
    """Valued restriction of ``t`` to ``x`` plus the node correspondence.

    Each kept internal node gets the distance to the nearest leaf below one of
    its removed children.  When ``sigma`` is given, ``t`` is itself treated as
    a valued tree and its own values contribute too (values of removed
    internal nodes count with their distance added).
    """
    sub, corr = restrict(t, x)
    keep = set(corr)
    # nearest hidden leaf below each node, counting only hidden material
    below = [INF] * len(t)
    for v in t.postorder():
        if not t.children[v]:
            below[v] = INF if v in keep else 0
            continue
        best = INF if sigma is None else sigma[v]
        for c in t.children[v]:
            if c not in keep:
                best = min(best, below[c] + 1)
        below[v] = best
    # ``below`` for kept v already only looks through removed children
    values = [None if not sub.children[i] else below[v] for i, v in enumerate(corr)]
    return ValuedTree(sub, values), corr


def valued_restrict(t: RootedTree, x: Iterable[int]) -> ValuedTree:
    return valued_restrict_with_map(t, x)[0]


# isomorphism and canonical codes -----------------------------------------

def _codes(t: RootedTree, sigma: Sequence | None, leaf_key, table: dict) -> list[int]:
    """Intern a code id for every node; equal ids mean isomorphic subtrees."""
    code = [0] * len(t)
    for v in t.postorder():
        if not t.children[v]:
            key = (0, leaf_key(t.label[v]))
        else:
            s = -1 if sigma is None else (-1 if sigma[v] == INF else sigma[v])
            key = (1, s, *sorted(code[c] for c in t.children[v]))
        cid = table.get(key)
        if cid is None:
            cid = table[key] = len(table)
        code[v] = cid
    return code


def _identity(x):
    return x


def leaf_isomorphic(t1: RootedTree, t2: RootedTree) -> tuple[bool, dict[int, int] | None]:
    """Find the isomorphism fixing leaf labels and mapping root to root.

    When it exists it is unique; it is returned as a node map ``t1 -> t2``.
    """
    return _match(t1, None, t2, None)


def value_isomorphic(v1: ValuedTree, v2: ValuedTree) -> bool:
    return _match(v1.tree, v1.sigma, v2.tree, v2.sigma)[0]


def _match(t1, s1, t2, s2):
    if t1.leaf_labels() != t2.leaf_labels() or len(t1) != len(t2):
        return False, None
    table: dict = {}
    c1 = _codes(t1, s1, _identity, table)
    c2 = _codes(t2, s2, _identity, table)
    if c1[t1.root] != c2[t2.root]:
        return False, None
    mapping = {}
    stack = [(t1.root, t2.root)]
    while stack:
        a, b = stack.pop()
        mapping[a] = b
        # children of a node have distinct codes: leaves are distinct, and two
        # internal siblings with equal codes would need equal leaf sets
        by_code = {c2[y]: y for y in t2.children[b]}
        for x in t1.children[a]:
            stack.append((x, by_code[c1[x]]))
    return True, mapping


def _serialize(t: RootedTree, sigma: Sequence | None, leaf_key) -> bytes:
    parts: dict[int, bytes] = {}
    for v in t.postorder():
        if not t.children[v]:
            parts[v] = b"L%d;" % leaf_key(t.label[v])
        else:
            s = b"inf" if sigma is None or sigma[v] == INF else b"%d" % sigma[v]
            kids = sorted(parts.pop(c) for c in t.children[v])
            parts[v] = b"(" + s + b":" + b"".join(kids) + b")"
    return parts[t.root]


def canonical_code(v: ValuedTree | RootedTree, leaf_key=None) -> bytes:
    """Order-independent canonical encoding.

    ``leaf_key`` maps leaf labels to integers (default: the label itself).
    Two valued trees get equal codes iff they are value-isomorphic once every
    leaf is replaced by its key.  Plain rooted trees are encoded with every
    value read as ``INF``.
    """
    if leaf_key is None:
        key = _identity
    elif callable(leaf_key):
        key = leaf_key
    else:
        key = leaf_key.__getitem__
    if isinstance(v, ValuedTree):
        return _serialize(v.tree, v.sigma, key)
    return _serialize(v, None, key)


def contract_unary(t: RootedTree) -> tuple[RootedTree, list[int]]:
    """Suppress unary internal nodes; returns the tree and edge lengths to parents."""
    keep = [v for v in t.preorder() if v == t.root or len(t.children[v]) != 1]
    idx = {v: i for i, v in enumerate(keep)}
    parent, length = [], []
    for v in keep:
        if v == t.root:
            parent.append(-1)
            length.append(0)
            continue
        p, d = t.parent[v], 1
        while p not in idx:
            p, d = t.parent[p], d + 1
        parent.append(idx[p])
        length.append(d)
    return RootedTree(parent, [t.label[v] for v in keep]), length


def prune_unlabelled(t: RootedTree, drop: Iterable[int] = ()) -> RootedTree:
    """Remove leaves labelled in ``drop`` and every internal node left without leaves.

    Unary chains are kept; the root stays the root (it may become unary).
    """
    drop = frozenset(drop)
    alive = [False] * len(t)
    for v in t.postorder():
        if not t.children[v]:
            alive[v] = t.label[v] not in drop
        else:
            alive[v] = any(alive[c] for c in t.children[v])
    if not alive[t.root]:
        raise TreeError("nothing left after pruning")
    nodes = [v for v in t.preorder() if alive[v]]
    idx = {v: i for i, v in enumerate(nodes)}
    parent = [-1 if v == t.root else idx[t.parent[v]] for v in nodes]
    return RootedTree(parent, [t.label[v] for v in nodes])


def relabel_leaves(t: RootedTree, mapping) -> RootedTree:
    lab = [(-1 if x == -1 else mapping[x]) for x in t.label]
    return RootedTree(t.parent, lab)


def reroot(t: RootedTree, new_root: int) -> RootedTree:
    """Same unrooted tree hung from ``new_root``.

    Unlabelled nodes that become childless (a former unary root chain) are
    dropped; leaf distances are unchanged.
    """
    n = len(t)
    adj: list[list[int]] = [[] for _ in range(n)]
    for v, p in enumerate(t.parent):
        if p != -1:
            adj[v].append(p)
            adj[p].append(v)
    parent = [-2] * n
    parent[new_root] = -1
    order = [new_root]
    for u in order:
        for w in adj[u]:
            if parent[w] == -2:
                parent[w] = u
                order.append(w)
    nkids = [0] * n
    for v in order[1:]:
        nkids[parent[v]] += 1
    alive = [True] * n
    for v in reversed(order):
        if nkids[v] == 0 and t.label[v] == -1:
            alive[v] = False
            if parent[v] >= 0:
                nkids[parent[v]] -= 1
    if not alive[new_root]:
        raise TreeError("tree has no labelled leaves")
    if n > 1 and nkids[new_root] == 0:
        raise TreeError("cannot root at a leaf")
    nodes = [v for v in order if alive[v]]
    idx = {v: i for i, v in enumerate(nodes)}
    return RootedTree([-1 if parent[v] == -1 else idx[parent[v]] for v in nodes],
                      [t.label[v] for v in nodes])


def root_at_parent_of(t: RootedTree, label: int) -> RootedTree:
    """Reroot at the neighbour of leaf ``label``."""
    leaf = t.node_of(label)
    nb = t.neighbors(leaf)
    if not nb:
        raise TreeError("single-node tree has no parent for its leaf")
    return reroot(t, nb[0])
