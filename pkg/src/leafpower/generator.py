"""Seeded corpora: random leaf powers with their roots, planted similar
structures, and a few named small graphs.

Randomness comes from :class:`SplitMix64`, a 64-bit counter hashed with the
SplitMix finalizer.  It is tiny, portable, and gives identical streams on
every platform, so a seed fully determines a corpus.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .graph import Graph, is_connected
from .similar import SimilarStructure, validate_similar_structure
from .tree import RootedTree, TreeBuilder, leaf_distance_matrix

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


class SplitMix64:
    """state += golden gamma; output = mix(state)."""

    def __init__(self, seed: int):
        self.state = seed & MASK

    def next_u64(self) -> int:
        self.state = (self.state + GOLDEN) & MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        """Uniform integer in ``[0, n)`` by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def randint(self, lo: int, hi: int) -> int:
        return lo + self.below(hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())


@dataclass(frozen=True)
class GeneratorSpec:
    seed: int
    n_leaves: int
    max_arity: int = 3
    max_unary_chain: int = 1
    k: int = 3
    twins: int = 0

    def __post_init__(self):
        if self.n_leaves < 1:
            raise ValueError("n_leaves must be at least 1")
        if self.max_arity < 2:
            raise ValueError("max_arity must be at least 2")
        if not (0 <= self.max_unary_chain <= max(self.k, 0)):
            raise ValueError("max_unary_chain must lie in 0..k")
        if self.twins < 0:
            raise ValueError("twins must be non-negative")


def graph_of_root(t: RootedTree, k: int) -> Graph:
    """The k-leaf power of ``t``; leaf labels must be ``0..n-1``."""
    labels = sorted(t.leaf_labels())
    n = len(labels)
    if labels != list(range(n)):
        raise ValueError("leaf labels must be 0..n-1")
    dist = leaf_distance_matrix(t)
    return Graph(n, [(a, b) for a in labels for b in labels if a < b and dist[a][b] <= k])


def _random_shape(rng: SplitMix64, b: TreeBuilder, parent: int, count: int, spec: GeneratorSpec,
                  slots: list[int]) -> None:
    """Random subtree with ``count`` leaves under ``parent``; leaf nodes go to ``slots``."""
    stack = [(parent, count)]
    while stack:
        p, c = stack.pop()
        if c == 1:
            slots.append(b.add(p))
            continue
        arity = rng.randint(2, min(spec.max_arity, c))
        cuts = sorted(_sample(rng, c - 1, arity - 1))
        sizes = [b2 - a2 for a2, b2 in zip([0, *cuts], [*cuts, c])]
        node = p
        for size in sizes:
            hook = node
            for _ in range(rng.randint(0, spec.max_unary_chain)):
                hook = b.add(hook)
            if size == 1:
                slots.append(b.add(hook))
            else:
                stack.append((b.add(hook), size))


def _sample(rng: SplitMix64, n: int, m: int) -> list[int]:
    """``m`` distinct values from ``1..n``."""
    pool = list(range(1, n + 1))
    rng.shuffle(pool)
    return pool[:m]


def random_leaf_power(spec: GeneratorSpec) -> tuple[Graph, RootedTree]:
    """A random rooted tree with ``n_leaves`` leaves and its k-leaf power.

    Internal nodes branch into 2..max_arity parts and each child edge may be
    subdivided by up to ``max_unary_chain`` extra nodes.  ``twins`` extra
    leaves are added as siblings of existing leaves where arity allows.
    """
    rng = SplitMix64(spec.seed)
    b = TreeBuilder()
    root = b.add(-1)
    slots: list[int] = []
    if spec.n_leaves == 1:
        b = TreeBuilder()
        b.add(-1, 0)
        t = b.build()
        return Graph(1), t
    _random_shape(rng, b, root, spec.n_leaves, spec, slots)
    kids: dict[int, int] = {}
    for p in b.parent:
        if p >= 0:
            kids[p] = kids.get(p, 0) + 1
    for _ in range(spec.twins):
        options = [s for s in slots if kids.get(b.parent[s], 0) < spec.max_arity]
        if not options:
            break
        s = options[rng.below(len(options))]
        slots.append(b.add(b.parent[s]))
        kids[b.parent[s]] += 1
    order = list(range(len(slots)))
    rng.shuffle(order)
    for lab, s in zip(order, slots):
        b.label[s] = lab
    t = _drop_unary_root(b.build())
    return graph_of_root(t, spec.k), t


def _drop_unary_root(t: RootedTree) -> RootedTree:
    """Remove the construction wrapper so the tree starts at its first branching node."""
    r = t.root
    if len(t.children[r]) != 1 or t.label[r] != -1:
        return t
    keep = [v for v in range(len(t)) if v != r]
    idx = {v: i for i, v in enumerate(keep)}
    parent = [-1 if t.parent[v] == r else idx[t.parent[v]] for v in keep]
    return RootedTree(parent, [t.label[v] for v in keep])


def planted_similar_instance(copies: int, copy_spec: GeneratorSpec, k: int,
                             extra_leaves: int = 0, max_tries: int = 200) -> tuple[Graph, SimilarStructure]:
    """Plant ``copies`` isomorphic subtrees below one node ``v`` and read off the structure.

    ``v`` also gets a leaf ``z`` (the nearest leaf to ``v``) and optionally a
    random extra branch.  Then ``C_i`` is the part of copy ``i`` adjacent to
    ``z``, ``Y_i`` the rest of copy ``i`` and ``l_i(x) = dist(x, v)``.  Shapes
    are redrawn until the result validates.
    """
    if copies < 2:
        raise ValueError("copies must be at least 2")
    rng = SplitMix64(copy_spec.seed)
    for _ in range(max_tries):
        got = _plant_once(rng, copies, copy_spec, k, extra_leaves)
        if got is not None:
            return got
    raise RuntimeError(f"no valid planted instance after {max_tries} draws")


def _plant_once(rng, copies, spec, k, extra_leaves):
    shape_b = TreeBuilder()
    top = shape_b.add(-1)
    slots: list[int] = []
    if spec.n_leaves == 1:
        slots.append(top)
    else:
        _random_shape(rng, shape_b, top, spec.n_leaves, spec, slots)
    for idx, node in enumerate(slots):
        shape_b.label[node] = idx
    lead = rng.randint(0, spec.max_unary_chain)
    shape = shape_b.build()
    b = TreeBuilder()
    v = b.add(-1)
    z_len = rng.randint(1, 2)
    owner: list[tuple[int, int]] = []  # (node, copy index or -1)
    for i in range(copies):
        hook = v
        for _ in range(lead):
            hook = b.add(hook)
        m = b.graft(hook, shape, shape.root)
        owner += [(m[s], i) for s in slots]
    zn = b.add_path(v, z_len, -1)
    if extra_leaves:
        extra: list[int] = []
        hook = b.add(v)
        if extra_leaves == 1:
            extra.append(hook)
        else:
            _random_shape(rng, b, hook, extra_leaves, replace(spec, n_leaves=extra_leaves), extra)
        owner += [(s, -1) for s in extra]
    # labels: z first, then a shuffled order over the rest
    order = list(range(1, len(owner) + 1))
    rng.shuffle(order)
    b.label[zn] = 0
    for lab, (node, _) in zip(order, owner):
        b.label[node] = lab
    t = b.build()
    dist_v = t.distances_from(0)  # v is node 0
    if min(dist_v[node] for node, _ in owner) < z_len:
        return None
    g = graph_of_root(t, k)
    if not is_connected(g):
        return None
    cs, ys, lays = [], [], []
    for i in range(copies):
        mine = [t.label[node] for node, c in owner if c == i]
        c_set = frozenset(x for x in mine if g.has_edge(0, x))
        if not c_set:
            return None
        cs.append(c_set)
        ys.append(frozenset(mine) - c_set)
        lay = {t.label[node]: dist_v[node] for node, c in owner if c == i and t.label[node] in c_set}
        lay[0] = 0
        lays.append(lay)
    s = SimilarStructure(cs, ys, 0, lays)
    if not validate_similar_structure(g, s, k)[0]:
        return None
    return g, s


_NAMED = re.compile(r"^(path|cycle|clique|star)\((\d+)\)$")


def named_graph(name: str) -> Graph:
    """bull, dart, gem, path(n), cycle(n), clique(n), star(n) (``n`` leaves for stars)."""
    key = name.strip().lower()
    if key == "bull":
        return Graph(5, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 4)])
    if key == "dart":
        # K4 minus the edge 2-3, plus a pendant on vertex 0
        return Graph(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (0, 4)])
    if key == "gem":
        return Graph(5, [(0, 1), (1, 2), (2, 3), (4, 0), (4, 1), (4, 2), (4, 3)])
    m = _NAMED.match(key)
    if not m:
        raise ValueError(f"unknown graph name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "path":
        if n < 1:
            raise ValueError("path needs at least one vertex")
        return Graph(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "cycle":
        if n < 3:
            raise ValueError("cycle needs at least three vertices")
        return Graph(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "clique":
        if n < 1:
            raise ValueError("clique needs at least one vertex")
        return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    return Graph(n + 1, [(0, i) for i in range(1, n + 1)])
