"""Dynamic program over a nice tree decomposition.

For every bag ``B`` the program computes ``Q[B]``: all valued trees (up to
value-isomorphism) that are valued restrictions, to ``N[B]`` intersected with
the vertices seen below ``B``, of some k-leaf root of the graph induced by
those vertices, with the restriction's root being the root of that k-leaf
root.

The sets are built constructively from the children's sets:

* introduce ``v``: hang a path ending in ``v`` from an internal node of a
  child tree, or from a new root placed above it;
* forget: restrict the child tree and fold the cut-away parts into the values;
* join: glue two trees that agree on the bag, node by node.

Each entry remembers which child entries produced it, so a full k-leaf root
can be rebuilt for any entry of the root bag.  The literal membership tests
(:func:`introduce_holds`, :func:`forget_holds`, :func:`join_holds`) and the
candidate stream (:func:`candidate_valued_trees`) are kept for cross-checks
on tiny inputs.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Iterable, Iterator

from .decomposition import FORGET, INTRODUCE, JOIN, LEAF, NiceDecomposition, build_nice_decomposition
from .errors import ResourceError
from .graph import Graph, connected_components, induced_subgraph, is_chordal, neighbors_closed, true_twin_classes
from .oracle import search_root
from .tree import (INF, RootedTree, TreeBuilder, ValuedTree, canonical_code, leaf_isomorphic, restrict,
                   valued_restrict_with_map)

log = logging.getLogger(__name__)


# helpers --------------------------------------------------------------------

def _spread(t: RootedTree, init: list) -> list:
    """``out[x] = min_y init[y] + dist(x, y)`` over the tree (two passes)."""
    down = list(init)
    post = t.postorder()
    for x in post:
        p = t.parent[x]
        if p != -1 and down[x] + 1 < down[p]:
            down[p] = down[x] + 1
    for x in reversed(post):
        p = t.parent[x]
        if p != -1 and down[p] + 1 < down[x]:
            down[x] = down[p] + 1
    return down


class Entry:
    """One member of a valid set, with provenance.

    ``kind`` is the recurrence case; ``src`` holds child entry indices;
    ``nodemap`` links nodes of this tree to nodes of the child trees (see the
    individual recurrences).
    """

    __slots__ = ("tree", "sigma", "kind", "src", "nodemap", "_skeleton", "_reach")

    def __init__(self, tree: RootedTree, sigma, kind: str, src=(), nodemap=None):
        self.tree = tree
        self.sigma = tuple(sigma)
        self.kind = kind
        self.src = src
        self.nodemap = nodemap
        self._skeleton = None
        self._reach = None

    def valued(self) -> ValuedTree:
        return ValuedTree(self.tree, self.sigma)

    def code(self) -> bytes:
        return canonical_code(self.valued())


class ValidSet:
    """Deduplicated valued trees of one bag, keyed by canonical code."""

    def __init__(self, leaves: Iterable[int] = ()):
        self.leaves = frozenset(leaves)
        self.entries: list[Entry] = []
        self._index: dict[bytes, int] = {}
        self.dropped_unbounded = 0

    def add(self, e: Entry) -> bool:
        c = e.code()
        if c in self._index:
            return False
        self._index[c] = len(self.entries)
        self.entries.append(e)
        return True

    def trim(self, cap: int) -> None:
        """Keep the ``cap`` smallest trees (ties by code).  Every kept entry stays valid."""
        if len(self.entries) <= cap:
            return
        ranked = sorted(self._index.items(), key=lambda kv: (len(self.entries[kv[1]].tree), kv[0]))
        keep = [self.entries[i] for _, i in ranked[:cap]]
        self.entries = keep
        self._index = {e.code(): i for i, e in enumerate(keep)}

    def drop_dominated(self) -> None:
        """Remove entries whose tree reappears with values at least as large everywhere.

        Every recurrence only asks values to be large enough and passes them
        on through minima, so a dominated entry extends no further than its
        dominator.  The root set stays nonempty exactly when it was.
        """
        groups: dict[bytes, list[tuple[tuple, int]]] = {}
        for i, e in enumerate(self.entries):
            shape, vals = _profile(e)
            groups.setdefault(shape, []).append((vals, i))
        keep_idx = []
        for members in groups.values():
            if len(members) == 1:
                keep_idx.append(members[0][1])
                continue
            # a dominator has at least as many infinite values and a larger finite sum
            members.sort(key=lambda m: (sum(x == INF for x in m[0]), sum(x for x in m[0] if x != INF)),
                         reverse=True)
            kept: list[tuple] = []
            for vals, i in members:
                if any(all(a <= b for a, b in zip(vals, other)) for other in kept):
                    continue
                kept.append(vals)
                keep_idx.append(i)
        if len(keep_idx) == len(self.entries):
            return
        keep_idx.sort()
        self.entries = [self.entries[i] for i in keep_idx]
        self._index = {e.code(): i for i, e in enumerate(self.entries)}

    def codes(self) -> set[bytes]:
        return set(self._index)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[ValuedTree]:
        return (e.valued() for e in self.entries)

    def __contains__(self, v: ValuedTree) -> bool:
        return canonical_code(v) in self._index


def _profile(e: Entry) -> tuple[bytes, tuple]:
    """Code of the tree without values, and the values in a matching node order."""
    t, sigma = e.tree, e.sigma
    parts: dict[int, bytes] = {}
    vals: dict[int, tuple] = {}
    for v in t.postorder():
        if not t.children[v]:
            parts[v] = b"L%d;" % t.label[v]
            vals[v] = ()
            continue
        # siblings hold disjoint leaf sets, so their codes differ
        kids = sorted(t.children[v], key=parts.__getitem__)
        parts[v] = b"(" + b"".join(parts[c] for c in kids) + b")"
        s = sigma[v]
        out = [INF if s is None else s]
        for c in kids:
            out.extend(vals[c])
        vals[v] = tuple(out)
    return parts[t.root], vals[t.root]


# recurrences ------------------------------------------------------------------

def dp_leaf(bag: Iterable[int]) -> ValidSet:
    (v,) = tuple(bag)
    q = ValidSet([v])
    q.add(Entry(RootedTree([-1], [v]), [None], LEAF))
    return q


def dp_introduce(bag: Iterable[int], child_set: ValidSet, v: int, g: Graph, k: int) -> ValidSet:
    """Attach leaf ``v`` to every child tree in every admissible way."""
    bag = frozenset(bag)
    q = ValidSet(child_set.leaves | {v})
    for idx, e in enumerate(child_set.entries):
        for parent, label, sigma in _introduce_one(e, v, g, k):
            q.add(Entry(RootedTree(parent, label), sigma, INTRODUCE, (idx,)))
    return q


def _introduce_one(e: Entry, v: int, g: Graph, k: int):
    t, sig = e.tree, e.sigma
    m = len(t)
    nbrs = [t.node_of(w) for w in t.leaf_labels() if w in g.adj[v]]
    non = [0 if (t.label[x] >= 0 and t.label[x] not in g.adj[v]) else INF for x in range(m)]
    far = _spread(t, non)
    hid = _spread(t, [INF if s is None else s for s in sig])
    need = [0] * m
    for b in nbrs:
        d = t.distances_from(b)
        need = [max(a, c) for a, c in zip(need, d)]
    for x in range(m):
        if not t.children[x]:
            continue
        lo = max(1, k + 1 - far[x], k + 1 - hid[x])
        hi = k - need[x]
        for ln in range(int(lo), hi + 1):
            parent = list(t.parent)
            label = list(t.label)
            sigma = list(sig)
            prev = x
            for _ in range(ln - 1):
                parent.append(prev)
                label.append(-1)
                sigma.append(INF)
                prev = len(parent) - 1
            parent.append(prev)
            label.append(v)
            sigma.append(None)
            yield parent, label, sigma
    # a new root above the old one
    r = t.root
    lo = max(2, k + 1 - far[r], k + 1 - hid[r])
    hi = k - need[r]
    for total in range(int(lo), hi + 1):
        for up in range(1, total):
            ln = total - up
            parent = list(t.parent)
            label = list(t.label)
            sigma = list(sig)
            top = len(parent)
            parent.append(-1)
            label.append(-1)
            sigma.append(INF)
            prev = top
            for _ in range(up - 1):
                parent.append(prev)
                label.append(-1)
                sigma.append(INF)
                prev = len(parent) - 1
            parent[r] = prev
            prev = top
            for _ in range(ln - 1):
                parent.append(prev)
                label.append(-1)
                sigma.append(INF)
                prev = len(parent) - 1
            parent.append(prev)
            label.append(v)
            sigma.append(None)
            yield parent, label, sigma


def dp_forget(bag: Iterable[int], child_set: ValidSet, v: int, g: Graph, k: int) -> ValidSet:
    """Restrict every child tree to ``N[bag]``, folding removed parts into values."""
    bag = frozenset(bag)
    keep = child_set.leaves & neighbors_closed(g, bag)
    q = ValidSet(keep)
    for idx, e in enumerate(child_set.entries):
        t = e.tree
        live = sum(1 for c in t.children[t.root] if any(x in keep for x in t.subtree_leaves(c)))
        if live < 2:
            continue
        vt, corr = valued_restrict_with_map(t, keep, e.sigma)
        if not vt.is_bounded(k):
            q.dropped_unbounded += 1
            continue
        q.add(Entry(vt.tree, vt.sigma, FORGET, (idx,), corr))
    return q


def dp_join(bag: Iterable[int], left: ValidSet, right: ValidSet, g: Graph, k: int) -> ValidSet:
    """Glue pairs of trees that coincide on the bag."""
    bag = frozenset(bag)
    q = ValidSet(left.leaves | right.leaves)
    by_code: dict[bytes, list[int]] = {}
    for j, er in enumerate(right.entries):
        by_code.setdefault(_skeleton(er, bag)[0], []).append(j)
    for i, el in enumerate(left.entries):
        for j in by_code.get(_skeleton(el, bag)[0], ()):
            er = right.entries[j]
            for parent, label, sigma, lmap, rmap in _glue(el, er, bag, k):
                q.add(Entry(RootedTree(parent, label), sigma, JOIN, (i, j), (lmap, rmap)))
    return q


def _skeleton(e: Entry, bag: frozenset[int]):
    if e._skeleton is None or e._skeleton[1] != bag:
        sub, corr = restrict(e.tree, bag)
        e._skeleton = (canonical_code(sub), bag, sub, corr)
    code, _, sub, corr = e._skeleton
    return code, sub, corr


def _reach(e: Entry):
    """Per node: distance to the nearest leaf below, and min value+distance below."""
    if e._reach is None:
        t = e.tree
        leaf = [0 if not t.children[x] else INF for x in range(len(t))]
        hid = [INF if s is None else s for s in e.sigma]
        for x in t.postorder():
            p = t.parent[x]
            if p != -1:
                leaf[p] = min(leaf[p], leaf[x] + 1)
                hid[p] = min(hid[p], hid[x] + 1)
        e._reach = (leaf, hid)
    return e._reach


def _glue(el: Entry, er: Entry, bag: frozenset[int], k: int):
    tl, tr = el.tree, er.tree
    _, sl, cl = _skeleton(el, bag)
    _, sr, cr = _skeleton(er, bag)
    ok, mu = leaf_isomorphic(sl, sr)
    if not ok:
        return
    # shared spine: the bag restriction, then the path up to the higher root
    spine = [(cl[s], cr[mu[s]]) for s in range(len(sl))]
    spine_parent = [sl.parent[s] for s in range(len(sl))]
    up_l, x = [], cl[sl.root]
    while tl.parent[x] != -1:
        x = tl.parent[x]
        up_l.append(x)
    up_r, x = [], cr[sr.root]
    while tr.parent[x] != -1:
        x = tr.parent[x]
        up_r.append(x)
    height = max(len(up_l), len(up_r))
    base = len(spine)
    for h in range(height):
        spine.append((up_l[h] if h < len(up_l) else -1, up_r[h] if h < len(up_r) else -1))
        spine_parent.append(-1)
    if height:
        spine_parent[sl.root] = base
        for h in range(height - 1):
            spine_parent[base + h] = base + h + 1
    on_l = {a for a, _ in spine if a >= 0}
    on_r = {b for _, b in spine if b >= 0}
    reach_l, reach_r = _reach(el), _reach(er)

    def fits(a: int, b: int) -> bool:
        la, ha = reach_l[0][a], reach_l[1][a]
        lb, hb = reach_r[0][b], reach_r[1][b]
        return la + lb > k and ha + hb > k and la + hb > k and ha + lb > k

    def merges(ls: list[int], rs: list[int]) -> list[tuple]:
        cand = [(a, b) for a in ls if tl.children[a] for b in rs if tr.children[b] and fits(a, b)]
        if not cand:
            return [()]
        out = []

        def rec(i, used_l, used_r, acc):
            if i == len(cand):
                out.append(tuple(acc))
                return
            rec(i + 1, used_l, used_r, acc)
            a, b = cand[i]
            if a not in used_l and b not in used_r:
                for sub in merges(list(tl.children[a]), list(tr.children[b])):
                    rec(i + 1, used_l | {a}, used_r | {b}, acc + [(a, b, sub)])

        rec(0, frozenset(), frozenset(), [])
        return out

    hang = []
    options = []
    for a, b in spine:
        hl = [c for c in tl.children[a] if c not in on_l] if a >= 0 else []
        hr = [c for c in tr.children[b] if c not in on_r] if b >= 0 else []
        hang.append((hl, hr))
        options.append(merges(hl, hr) if hl and hr else [()])
    for plan in itertools.product(*options):
        built = _assemble(el, er, spine, spine_parent, hang, plan)
        if built is not None and _glue_ok(el, er, built, k):
            yield built


def _assemble(el, er, spine, spine_parent, hang, plan):
    tl, tr = el.tree, er.tree
    parent, label, lmap, rmap = [], [], [], []

    def node(p, a, b):
        parent.append(p)
        lab = tl.label[a] if a >= 0 else tr.label[b]
        label.append(lab)
        lmap.append(a)
        rmap.append(b)
        return len(parent) - 1

    def copy(p, tree, top, left):
        stack = [(top, p)]
        while stack:
            u, q = stack.pop()
            me = node(q, u, -1) if left else node(q, -1, u)
            for c in tree.children[u]:
                stack.append((c, me))

    def fill(me, hl, hr, pairs):
        used_l = {a for a, _, _ in pairs}
        used_r = {b for _, b, _ in pairs}
        for a, b, sub in pairs:
            mid = node(me, a, b)
            fill(mid, [c for c in tl.children[a]], [c for c in tr.children[b]], sub)
        for c in hl:
            if c not in used_l:
                copy(me, tl, c, True)
        for c in hr:
            if c not in used_r:
                copy(me, tr, c, False)

    ids = [-1] * len(spine)
    order = sorted(range(len(spine)), key=lambda s: _spine_depth(s, spine_parent))
    for s in order:
        p = spine_parent[s]
        a, b = spine[s]
        ids[s] = node(-1 if p == -1 else ids[p], a, b)
    for s, (hl, hr) in enumerate(hang):
        fill(ids[s], hl, hr, plan[s])
    sigma = []
    for x in range(len(parent)):
        if label[x] >= 0:
            sigma.append(None)
            continue
        vals = []
        if lmap[x] >= 0:
            vals.append(el.sigma[lmap[x]])
        if rmap[x] >= 0:
            vals.append(er.sigma[rmap[x]])
        sigma.append(min(vals))
    return parent, label, sigma, lmap, rmap


def _spine_depth(s, spine_parent):
    d = 0
    while spine_parent[s] != -1:
        s = spine_parent[s]
        d += 1
    return d


def _glue_ok(el, er, built, k) -> bool:
    parent, label, sigma, lmap, rmap = built
    t = RootedTree(parent, label)
    n = len(parent)
    left_only = [0 if (label[x] >= 0 and rmap[x] < 0) else INF for x in range(n)]
    right_only = [0 if (label[x] >= 0 and lmap[x] < 0) else INF for x in range(n)]
    d_l = _spread(t, left_only)
    d_r = _spread(t, right_only)
    for x in range(n):
        if label[x] >= 0 and lmap[x] < 0 and d_l[x] <= k:
            return False
    sig_l = [INF] * n
    for x in range(n):
        if label[x] < 0 and lmap[x] >= 0:
            sig_l[x] = el.sigma[lmap[x]]
    d_s = _spread(t, sig_l)
    for x in range(n):
        if label[x] >= 0:
            continue
        if rmap[x] >= 0:
            s_r = er.sigma[rmap[x]]
            if d_l[x] + s_r <= k or d_s[x] + s_r <= k:
                return False
        if lmap[x] >= 0 and d_r[x] + el.sigma[lmap[x]] <= k:
            return False
    return True


# whole-graph driver ---------------------------------------------------------

@dataclass
class DPResult:
    graph: Graph
    k: int
    decomposition: NiceDecomposition
    sets: list[ValidSet]

    @property
    def root_set(self) -> ValidSet:
        return self.sets[self.decomposition.root]

    def sizes(self) -> list[int]:
        return [len(q) for q in self.sets]


def run_dp(g: Graph, z: int, k: int, decomposition: NiceDecomposition | None = None,
           cap: int | None = None, dominance: bool = False) -> DPResult:
    """Evaluate the program bottom-up on a connected chordal graph.

    With ``cap`` every set is trimmed to at most ``cap`` entries.  The result
    then holds only valid trees, so a nonempty root set still proves a yes,
    but an empty one proves nothing.  With ``dominance`` entries beaten by a
    same-shaped entry with larger values are dropped; the verdict is kept but
    the root set is no longer complete.
    """
    d = decomposition or build_nice_decomposition(g, z)
    sets: list = [None] * len(d)
    for i in d.postorder():
        kind, ch = d.kind[i], d.children[i]
        if kind == LEAF:
            q = dp_leaf(d.bags[i])
        elif kind == INTRODUCE:
            q = dp_introduce(d.bags[i], sets[ch[0]], d.vertex[i], g, k)
        elif kind == FORGET:
            q = dp_forget(d.bags[i], sets[ch[0]], d.vertex[i], g, k)
        else:
            q = dp_join(d.bags[i], sets[ch[0]], sets[ch[1]], g, k)
        if q.leaves != d.nbhd[i]:
            raise AssertionError(f"bag {i}: leaf set {sorted(q.leaves)} != {sorted(d.nbhd[i])}")
        if dominance:
            q.drop_dominated()
        if cap is not None:
            q.trim(cap)
        sets[i] = q
    return DPResult(g, k, d, sets)


def realize(res: DPResult, index: int) -> RootedTree:
    """Rebuild a full k-leaf root from entry ``index`` of the root bag."""
    d, sets = res.decomposition, res.sets
    order, stack = [], [(d.root, index)]
    while stack:
        i, e = stack.pop()
        order.append((i, e))
        for c, ce in zip(d.children[i], sets[i].entries[e].src):
            stack.append((c, ce))
    built: dict[tuple[int, int], tuple[list, list, list]] = {}
    for i, e in reversed(order):
        entry = sets[i].entries[e]
        kids = [built.pop((c, ce)) for c, ce in zip(d.children[i], entry.src)]
        if entry.kind == LEAF:
            built[(i, e)] = ([-1], list(entry.tree.label), [0])
        elif entry.kind == INTRODUCE:
            built[(i, e)] = _realize_introduce(entry, sets[d.children[i][0]].entries[entry.src[0]], kids[0])
        elif entry.kind == FORGET:
            parent, label, m = kids[0]
            built[(i, e)] = (parent, label, [m[c] for c in entry.nodemap])
        else:
            built[(i, e)] = _realize_join(entry, kids[0], kids[1])
    parent, label, _ = built[(d.root, index)]
    return RootedTree(parent, label)


def _realize_introduce(entry: Entry, child: Entry, full):
    parent, label, m = full
    t = entry.tree
    old = len(child.tree)
    m = list(m) + [-1] * (len(t) - old)
    for x in t.preorder():
        if x < old:
            continue
        m[x] = len(parent)
        parent.append(-1)
        label.append(t.label[x])
    for x in range(len(t)):
        p = t.parent[x]
        if x >= old:
            parent[m[x]] = -1 if p == -1 else m[p]
        elif p >= old:
            parent[m[x]] = m[p]
    return parent, label, m


def _realize_join(entry: Entry, left, right):
    t = entry.tree
    lmap, rmap = entry.nodemap
    parent, label, m = [], [], [-1] * len(t)
    for x in t.preorder():
        p = t.parent[x]
        m[x] = len(parent)
        parent.append(-1 if p == -1 else m[p])
        label.append(t.label[x])
    for side, nodemap in ((left, lmap), (right, rmap)):
        sp, sl, sm = side
        kids: list[list[int]] = [[] for _ in sp]
        for y, p in enumerate(sp):
            if p != -1:
                kids[p].append(y)
        image = set(sm)
        for x in range(len(t)):
            if nodemap[x] < 0:
                continue
            for c in kids[sm[nodemap[x]]]:
                if c in image:
                    continue
                stack = [(c, m[x])]
                while stack:
                    u, q = stack.pop()
                    me = len(parent)
                    parent.append(q)
                    label.append(sl[u])
                    stack.extend((w, me) for w in kids[u])
    return parent, label, m


# public entry points --------------------------------------------------------

def enumerate_root_restrictions(g: Graph, z: int, k: int) -> list[ValuedTree]:
    """Valued restrictions to ``N[z]`` of all k-leaf roots rooted at z's parent."""
    if len(connected_components(g)) != 1:
        raise ValueError("graph must be connected")
    if g.n == 1:
        return [ValuedTree(RootedTree([-1], [z]), [None])]
    if not is_chordal(g)[0]:
        return []
    res = run_dp(g, z, k)
    return [e.valued() for e in _rooted_at_parent(res, z)]


def _rooted_at_parent(res: DPResult, z: int) -> list[Entry]:
    out = []
    for e in res.root_set.entries:
        t = e.tree
        if t.parent[t.node_of(z)] == t.root:
            out.append(e)
    return out


def root_witnesses(g: Graph, z: int, k: int) -> Iterator[tuple[ValuedTree, RootedTree]]:
    """Pairs (root restriction, full k-leaf root rooted at z's parent)."""
    if g.n == 1:
        yield ValuedTree(RootedTree([-1], [z]), [None]), RootedTree([-1], [z])
        return
    if not is_chordal(g)[0]:
        return
    res = run_dp(g, z, k)
    for idx, e in enumerate(res.root_set.entries):
        t = e.tree
        if t.parent[t.node_of(z)] == t.root:
            yield e.valued(), realize(res, idx)


@dataclass
class Recognition:
    verdict: bool
    witness: RootedTree | None
    reduced_vertices: int = 0
    set_sizes: list[int] | None = None


CAP_SCHEDULE = (16, 256)
SEARCH_STEPS = 20000


def _pick_anchor(g: Graph) -> int:
    return min(range(g.n), key=lambda v: (len(g.adj[v]), v))


def _recognize_connected(g: Graph, k: int, degree_ceiling: int | None) -> Recognition:
    if g.n == 1:
        return Recognition(True, RootedTree([-1], [0]))
    if g.n == 2:
        if k < 2:
            return Recognition(False, None)
        return Recognition(True, RootedTree([-1, 0, 0], [-1, 0, 1]))
    if k < 2:
        return Recognition(False, None)
    if not is_chordal(g)[0]:
        return Recognition(False, None)
    # true twins hang side by side in some root whenever k >= 2
    classes = true_twin_classes(g)
    reps = sorted(c[0] for c in classes)
    if len(reps) < g.n:
        sub, to_sub, to_host = induced_subgraph(g, reps)
        inner = _recognize_connected(sub, k, degree_ceiling)
        if not inner.verdict:
            return Recognition(False, None, g.n - len(reps), inner.set_sizes)
        t = inner.witness
        b = TreeBuilder()
        if sub.n == 1:
            root = b.add(-1)
            for v in classes[0]:
                b.add(root, v)
        else:
            b.parent = list(t.parent)
            b.label = [-1 if x == -1 else to_host[x] for x in t.label]
            b.sigma = [None] * len(t)
            for c in classes:
                node = t.node_of(to_sub[c[0]])
                for extra in c[1:]:
                    b.add(t.parent[node], extra)
        return Recognition(True, b.build(), g.n - len(reps), inner.set_sizes)
    if degree_ceiling is not None and g.max_degree() > degree_ceiling:
        raise ResourceError(f"maximum degree {g.max_degree()} exceeds the ceiling {degree_ceiling}")
    z = _pick_anchor(g)
    d = build_nice_decomposition(g, z)
    # capped passes and the root search can only confirm; the final uncapped pass decides
    for cap in CAP_SCHEDULE:
        res = run_dp(g, z, k, d, cap, dominance=True)
        if res.root_set.entries:
            log.debug("yes from the pass capped at %d", cap)
            return Recognition(True, realize(res, 0), 0, res.sizes())
    t = search_root(g, k, SEARCH_STEPS)
    if t is not None:
        log.debug("yes from the root search")
        return Recognition(True, t)
    log.debug("running the exact pass on %d vertices", g.n)
    res = run_dp(g, z, k, d, dominance=True)
    if not res.root_set.entries:
        return Recognition(False, None, 0, res.sizes())
    return Recognition(True, realize(res, 0), 0, res.sizes())


def recognize_bounded(g: Graph, k: int, degree_ceiling: int | None = None) -> tuple[bool, RootedTree | None]:
    """Decide whether ``g`` is a k-leaf power; on yes also return a k-leaf root.

    Components are handled separately and their roots are joined under a
    common root by paths of length ``k``.
    """
    rec = recognize_detailed(g, k, degree_ceiling)
    return rec.verdict, rec.witness


def recognize_detailed(g: Graph, k: int, degree_ceiling: int | None = None) -> Recognition:
    if k < 1:
        raise ValueError("k must be positive")
    if g.n == 0:
        return Recognition(True, None)
    parts = []
    for comp in connected_components(g):
        sub, _, to_host = induced_subgraph(g, comp)
        rec = _recognize_connected(sub, k, degree_ceiling)
        if not rec.verdict:
            return Recognition(False, None)
        parts.append((rec.witness, to_host))
    return Recognition(True, join_components(parts, k))


def join_components(parts: list[tuple[RootedTree, list[int]]], k: int) -> RootedTree:
    """Hang per-component roots (with local labels) from one root, far apart."""
    if len(parts) == 1:
        t, to_host = parts[0]
        return RootedTree(t.parent, [-1 if x == -1 else to_host[x] for x in t.label])
    b = TreeBuilder()
    root = b.add(-1)
    for t, to_host in parts:
        hook = root
        for _ in range(k):
            hook = b.add(hook)
        mapping: dict[int, int] = {}
        for u in t.preorder():
            p = hook if u == t.root else mapping[t.parent[u]]
            lab = t.label[u]
            mapping[u] = b.add(p, -1 if lab == -1 else to_host[lab])
    return b.build()


# literal membership tests and the candidate stream ------------------------

def _as_valued(x) -> ValuedTree:
    return x if isinstance(x, ValuedTree) else x.valued()


def introduce_holds(cand: ValuedTree, child: ValuedTree, v: int, g: Graph, k: int) -> bool:
    """The four introduce conditions for a candidate against one child tree."""
    t, sig = cand.tree, cand.sigma
    old = child.tree.leaf_labels()
    if t.leaf_labels() != old | {v}:
        return False
    sub, corr = restrict(t, old)
    ok, mu = leaf_isomorphic(sub, child.tree)
    if not ok:
        return False
    inside = set()
    for s, x in enumerate(corr):
        inside.add(x)
        if sub.children[s] and sig[x] != child.sigma[mu[s]]:
            return False
    for x in t.internal_nodes():
        if x not in inside and sig[x] != INF:
            return False
    dist = t.distances_from(t.node_of(v))
    for x in range(len(t)):
        lab = t.label[x]
        if lab >= 0 and lab != v and (dist[x] <= k) != g.has_edge(v, lab):
            return False
        if lab < 0 and dist[x] + sig[x] <= k:
            return False
    return True


def forget_holds(cand: ValuedTree, child: ValuedTree, keep: frozenset[int], k: int) -> bool:
    tj = child.tree
    live = sum(1 for c in tj.children[tj.root] if any(x in keep for x in tj.subtree_leaves(c)))
    if live < 2 or cand.tree.leaf_labels() != keep:
        return False
    want, _ = valued_restrict_with_map(tj, keep, child.sigma)
    return canonical_code(want) == canonical_code(cand)


def join_holds(cand: ValuedTree, left: ValuedTree, right: ValuedTree, bag: frozenset[int],
               g: Graph, k: int) -> bool:
    """The six join conditions, evaluated literally."""
    t, sig = cand.tree, cand.sigma
    ll, rl = left.tree.leaf_labels(), right.tree.leaf_labels()
    if t.leaf_labels() != ll | rl:
        return False
    maps = []
    for side, labels in ((left, ll), (right, rl)):
        sub, corr = restrict(t, labels)
        ok, mu = leaf_isomorphic(sub, side.tree)
        if not ok:
            return False
        maps.append({corr[s]: mu[s] for s in range(len(sub))})
    ml, mr = maps
    for x in t.internal_nodes():
        vals = []
        if x in ml:
            vals.append(left.sigma[ml[x]])
        if x in mr:
            vals.append(right.sigma[mr[x]])
        if sig[x] != min(vals):
            return False
    dist = {x: t.distances_from(x) for x in range(len(t))}
    leaves = t.leaves()
    for i, a in enumerate(leaves):
        for b in leaves[i + 1:]:
            if (dist[a][b] <= k) != g.has_edge(t.label[a], t.label[b]):
                return False
    for only, other_map, other in ((ll - bag, mr, right), (rl - bag, ml, left)):
        for u in only:
            un = t.node_of(u)
            for w, wj in other_map.items():
                if t.children[w] and dist[un][w] + other.sigma[wj] <= k:
                    return False
    for wl, jl in ml.items():
        if not t.children[wl]:
            continue
        for wr, jr in mr.items():
            if t.children[wr] and left.sigma[jl] + dist[wl][wr] + right.sigma[jr] <= k:
                return False
    return True


@dataclass(frozen=True)
class CandidateBudget:
    k: int
    max_height: int
    max_nodes: int

    @classmethod
    def default(cls, leaf_count: int, k: int) -> "CandidateBudget":
        return cls(k, 3 * k, (2 * k + 2) * leaf_count)


def _topologies(leaves: tuple[int, ...]) -> Iterator:
    """Rooted trees without unary nodes on labelled ``leaves`` (nested tuples)."""
    if len(leaves) == 1:
        yield leaves[0]
        return
    for parts in _partitions_min2(list(leaves)):
        for combo in itertools.product(*(list(_topologies(tuple(p))) for p in parts)):
            yield tuple(combo)


def _set_partitions(items):
    if not items:
        yield []
        return
    head, tail = items[0], items[1:]
    for p in _set_partitions(tail):
        yield [[head]] + p
        for i in range(len(p)):
            yield p[:i] + [[head] + p[i]] + p[i + 1:]


def _partitions_min2(items):
    for p in _set_partitions(items):
        if len(p) >= 2:
            yield [sorted(b) for b in p]


def candidate_valued_trees(leaves: Iterable[int], budget: CandidateBudget) -> Iterator[ValuedTree]:
    """Every valued tree on ``leaves`` within the budget, each once.

    Branching nodes have at least two children; every edge may be subdivided
    by up to ``k`` unary nodes; values range over ``0..k`` and ``INF``.
    """
    leaves = tuple(sorted(leaves))
    if not leaves:
        raise ValueError("need at least one leaf")
    if len(leaves) == 1:
        yield ValuedTree(RootedTree([-1], [leaves[0]]), [None])
        return
    k = budget.k
    values = list(range(k + 1)) + [INF]
    for topo in _topologies(leaves):
        shape = TreeBuilder()
        _build_nested(shape, topo, -1)
        base = shape.build()
        edges = [x for x in range(len(base)) if base.parent[x] != -1]
        for subdiv in itertools.product(range(k + 1), repeat=len(edges)):
            b = TreeBuilder()
            node_of = {}
            extra = dict(zip(edges, subdiv))
            for x in base.preorder():
                p = base.parent[x]
                hook = -1 if p == -1 else node_of[p]
                for _ in range(extra.get(x, 0)):
                    hook = b.add(hook)
                node_of[x] = b.add(hook, base.label[x])
            t = b.build()
            if t.height() > budget.max_height or len(t) > budget.max_nodes:
                continue
            inner = t.internal_nodes()
            for vals in itertools.product(values, repeat=len(inner)):
                sigma: list = [None] * len(t)
                for x, s in zip(inner, vals):
                    sigma[x] = s
                yield ValuedTree(t, sigma)


def _build_nested(b: TreeBuilder, spec, parent: int) -> None:
    if isinstance(spec, int):
        b.add(parent, spec)
        return
    me = b.add(parent)
    for c in spec:
        _build_nested(b, c, me)


def run_dp_by_filtering(g: Graph, z: int, k: int, budget_height: int | None = None) -> list[set[bytes]]:
    """Generate-and-test evaluation, feasible only for tiny bags.

    Returns per-bag sets of canonical codes, for comparison with
    :func:`run_dp`.
    """
    d = build_nice_decomposition(g, z)
    out: list = [None] * len(d)
    trees: list = [None] * len(d)
    for i in d.postorder():
        leaves = d.nbhd[i]
        budget = CandidateBudget.default(len(leaves), k)
        if budget_height is not None:
            budget = CandidateBudget(k, budget_height, budget.max_nodes)
        kind, ch = d.kind[i], d.children[i]
        keep = []
        if kind == LEAF:
            keep = [ValuedTree(RootedTree([-1], [next(iter(leaves))]), [None])]
        else:
            for cand in candidate_valued_trees(leaves, budget):
                if kind == INTRODUCE:
                    ok = any(introduce_holds(cand, c, d.vertex[i], g, k) for c in trees[ch[0]])
                elif kind == FORGET:
                    ok = any(forget_holds(cand, c, leaves, k) for c in trees[ch[0]])
                else:
                    ok = any(join_holds(cand, a, b, d.bags[i], g, k)
                             for a in trees[ch[0]] for b in trees[ch[1]])
                if ok:
                    keep.append(cand)
        trees[i] = keep
        out[i] = {canonical_code(c) for c in keep}
    return out
