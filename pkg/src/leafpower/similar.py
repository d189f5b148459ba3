"""Similar structures: redundant pieces of a graph that can be pruned.

A similar structure picks a vertex ``z``, disjoint sets ``C_1..C_d`` inside
``N(z)``, the pendant parts ``Y_i`` that hang only off ``C_i``, and a layer
for each member of ``C_i`` (``z`` has layer 0).  When all pieces
``C_i + Y_i + z`` admit the same signatures of restricted roots, one piece can
be dropped without changing the answer, and a root of the smaller graph can
be extended back (:func:`insert_back`).
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .dp import root_witnesses
from .errors import PreconditionError, ResourceError
from .graph import Graph, connected_components, induced_subgraph, neighbors_open, remove_vertices
from .signatures import Signature, node_signatures, signature
from .tree import RootedTree, TreeBuilder, ValuedTree, restrict, root_at_parent_of, valued_restrict_with_map

log = logging.getLogger(__name__)


@dataclass
class SimilarStructure:
    c_sets: list[frozenset[int]]
    y_sets: list[frozenset[int]]
    z: int
    layerings: list[dict[int, int]] = field(default_factory=list)

    def __post_init__(self):
        self.c_sets = [frozenset(c) for c in self.c_sets]
        self.y_sets = [frozenset(y) for y in self.y_sets]
        self.layerings = [dict(lay) for lay in self.layerings]

    @property
    def size(self) -> int:
        return len(self.c_sets)

    def piece(self, i: int) -> frozenset[int]:
        """``C_i | Y_i | {z}``."""
        return self.c_sets[i] | self.y_sets[i] | {self.z}

    def reordered(self, order: list[int]) -> "SimilarStructure":
        return SimilarStructure([self.c_sets[i] for i in order], [self.y_sets[i] for i in order],
                                self.z, [self.layerings[i] for i in order])


def validate_similar_structure(g: Graph, s: SimilarStructure, k: int) -> tuple[bool, str | None]:
    """Check every defining property; returns ``(ok, first violated property)``."""
    d = s.size
    if d == 0 or len(s.y_sets) != d or len(s.layerings) != d:
        return False, "shape: need the same positive number of C-sets, Y-sets and layerings"
    everything = set().union(*s.c_sets, *s.y_sets, {s.z})
    if any(not (0 <= v < g.n) for v in everything):
        return False, "shape: vertex out of range"
    for i in range(d):
        if not s.c_sets[i]:
            return False, f"sets: C_{i + 1} is empty"
        if s.z in s.c_sets[i] or s.z in s.y_sets[i]:
            return False, "sets: z lies in a C- or Y-set"
        for j in range(d):
            if i < j and s.c_sets[i] & s.c_sets[j]:
                return False, f"sets: C_{i + 1} and C_{j + 1} overlap"
            if i < j and s.y_sets[i] & s.y_sets[j]:
                return False, f"sets: Y_{i + 1} and Y_{j + 1} overlap"
            if s.c_sets[i] & s.y_sets[j]:
                return False, f"sets: C_{i + 1} meets Y_{j + 1}"
        lay = s.layerings[i]
        if set(lay) != set(s.c_sets[i]) | {s.z}:
            return False, f"sets: layering {i + 1} has the wrong domain"
        if any(not (0 <= x <= k) for x in lay.values()):
            return False, f"sets: layering {i + 1} leaves 0..k"
    cstar = frozenset().union(*s.c_sets)
    comps = connected_components(g, set(range(g.n)) - cstar)
    nb = {c: neighbors_open(g, c) for c in comps}
    # property 1
    for i in range(d):
        want = set()
        for c in comps:
            if nb[c] <= s.c_sets[i]:
                want |= c
        if want != s.y_sets[i]:
            return False, "property 1"
    # property 2
    touching = [c for c in comps if all(nb[c] & ci for ci in s.c_sets)]
    if len(touching) != 1 or s.z not in touching[0] or not cstar <= g.adj[s.z]:
        return False, "property 2"
    xz = touching[0]
    # property 3
    ys = set().union(*s.y_sets)
    for c in comps:
        if c != xz and not c <= ys:
            return False, "property 3"
    # property 4
    for i in range(d):
        if s.layerings[i][s.z] != 0 or any(s.layerings[i][x] <= 0 for x in s.c_sets[i]):
            return False, "property 4a"
    for i in range(d):
        for j in range(i, d):
            outside = s.c_sets[i] | s.y_sets[i] | s.c_sets[j] | s.y_sets[j]
            for x in s.c_sets[i]:
                for y in s.c_sets[j]:
                    if x == y:
                        continue
                    lx, ly = s.layerings[i][x], s.layerings[j][y]
                    if lx == ly and (g.adj[x] - outside) != (g.adj[y] - outside):
                        return False, "property 4b"
                    if lx + ly <= k and not g.has_edge(x, y):
                        return False, "property 4c"
                    if i != j and lx + ly > k and g.has_edge(x, y):
                        return False, "property 4d"
    return True, None


def derive_y_and_z(g: Graph, c_sets: list[Iterable[int]]) -> tuple[int, list[frozenset[int]]] | None:
    """Find ``z`` adjacent to every C-set member and split the rest into Y-sets.

    Returns ``None`` when no such ``z`` exists or a component other than the
    one holding ``z`` touches two C-sets.
    """
    c_sets = [frozenset(c) for c in c_sets]
    cstar = frozenset().union(*c_sets)
    rest = set(range(g.n)) - cstar
    comps = connected_components(g, rest)
    where = {}
    for idx, c in enumerate(comps):
        for v in c:
            where[v] = idx
    for z in sorted(rest):
        if not cstar <= g.adj[z]:
            continue
        home = where[z]
        ys: list[set[int]] = [set() for _ in c_sets]
        ok = True
        for idx, comp in enumerate(comps):
            if idx == home:
                continue
            nb = neighbors_open(g, comp)
            hit = [i for i, c in enumerate(c_sets) if nb & c]
            if len(hit) > 1:
                ok = False
                break
            if hit and nb <= c_sets[hit[0]]:
                ys[hit[0]] |= comp
        if ok:
            return z, [frozenset(y) for y in ys]
    return None


# accept sets ------------------------------------------------------------------

def _piece_graph(g: Graph, s: SimilarStructure, i: int, degree_ceiling: int | None):
    sub, to_sub, to_host = induced_subgraph(g, s.piece(i))
    if degree_ceiling is not None and sub.max_degree() > degree_ceiling:
        raise ResourceError(f"piece {i + 1} has degree {sub.max_degree()} above {degree_ceiling}")
    return sub, to_sub, to_host


def accept_witnesses(g: Graph, s: SimilarStructure, i: int, k: int,
                     degree_ceiling: int | None = None) -> dict[Signature, RootedTree]:
    """Signature -> one k-leaf root of ``G[C_i + Y_i + z]`` (host labels) rooted at z's parent."""
    sub, to_sub, to_host = _piece_graph(g, s, i, degree_ceiling)
    layers = {to_sub[v]: x for v, x in s.layerings[i].items()}
    out: dict[Signature, RootedTree] = {}
    for restr, full in root_witnesses(sub, to_sub[s.z], k):
        sig = signature(restr, layers, k)
        if sig not in out:
            out[sig] = RootedTree(full.parent, [-1 if x == -1 else to_host[x] for x in full.label])
    return out


def accept_set(g: Graph, s: SimilarStructure, i: int, k: int,
               degree_ceiling: int | None = None) -> frozenset[Signature]:
    """Signatures of all restricted roots of ``G[C_i + Y_i + z]`` under layering ``i``."""
    from .dp import enumerate_root_restrictions

    sub, to_sub, _ = _piece_graph(g, s, i, degree_ceiling)
    layers = {to_sub[v]: x for v, x in s.layerings[i].items()}
    return frozenset(signature(v, layers, k) for v in enumerate_root_restrictions(sub, to_sub[s.z], k))


def is_homogeneous(g: Graph, s: SimilarStructure, k: int, degree_ceiling: int | None = None) -> bool:
    first = accept_set(g, s, 0, k, degree_ceiling)
    if not first:
        return False
    return all(accept_set(g, s, i, k, degree_ceiling) == first for i in range(1, s.size))


def prune_with_map(g: Graph, s: SimilarStructure, k: int, min_size: int = 4,
                   check: bool = True, degree_ceiling: int | None = None) -> tuple[Graph, list[int]]:
    """``G - (C_1 | Y_1)`` plus the host id of every remaining vertex."""
    if s.size < min_size:
        raise PreconditionError(f"structure has {s.size} pieces, need at least {min_size}")
    if check:
        ok, why = validate_similar_structure(g, s, k)
        if not ok:
            raise PreconditionError(f"not a similar structure ({why})")
        if not is_homogeneous(g, s, k, degree_ceiling):
            raise PreconditionError("structure is not homogeneous")
    sub, _, to_host = remove_vertices(g, s.c_sets[0] | s.y_sets[0])
    return sub, to_host


def prune(g: Graph, s: SimilarStructure, k: int, min_size: int = 4, check: bool = True) -> Graph:
    return prune_with_map(g, s, k, min_size, check)[0]


# re-insertion -----------------------------------------------------------------

@dataclass
class _Piece:
    """Valued restriction of a piece's root to ``C_i + z`` with node signatures.

    ``host[x]`` is the node of the enclosing tree that node ``x`` stands for.
    """

    vt: ValuedTree
    host: list[int]
    sigs: list[Signature]

    @property
    def top(self) -> Signature:
        return self.sigs[self.vt.tree.root]


def _piece_view(tree: RootedTree, piece: frozenset[int], cset: frozenset[int], z: int,
                layers: dict[int, int], k: int) -> _Piece:
    sub, corr = restrict(tree, piece)
    vt, corr2 = valued_restrict_with_map(sub, cset | {z})
    return _Piece(vt, [corr[x] for x in corr2], node_signatures(vt, layers, k))


def restricted_signatures(r: RootedTree, s: SimilarStructure, k: int) -> list[Signature | None]:
    """Signature of each piece ``i >= 2`` as seen inside ``r`` (index 0 is ``None``)."""
    out: list = [None]
    for i in range(1, s.size):
        out.append(_piece_view(r, s.piece(i), s.c_sets[i], s.z, s.layerings[i], k).top)
    return out


def insert_back(r: RootedTree, s: SimilarStructure, t1_star: RootedTree, k: int) -> RootedTree:
    """Embed ``t1_star`` (a root of piece 1) into ``r`` (a root of the pruned graph).

    ``r`` must carry host labels and ``t1_star`` must be rooted at the parent
    of ``z``.  Two pieces ``i, j >= 2`` whose restricted signatures inside
    ``r`` equal the signature of ``t1_star`` are required.
    """
    z = s.z
    if r.parent[r.node_of(z)] != r.root:
        r = root_at_parent_of(r, z)
    if t1_star.parent[t1_star.node_of(z)] != t1_star.root:
        raise PreconditionError("t1_star must be rooted at the parent of z")
    one = _piece_view(t1_star, s.piece(0), s.c_sets[0], z, s.layerings[0], k)
    views = {}
    for i in range(1, s.size):
        v = _piece_view(r, s.piece(i), s.c_sets[i], z, s.layerings[i], k)
        if v.top == one.top:
            views[i] = v
    if len(views) < 2:
        raise PreconditionError("no two pieces of the pruned root share t1_star's signature")
    two, three = (views[i] for i in sorted(views)[:2])

    b = TreeBuilder()
    b.parent, b.label, b.sigma = list(r.parent), list(r.label), [None] * len(r)
    t1 = one.vt.tree
    t1_nodes = set(one.host)
    from_star = {h: x for x, h in enumerate(one.host)}

    def kids_in(view: _Piece, host_node: int) -> list[int]:
        x = view.host.index(host_node)
        return list(view.vt.tree.children[x])

    def graft(star_node: int, under: int) -> None:
        b.graft(under, t1_star, star_node)

    stack = [(t1_star.root, r.root)]
    z_node = r.node_of(z)
    while stack:
        t, rn = stack.pop()
        for u in t1_star.children[t]:
            if u not in t1_nodes:
                graft(u, rn)
        tx = from_star[t]
        kids = list(t1.children[tx])
        for ux in kids:
            sig = one.sigs[ux]
            u = one.host[ux]
            if any(one.sigs[w] == sig for w in kids if w != ux):
                graft(u, rn)
                continue
            u2 = [two.host[y] for y in kids_in(two, rn) if two.sigs[y] == sig]
            u3 = [three.host[y] for y in kids_in(three, rn) if three.sigs[y] == sig]
            if len(u2) != 1 or len(u3) != 1:
                raise PreconditionError("signature correspondence broke during insertion")
            if u2[0] != u3[0]:
                graft(u, rn)
            elif u2[0] != z_node:
                stack.append((u, u2[0]))
    return b.build()


def extend_witness(g: Graph, s: SimilarStructure, k: int, candidates: Iterable[RootedTree],
                   degree_ceiling: int | None = None) -> RootedTree:
    """Try pruned-graph roots in turn until one admits insertion of piece 1."""
    table = None
    for r in candidates:
        if r.parent[r.node_of(s.z)] != r.root:
            r = root_at_parent_of(r, s.z)
        sigs = restricted_signatures(r, s, k)
        counts: dict = {}
        for sig in sigs[1:]:
            counts[sig] = counts.get(sig, 0) + 1
        if table is None:
            table = accept_witnesses(g, s, 0, k, degree_ceiling)
        for sig, n in counts.items():
            if n >= 2 and sig in table:
                return insert_back(r, s, table[sig], k)
    raise PreconditionError("no candidate root has two pieces with a signature piece 1 accepts")


# structure search ---------------------------------------------------------------

def _layerings_for(g: Graph, units: list[frozenset[int]], ys: list[frozenset[int]], k: int,
                   maps: list[dict[int, int]]) -> Iterator[list[dict[int, int]]]:
    """Layerings of the first unit, copied to the others along ``maps``."""
    base = sorted(units[0])
    for combo in itertools.product(range(1, k + 1), repeat=len(base)):
        lay0 = dict(zip(base, combo))
        out = []
        for m in maps:
            out.append({m[x]: v for x, v in lay0.items()})
        yield out


def _iso_to(g: Graph, a: frozenset[int], ya: frozenset[int], b: frozenset[int], yb: frozenset[int],
            z: int) -> dict[int, int] | None:
    """Isomorphism of ``G[a+ya+z]`` onto ``G[b+yb+z]`` fixing z and mapping a onto b."""
    if len(a) != len(b) or len(ya) != len(yb):
        return None
    src = sorted(a) + sorted(ya)
    tgt_c, tgt_y = sorted(b), sorted(yb)
    dom = set(src) | {z}
    img_dom = set(b) | set(yb) | {z}

    def deg(v, where):
        return len(g.adj[v] & where)

    mapping = {z: z}
    used = {z}

    def rec(i):
        if i == len(src):
            return True
        x = src[i]
        pool = tgt_c if x in a else tgt_y
        for y in pool:
            if y in used or deg(x, dom) != deg(y, img_dom):
                continue
            if all((w in g.adj[x]) == (mapping[w] in g.adj[y]) for w in mapping):
                mapping[x] = y
                used.add(y)
                if rec(i + 1):
                    return True
                del mapping[x]
                used.discard(y)
        return False

    return dict(mapping) if rec(0) else None


def find_similar_structure(g: Graph, k: int, size: int = 4, c_max: int = 4,
                           degree_ceiling: int | None = None,
                           max_units: int = 20000) -> SimilarStructure | None:
    """Search for a homogeneous structure with ``size`` pieces, anchored at each ``z``.

    Pieces are drawn from subsets of ``N(z)`` with at most ``c_max`` members;
    only mutually isomorphic pieces are combined, and their layerings are
    copied along the isomorphisms.  This explores a reduced part of the full
    search space, so failure does not prove that no structure exists.
    """
    for z in sorted(range(g.n), key=lambda v: (-len(g.adj[v]), v)):
        found = _search_at(g, k, z, size, c_max, degree_ceiling, max_units)
        if found is not None:
            return found
    return None


def _search_at(g, k, z, size, c_max, degree_ceiling, max_units):
    nbrs = sorted(g.adj[z])
    if len(nbrs) < size:
        return None
    closed = set(nbrs) | {z}
    outer = connected_components(g, set(range(g.n)) - closed)
    outer_nb = [neighbors_open(g, c) for c in outer]
    units = []
    for m in range(1, c_max + 1):
        for u in itertools.combinations(nbrs, m):
            u = frozenset(u)
            y = set()
            for comp, nb in zip(outer, outer_nb):
                if nb <= u:
                    y |= comp
            units.append((u, frozenset(y)))
            if len(units) > max_units:
                raise ResourceError(f"more than {max_units} candidate pieces around vertex {z}")
    groups: dict = {}
    for u, y in units:
        sub = induced_subgraph(g, u | y | {z})[0]
        key = (len(u), len(y), tuple(sorted(len(g.adj[x] & (u | y | {z})) for x in u)),
               tuple(sorted(sub.degree(i) for i in range(sub.n))))
        groups.setdefault(key, []).append((u, y))
    for members in groups.values():
        if len(members) < size:
            continue
        for pick in _disjoint_picks(members, size):
            cs = [u for u, _ in pick]
            got = derive_y_and_z(g, cs)
            if got is None or got[0] != z:
                continue
            _, ys = got
            maps = []
            for u, y in zip(cs, ys):
                m = _iso_to(g, cs[0], ys[0], u, y, z)
                if m is None:
                    break
                maps.append(m)
            if len(maps) != size:
                continue
            for lays in _layerings_for(g, cs, ys, k, maps):
                for lay in lays:
                    lay[z] = 0
                s = SimilarStructure(cs, ys, z, lays)
                if validate_similar_structure(g, s, k)[0] and is_homogeneous(g, s, k, degree_ceiling):
                    return s
    return None


def _disjoint_picks(members, size, limit: int = 2000):
    """Up to ``limit`` collections of ``size`` pairwise disjoint pieces."""
    count = 0
    for combo in itertools.combinations(range(len(members)), size):
        sets = [members[i][0] | members[i][1] for i in combo]
        if any(sets[a] & sets[b] for a in range(size) for b in range(a + 1, size)):
            continue
        yield [members[i] for i in combo]
        count += 1
        if count >= limit:
            return


def find_similar_structure_exhaustive(g: Graph, k: int, size: int = 4, c_max: int = 4,
                                      degree_ceiling: int | None = None,
                                      vertex_limit: int = 10) -> SimilarStructure | None:
    """The unrestricted loop: every collection of disjoint small sets, every layering."""
    if g.n > vertex_limit:
        raise ResourceError(f"exhaustive structure search limited to {vertex_limit} vertices")
    subsets = [frozenset(c) for m in range(1, c_max + 1) for c in itertools.combinations(range(g.n), m)]
    for combo in itertools.combinations(range(len(subsets)), size):
        cs = [subsets[i] for i in combo]
        if any(cs[a] & cs[b] for a in range(size) for b in range(a + 1, size)):
            continue
        got = derive_y_and_z(g, cs)
        if got is None:
            continue
        z, ys = got
        members = [sorted(c) for c in cs]
        flat = [x for c in members for x in c]
        for combo_l in itertools.product(range(1, k + 1), repeat=len(flat)):
            val = dict(zip(flat, combo_l))
            lays = [{**{x: val[x] for x in c}, z: 0} for c in members]
            s = SimilarStructure(cs, ys, z, lays)
            if validate_similar_structure(g, s, k)[0] and is_homogeneous(g, s, k, degree_ceiling):
                return s
    return None
