"""Acceptance suite: one check per criterion, each printed as PASS or FAIL.

Run under pytest (the terminal summary lists the criteria) or directly with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import itertools
import sys
import time
from functools import lru_cache

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from leafpower.decomposition import build_nice_decomposition
from leafpower.dp import _pick_anchor, enumerate_root_restrictions, recognize_bounded, root_witnesses
from leafpower.engine import RunConfig, recognize
from leafpower.errors import ResourceError
from leafpower.generator import GeneratorSpec, SplitMix64, named_graph, planted_similar_instance, random_leaf_power
from leafpower.graph import Graph, connected_components, induced_subgraph
from leafpower.oracle import oracle_enumerate_root_restrictions, oracle_is_k_leaf_power
from leafpower.signatures import node_signatures, signature_space_bound
from leafpower.similar import extend_witness, prune_with_map, validate_similar_structure
from leafpower.tree import (INF, RootedTree, TreeBuilder, ValuedTree, canonical_code, restrict,
                            valued_restrict, verify_k_leaf_root)

from conftest import RESULTS, atlas_graphs, random_chordal, random_graph, to_nx

# connected k-leaf powers among the connected graphs on n vertices, computed
# once with the exhaustive oracle and frozen here
LEAF_POWER_COUNTS = {
    2: [1, 1, 1, 1, 1, 1],
    3: [1, 1, 2, 5, 12, 32],
    4: [1, 1, 2, 5, 15, 54],
}
CONNECTED_COUNTS = [1, 1, 2, 6, 21, 112]

# small chordal graphs that are not k-leaf powers; vertex 0 gets glued onto z
OBSTRUCTIONS = {
    3: [(0, 1), (0, 2), (0, 4), (1, 2), (2, 3)],  # bull
    4: [(0, 1), (0, 2), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (2, 5)],
}


def _witness_ok(g: Graph, ok: bool, t: RootedTree | None, k: int) -> bool:
    if not ok or g.n == 0:
        return True
    return t is not None and verify_k_leaf_root(g, t, k)[0]


# 1 ----------------------------------------------------------------------------

def criterion_1() -> tuple[bool, str]:
    graphs = atlas_graphs(6)
    bad = []
    for k in (2, 3, 4):
        counts = [0] * 6
        for g in graphs:
            ok, t = recognize_bounded(g, k)
            want = oracle_is_k_leaf_power(g, k)[0]
            if ok != want or not _witness_ok(g, ok, t, k):
                bad.append((k, g.edges()))
            counts[g.n - 1] += ok
        if counts != LEAF_POWER_COUNTS[k]:
            bad.append((k, "counts", counts))
    sizes = [sum(1 for g in graphs if g.n == n) for n in range(1, 7)]
    if sizes != CONNECTED_COUNTS:
        bad.append(("atlas", sizes))
    return not bad, f"{len(graphs)} graphs x 3 values of k, mismatches: {bad[:3] or 0}"


# 2 ----------------------------------------------------------------------------

def _all_cliques(g: Graph) -> bool:
    for comp in connected_components(g):
        m = len(comp)
        if sum(len(g.adj[v]) for v in comp) != m * (m - 1):
            return False
    return True


def criterion_2(samples: int = 10_000) -> tuple[bool, str]:
    rng = SplitMix64(2)
    graphs = atlas_graphs(6, connected=False)
    exhaustive = len(graphs)
    for _ in range(samples):
        graphs.append(random_graph(rng, rng.randint(1, 8), rng.random()))
    bad, yes = [], 0
    for g in graphs:
        ok, t = recognize_bounded(g, 2)
        yes += ok
        if ok != _all_cliques(g) or not _witness_ok(g, ok, t, 2):
            bad.append(g.edges())
    return not bad, f"{exhaustive} atlas + {samples} random graphs, {yes} yes, mismatches: {len(bad)}"


# 3 ----------------------------------------------------------------------------

FORBIDDEN_K3 = [to_nx(named_graph(name)) for name in ("bull", "dart", "gem")]


def _k3_characterization(g: Graph) -> bool:
    h = to_nx(g)
    return nx.is_chordal(h) and not any(GraphMatcher(h, f).subgraph_is_isomorphic() for f in FORBIDDEN_K3)


def criterion_3(samples: int = 2_000) -> tuple[bool, str]:
    rng = SplitMix64(3)
    bad, yes = [], 0
    for _ in range(samples):
        g = random_chordal(rng, rng.randint(1, 8))
        ok, t = recognize_bounded(g, 3)
        yes += ok
        if ok != _k3_characterization(g) or not _witness_ok(g, ok, t, 3):
            bad.append(g.edges())
    return not bad, f"{samples} chordal graphs, {yes} yes, {samples - yes} no, mismatches: {len(bad)}"


# 4 ----------------------------------------------------------------------------

@lru_cache(maxsize=None)
def corpus(k: int, count: int = 1000) -> tuple:
    """Seeded random leaf powers for one k: (graph, planted root, recognizer verdict, witness)."""
    rng = SplitMix64(1000 + k)
    out = []
    for _ in range(count):
        n = rng.randint(2, 40)
        seed = rng.next_u64()
        chain = rng.randint(0, min(2, k))
        g, planted = random_leaf_power(GeneratorSpec(seed, n, 4, chain, k))
        ok, t = recognize_bounded(g, k)
        out.append((g, planted, ok, t))
    return tuple(out)


def criterion_4() -> tuple[bool, str]:
    parts, good = [], True
    for k in (2, 3, 4, 5):
        t0 = time.time()
        items = corpus(k)
        fails = sum(1 for g, _, ok, t in items if not (ok and verify_k_leaf_root(g, t, k)[0]))
        good &= fails == 0
        parts.append(f"k={k}: {len(items) - fails}/{len(items)} ({time.time() - t0:.0f}s)")
    return good, ", ".join(parts)


# 5 ----------------------------------------------------------------------------

def criterion_5() -> tuple[bool, str]:
    checked, bad = 0, []

    def check(g, ok, t, k, where):
        nonlocal checked
        if ok:
            checked += 1
            if not _witness_ok(g, ok, t, k):
                bad.append(where)

    for k in (2, 3, 4):
        for g in atlas_graphs(6):
            for engine in ("dp", "oracle", "auto"):
                rep = recognize(g, RunConfig(k, engine, degree_ceiling=g.n))
                check(g, rep.verdict, rep.witness, k, (engine, k, g.edges()))
    for k in (2, 3, 4, 5):
        for i, (g, _, ok, t) in enumerate(corpus(k)):
            check(g, ok, t, k, ("dp corpus", k, i))
        for i, (g, _, _, _) in enumerate(corpus(k)[:25]):
            rep = recognize(g, RunConfig(k, "auto", degree_ceiling=g.n))
            check(g, rep.verdict, rep.witness, k, ("auto corpus", k, i))
            if g.n <= 7:
                ok, t = oracle_is_k_leaf_power(g, k)
                check(g, ok, t, k, ("oracle corpus", k, i))
    pruned = 0
    for copies, k, seed in itertools.product((3, 4, 5), (3, 4), range(4)):
        g, _ = planted_similar_instance(copies, GeneratorSpec(seed, 1 + seed % 3, 3, 1, k), k)
        cfg = RunConfig(k, "prune+dp", degree_ceiling=max(1, g.max_degree() - 1), prune_l=3)
        try:
            rep = recognize(g, cfg)
        except ResourceError:
            continue
        pruned += rep.prunes > 0
        check(g, rep.verdict, rep.witness, k, ("prune+dp", copies, k, seed))
    return not bad, f"{checked} yes answers checked ({pruned} through pruning), bad witnesses: {bad[:3] or 0}"


# 6 ----------------------------------------------------------------------------

def criterion_6() -> tuple[bool, str]:
    bags, bad, worst = 0, [], 0
    for k in (2, 3, 4, 5):
        for idx, (g, _, ok, t) in enumerate(corpus(k)):
            if not ok:
                continue
            for comp in connected_components(g):
                sub, _, to_host = induced_subgraph(g, comp)
                t_comp = restrict(t, comp)[0] if len(comp) > 1 else None
                if t_comp is None:
                    continue
                d = build_nice_decomposition(sub, _pick_anchor(sub))
                bags += len(d.bags)
                # many bags share a leaf set; each distinct set is checked once
                for leaves in set(d.nbhd):
                    v = valued_restrict(t_comp, [to_host[x] for x in leaves])
                    worst = max(worst, v.height() - 3 * k)
                    if not v.is_bounded(k) or v.height() > 3 * k:
                        bad.append((k, idx, sorted(leaves)))
    return not bad, f"{bags} bags, max height - 3k = {worst}, violations: {len(bad)}"


# 7 ----------------------------------------------------------------------------

def criterion_7() -> tuple[bool, str]:
    graphs = atlas_graphs(5)
    cases, bad = 0, []
    for k in (2, 3):
        for g in graphs:
            for z in range(g.n):
                mine = {canonical_code(v) for v in enumerate_root_restrictions(g, z, k)}
                ref = {canonical_code(v) for v in oracle_enumerate_root_restrictions(g, z, k)}
                cases += 1
                if mine != ref:
                    bad.append((k, g.edges(), z))
    return not bad, f"{cases} (graph, z, k) cases, mismatches: {bad[:3] or 0}"


# 8 ----------------------------------------------------------------------------

def _bound_by_recurrence(s: int, h: int, k: int) -> int:
    if h == 1:
        return k + 1
    prev = _bound_by_recurrence(s, h - 1, k)
    return (s + 2) * 3**prev + prev


def _height2_signatures(s: int, k: int) -> set:
    """Signatures of every s-bounded valued tree of height <= 2 with at most two leaves per layer."""
    sigs = set()
    for layer in range(k + 1):
        sigs.add(node_signatures(ValuedTree(RootedTree([-1], [0]), [None]), {0: layer}, k)[0])
    values = list(range(s + 1)) + [INF]
    for counts in itertools.product(range(3), repeat=k + 1):
        if not any(counts):
            continue
        layers = [lay for lay, c in enumerate(counts) for _ in range(c)]
        for val in values:
            b = TreeBuilder()
            root = b.add(-1, sigma=val)
            for leaf in range(len(layers)):
                b.add(root, leaf)
            v = b.build_valued()
            sigs.add(node_signatures(v, dict(enumerate(layers)), max(k, s))[0])
    return sigs


def criterion_8() -> tuple[bool, str]:
    bad = []
    for k in range(6):
        for s in range(4):
            if signature_space_bound(s, 1, k) != k + 1:
                bad.append(("h=1", s, k))
    for s, h, k in itertools.product(range(4), range(1, 4), range(3)):
        if signature_space_bound(s, h, k) != _bound_by_recurrence(s, h, k):
            bad.append((s, h, k))
    # frozen values
    frozen = {(2, 2, 2): 111, (0, 2, 0): 7, (1, 2, 1): 29, (0, 2, 5): 2 * 3**6 + 6}
    for key, want in frozen.items():
        if signature_space_bound(*key) != want:
            bad.append(("frozen", key))
    # height <= 2 signatures realized by actual trees stay below the bound
    for s, k in itertools.product(range(3), range(3)):
        seen = len(_height2_signatures(s, k))
        if seen != (s + 2) * (3**(k + 1) - 1) + (k + 1) or seen > signature_space_bound(s, 2, k):
            bad.append(("realized", s, k, seen))
    return not bad, f"recurrence, frozen values and realized height-2 counts, mismatches: {bad[:3] or 0}"


# 9 ----------------------------------------------------------------------------

def _glue_obstruction(g: Graph, z: int, k: int) -> Graph:
    edges = OBSTRUCTIONS[k]
    names = {0: z}
    for v in sorted({x for e in edges for x in e} - {0}):
        names[v] = g.n + len(names) - 1
    return Graph(g.n + len(names) - 1, list(g.edges()) + [(names[a], names[b]) for a, b in edges])


def _candidate_roots(small: Graph, to_host: list[int], z: int, k: int, first: RootedTree):
    def host(t):
        return RootedTree(t.parent, [-1 if x == -1 else to_host[x] for x in t.label])

    yield host(first)
    for _, full in root_witnesses(small, to_host.index(z), k):
        yield host(full)


def criterion_9(per_case: int = 40) -> tuple[bool, str]:
    total, yes_total, bad = 0, 0, []
    for copies, k in itertools.product((3, 4, 5), (3, 4)):
        for seed in range(per_case):
            spec = GeneratorSpec(seed, 1 + seed % 3, 3, 1, k)
            g, s = planted_similar_instance(copies, spec, k, extra_leaves=seed % 2)
            if seed % 4 == 3:
                g = _glue_obstruction(g, s.z, k)
            total += 1
            if not validate_similar_structure(g, s, k)[0]:
                bad.append(("invalid", copies, k, seed))
                continue
            small, to_host = prune_with_map(g, s, k, min_size=3)
            before, _ = recognize_bounded(g, k)
            after, r = recognize_bounded(small, k)
            if before != after:
                bad.append(("verdict", copies, k, seed))
                continue
            if not after:
                continue
            yes_total += 1
            t = extend_witness(g, s, k, _candidate_roots(small, to_host, s.z, k, r))
            if not verify_k_leaf_root(g, t, k)[0]:
                bad.append(("witness", copies, k, seed))
    return not bad, f"{total} planted instances ({yes_total} yes), failures: {bad[:3] or 0}"


# 10 ---------------------------------------------------------------------------

def _random_valued_tree(rng: SplitMix64, k: int) -> tuple[ValuedTree, dict[int, int]]:
    b = TreeBuilder()
    layers: dict[int, int] = {}

    def grow(parent: int, depth: int) -> None:
        if depth >= 4 or (parent != -1 and rng.random() < 0.35):
            label = len(layers)
            layers[label] = rng.below(k + 1)
            b.add(parent, label)
            return
        val = INF if rng.random() < 0.3 else rng.below(k + 1)
        node = b.add(parent, sigma=val)
        for _ in range(rng.randint(1, 4)):
            grow(node, depth + 1)

    grow(-1, 0)
    return b.build_valued(), layers


def _duplicate(v: ValuedTree, layers: dict[int, int], x: int, c: int):
    """Copy the subtree at child ``c`` as one more child of ``x``, with fresh leaf labels."""
    t = v.tree
    b = TreeBuilder()
    b.parent, b.label, b.sigma = list(t.parent), list(t.label), list(v.sigma)
    mapping = b.graft(x, t, c)
    new_layers = dict(layers)
    fresh = max(layers) + 1
    for u, nu in mapping.items():
        b.sigma[nu] = v.sigma[u]
        if t.label[u] != -1:
            b.label[nu] = fresh
            new_layers[fresh] = layers[t.label[u]]
            fresh += 1
    return b.build_valued(), new_layers


def criterion_10(trees: int = 500, k: int = 3) -> tuple[bool, str]:
    rng = SplitMix64(10)
    repeated = unique = 0
    bad = []
    for n in range(trees):
        v, layers = _random_valued_tree(rng, k)
        t = v.tree
        sigs = node_signatures(v, layers, k)
        for x in t.internal_nodes():
            for c in t.children[x]:
                w, new_layers = _duplicate(v, layers, x, c)
                new = node_signatures(w, new_layers, k)
                times = sum(1 for y in t.children[x] if sigs[y] == sigs[c])
                if times >= 2:
                    repeated += 1
                    if new[w.tree.root] != sigs[t.root]:
                        bad.append(("changed", n, x, c))
                else:
                    unique += 1
                    before = dict(sigs[x][1])[sigs[c]]
                    after = dict(new[x][1])[sigs[c]]
                    if (before, after) != (1, 2):
                        bad.append(("count", n, x, c, before, after))
    good = not bad and repeated > 0 and unique > 0
    return good, f"{repeated} repeated and {unique} unique duplications, failures: {bad[:3] or 0}"


# pytest entry points ---------------------------------------------------------

def _run(num: int, fn) -> None:
    t0 = time.time()
    ok, detail = fn()
    RESULTS[num] = (ok, f"{detail} [{time.time() - t0:.1f}s]")
    assert ok, detail


def test_criterion_1_oracle_equivalence():
    _run(1, criterion_1)


def test_criterion_2_k2_cliques():
    _run(2, criterion_2)


def test_criterion_3_k3_forbidden_subgraphs():
    _run(3, criterion_3)


def test_criterion_4_round_trip():
    _run(4, criterion_4)


def test_criterion_5_witnesses_from_every_engine():
    _run(5, criterion_5)


def test_criterion_6_valued_restriction_bounds():
    _run(6, criterion_6)


def test_criterion_7_root_restriction_sets():
    _run(7, criterion_7)


def test_criterion_8_signature_space_bound():
    _run(8, criterion_8)


def test_criterion_9_pruning():
    _run(9, criterion_9)


def test_criterion_10_signature_cap():
    _run(10, criterion_10)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]

if __name__ == "__main__":
    failed = 0
    for num, fn in enumerate(CRITERIA, 1):
        t0 = time.time()
        ok, detail = fn()
        failed += not ok
        print(f"criterion {num}: {'PASS' if ok else 'FAIL'}  {detail} [{time.time() - t0:.1f}s]", flush=True)
    sys.exit(1 if failed else 0)
