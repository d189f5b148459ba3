from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from leafpower.decomposition import FORGET, INTRODUCE, JOIN
from leafpower.dp import (CandidateBudget, Entry, ValidSet, candidate_valued_trees, dp_forget, dp_introduce,
                          dp_leaf, enumerate_root_restrictions, forget_holds, introduce_holds,
                          join_holds, realize, recognize_bounded, recognize_detailed, run_dp,
                          run_dp_by_filtering)
from leafpower.errors import ResourceError
from leafpower.generator import GeneratorSpec, SplitMix64, named_graph, random_leaf_power
from leafpower.graph import Graph, connected_components, induced_subgraph
from leafpower.oracle import oracle_is_k_leaf_power
from leafpower.tree import INF, canonical_code, to_nested, valued_from_nested, verify_k_leaf_root

from conftest import random_chordal


def codes(trees):
    return {canonical_code(t) for t in trees}


# candidate stream -------------------------------------------------------------

def test_candidates_single_leaf():
    got = list(candidate_valued_trees([5], CandidateBudget.default(1, 3)))
    assert len(got) == 1 and len(got[0].tree) == 1


def test_candidates_two_leaves_height_two():
    got = list(candidate_valued_trees([0, 1], CandidateBudget(2, 2, 100)))
    # one shape (a root with both leaves) times four values for the root
    assert len(got) == 4 == len(codes(got))
    assert {v.sigma[v.tree.root] for v in got} == {0, 1, 2, INF}


def test_candidates_no_duplicates():
    got = list(candidate_valued_trees([0, 1, 2], CandidateBudget(1, 3, 100)))
    assert len(got) == len(codes(got))


# recurrences ------------------------------------------------------------------

K2 = Graph(2, [(0, 1)])


def test_leaf():
    q = dp_leaf({3})
    assert len(q) == 1
    (v,) = list(q)
    assert v.tree.label == (3,)


def test_introduce_edge():
    q = dp_introduce({0, 1}, dp_leaf({0}), 1, K2, 2)
    assert valued_from_nested((INF, [0, 1])) in q
    child = next(iter(dp_leaf({0})))
    for v in q:
        assert introduce_holds(v, child, 1, K2, 2)


def test_introduce_rejects_wrong_distance():
    child = next(iter(dp_leaf({0})))
    far = valued_from_nested((INF, [0, (INF, [(INF, [1])])]))
    assert not introduce_holds(far, child, 1, K2, 2)
    hidden_close = valued_from_nested((0, [0, 1]))
    assert not introduce_holds(hidden_close, child, 1, K2, 2)


def test_introduce_empty_child():
    assert len(dp_introduce({0, 1}, ValidSet([0]), 1, K2, 2)) == 0


def _forget_one(spec, bag, v, g, k):
    t = valued_from_nested(spec)
    child = ValidSet(t.tree.leaf_labels())
    child.add(Entry(t.tree, t.sigma, INTRODUCE))
    q = dp_forget(bag, child, v, g, k)
    for w in q:
        assert forget_holds(w, t, frozenset(q.leaves), k)
    return [to_nested(w.tree, w.sigma) for w in q]


P3 = Graph(3, [(0, 1), (1, 2)])


def test_forget_folds_values():
    # leaf 2 leaves N[{0}]; its distance lands on the nearest kept node
    assert _forget_one((INF, [0, (INF, [1, 2])]), {0}, 2, P3, 3) == [(INF, [0, (1, [1])])]
    assert _forget_one((INF, [0, (INF, [1, (INF, [2])])]), {0}, 2, P3, 3) == [(INF, [0, (2, [1])])]


def test_forget_takes_minimum():
    assert _forget_one((INF, [0, (1, [1, (INF, [2])])]), {0}, 2, P3, 3) == [(INF, [0, (1, [1])])]
    assert _forget_one((INF, [0, (3, [1, (INF, [2])])]), {0}, 2, P3, 3) == [(INF, [0, (2, [1])])]
    # a value inside the cut-away part travels up with its distance
    assert _forget_one((INF, [0, (INF, [1, (0, [(INF, [2])])])]), {0}, 2, P3, 3) == [(INF, [0, (1, [1])])]


def test_forget_needs_two_live_root_children():
    assert _forget_one((INF, [(INF, [0, 1]), 2]), {0}, 2, P3, 3) == []


def test_join_on_triangle():
    g = named_graph("clique(3)")
    res = run_dp(g, 0, 2)
    d = res.decomposition
    joins = [i for i in range(len(d)) if d.kind[i] == JOIN]
    assert all(len(res.sets[i]) > 0 for i in joins)
    assert res.root_set.entries


def test_join_holds_min_rule_and_separation():
    left = valued_from_nested((4, [0, 1]))
    right = valued_from_nested((5, [0, 2]))
    cand = valued_from_nested((4, [0, 1, 2]))
    bag = frozenset({0})
    k3 = named_graph("clique(3)")
    assert join_holds(cand, left, right, bag, k3, 3)
    # min rule: the shared root must carry min(4, 5)
    assert not join_holds(valued_from_nested((5, [0, 1, 2])), left, right, bag, k3, 3)
    # 1 and 2 end up at distance 2, so they must be adjacent
    assert not join_holds(cand, left, right, bag, Graph(3, [(0, 1), (0, 2)]), 3)
    # leaf 2 is one step from a node whose left value is 4: 1 + 4 <= 5 breaks separation
    assert not join_holds(cand, left, right, bag, k3, 5)


def test_recurrences_match_literal_tests():
    rng = SplitMix64(3)
    for _ in range(15):
        g = random_chordal(rng, 5)
        if len(connected_components(g)) != 1:
            continue
        for k in (2, 3):
            res = run_dp(g, 0, k)
            d = res.decomposition
            for i in range(len(d)):
                kids = [res.sets[c] for c in d.children[i]]
                for e in res.sets[i].entries:
                    v = e.valued()
                    if d.kind[i] == INTRODUCE:
                        child = kids[0].entries[e.src[0]].valued()
                        assert introduce_holds(v, child, d.vertex[i], g, k)
                    elif d.kind[i] == FORGET:
                        child = kids[0].entries[e.src[0]].valued()
                        assert forget_holds(v, child, d.nbhd[i], k)
                    elif d.kind[i] == JOIN:
                        lt = kids[0].entries[e.src[0]].valued()
                        rt = kids[1].entries[e.src[1]].valued()
                        assert join_holds(v, lt, rt, d.bags[i], g, k)


@pytest.mark.parametrize("g,k", [
    (Graph(2, [(0, 1)]), 2), (Graph(2, [(0, 1)]), 3),
    (named_graph("path(3)"), 2), (named_graph("clique(3)"), 2),
])
def test_constructive_equals_generate_and_filter(g, k):
    res = run_dp(g, 0, k)
    ref = run_dp_by_filtering(g, 0, k, budget_height=4)
    # the filter is height-limited, so compare on trees within that height
    for theirs, q in zip(ref, res.sets):
        low = {canonical_code(v) for v in q if v.height() <= 4}
        assert low == theirs


# root restrictions ------------------------------------------------------------

def test_enumerate_examples():
    assert len(enumerate_root_restrictions(Graph(1), 0, 3)) == 1
    assert enumerate_root_restrictions(named_graph("cycle(4)"), 0, 3) == []
    assert enumerate_root_restrictions(named_graph("path(3)"), 0, 2) == []
    assert enumerate_root_restrictions(named_graph("path(3)"), 0, 3)
    with pytest.raises(ValueError):
        enumerate_root_restrictions(Graph(3, [(0, 1)]), 0, 3)


def test_enumerated_trees_rooted_at_parent_of_z():
    g = named_graph("bull")
    got = enumerate_root_restrictions(g, 2, 4)
    assert got
    for v in got:
        t = v.tree
        assert t.parent[t.node_of(2)] == t.root
        assert t.leaf_labels() == g.adj[2] | {2}


# recognition -------------------------------------------------------------------

def test_recognize_examples():
    two_triangles = Graph(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    ok, t = recognize_bounded(two_triangles, 2)
    assert ok and verify_k_leaf_root(two_triangles, t, 2)[0]
    assert recognize_bounded(named_graph("bull"), 3) == (False, None)
    g, _ = random_leaf_power(GeneratorSpec(7, 30, 3, 1, 4))
    assert g.n == 30
    ok, t = recognize_bounded(g, 4)
    assert ok and verify_k_leaf_root(g, t, 4)[0]


def test_small_graphs():
    assert recognize_bounded(Graph(0), 3) == (True, None)
    ok, t = recognize_bounded(Graph(1), 3)
    assert ok and t.label == (0,)
    ok, t = recognize_bounded(K2, 2)
    assert ok and verify_k_leaf_root(K2, t, 2)[0]


def test_degree_ceiling():
    star = named_graph("star(9)")
    with pytest.raises(ResourceError):
        recognize_bounded(Graph(star.n, list(star.edges()) + [(1, 2)]), 3, degree_ceiling=4)
    # true twins are merged first, so a big clique stays cheap
    assert recognize_bounded(named_graph("clique(12)"), 2, degree_ceiling=4)[0]


def test_twin_reduction_reported():
    rec = recognize_detailed(named_graph("clique(5)"), 3)
    assert rec.verdict and verify_k_leaf_root(named_graph("clique(5)"), rec.witness, 3)[0]


def test_components_independent():
    rng = SplitMix64(11)
    for _ in range(40):
        g = random_chordal(rng, 7)
        for k in (2, 3):
            whole = recognize_bounded(g, k)[0]
            parts = all(recognize_bounded(induced_subgraph(g, c)[0], k)[0] for c in connected_components(g))
            assert whole == parts == oracle_is_k_leaf_power(g, k)[0]


# properties ----------------------------------------------------------------------

@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 7), st.sampled_from([2, 3, 4]))
def test_valid_sets_invariants(seed, n, k):
    g = random_chordal(SplitMix64(seed), n)
    comp = max(connected_components(g), key=len)
    sub = induced_subgraph(g, comp)[0]
    if sub.n < 2:
        return
    res = run_dp(sub, 0, k)
    d = res.decomposition
    for i, q in enumerate(res.sets):
        assert q.leaves == d.nbhd[i]
        for v in q:
            assert v.tree.leaf_labels() == d.nbhd[i]
            assert v.is_bounded(k)
            assert v.height() <= 3 * k
    for idx in range(len(res.root_set)):
        assert verify_k_leaf_root(sub, realize(res, idx), k)[0]


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32), st.integers(3, 7))
def test_dominance_keeps_verdict(seed, n):
    g = random_chordal(SplitMix64(seed), n)
    comp = max(connected_components(g), key=len)
    sub = induced_subgraph(g, comp)[0]
    for k in (2, 3, 4):
        full = run_dp(sub, 0, k)
        lean = run_dp(sub, 0, k, dominance=True)
        assert bool(full.root_set.entries) == bool(lean.root_set.entries)
        assert codes(lean.root_set) <= codes(full.root_set)
        if lean.root_set.entries:
            assert verify_k_leaf_root(sub, realize(lean, 0), k)[0]
