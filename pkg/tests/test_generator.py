from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from leafpower.formats import write_graph, write_tree_json
from leafpower.generator import (GeneratorSpec, SplitMix64, graph_of_root, named_graph,
                                 planted_similar_instance, random_leaf_power)
from leafpower.graph import is_chordal
from leafpower.oracle import oracle_is_k_leaf_power
from leafpower.similar import accept_set, is_homogeneous, validate_similar_structure
from leafpower.tree import verify_k_leaf_root


def test_splitmix_reference_values():
    # first outputs for seed 0, as published with the algorithm
    rng = SplitMix64(0)
    assert rng.next_u64() == 0xE220A8397B1DCDAF
    assert rng.next_u64() == 0x6E789E6AA1B965F4


def test_splitmix_ranges():
    rng = SplitMix64(9)
    vals = [rng.below(7) for _ in range(2000)]
    assert set(vals) == set(range(7))
    assert all(3 <= rng.randint(3, 5) <= 5 for _ in range(100))
    assert all(0 <= rng.random() < 1 for _ in range(100))
    with pytest.raises(ValueError):
        rng.below(0)


def test_spec_validation():
    with pytest.raises(ValueError):
        GeneratorSpec(0, 0)
    with pytest.raises(ValueError):
        GeneratorSpec(0, 5, max_arity=1)
    with pytest.raises(ValueError):
        GeneratorSpec(0, 5, max_unary_chain=4, k=3)


def test_single_leaf():
    g, t = random_leaf_power(GeneratorSpec(1, 1))
    assert g.n == 1 and len(t) == 1


def test_deterministic():
    spec = GeneratorSpec(12345, 25, 4, 2, 4, twins=3)
    g1, t1 = random_leaf_power(spec)
    g2, t2 = random_leaf_power(spec)
    assert write_graph(g1) == write_graph(g2)
    assert write_tree_json(t1) == write_tree_json(t2)
    g3, _ = random_leaf_power(GeneratorSpec(12346, 25, 4, 2, 4, twins=3))
    assert write_graph(g3) != write_graph(g1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 40), st.integers(2, 4), st.integers(2, 5),
       st.integers(0, 3))
def test_outputs_verify(seed, n, arity, k, twins):
    spec = GeneratorSpec(seed, n, arity, min(2, k), k, twins)
    g, t = random_leaf_power(spec)
    assert n <= g.n <= n + twins
    assert verify_k_leaf_root(g, t, k)[0]
    assert graph_of_root(t, k).edges() == g.edges()


def test_arity_respected():
    for seed in range(20):
        _, t = random_leaf_power(GeneratorSpec(seed, 30, 3, 1, 3))
        assert max(len(c) for c in t.children) <= 3


@pytest.mark.parametrize("copies,k", [(3, 3), (4, 3), (4, 4), (5, 4)])
def test_planted_valid_and_homogeneous(copies, k):
    for seed in range(5):
        g, s = planted_similar_instance(copies, GeneratorSpec(seed, 1 + seed % 3, 3, 1, k), k)
        assert s.size == copies
        assert validate_similar_structure(g, s, k) == (True, None)
        assert is_homogeneous(g, s, k)
        first = accept_set(g, s, 0, k)
        assert all(accept_set(g, s, i, k) == first for i in range(copies))
        assert all(lay[s.z] == 0 for lay in s.layerings)


def test_planted_rejects_one_copy():
    with pytest.raises(ValueError):
        planted_similar_instance(1, GeneratorSpec(0, 2), 3)


def test_named_graphs():
    assert not is_chordal(named_graph("cycle(4)"))[0]
    assert oracle_is_k_leaf_power(named_graph("clique(4)"), 2)[0]
    bull = named_graph("bull")
    assert is_chordal(bull)[0] and not oracle_is_k_leaf_power(bull, 3)[0]
    for name in ("dart", "gem"):
        g = named_graph(name)
        assert is_chordal(g)[0] and not oracle_is_k_leaf_power(g, 3)[0]
        assert oracle_is_k_leaf_power(g, 4)[0]
    assert named_graph("star(3)").n == 4 and named_graph("path(1)").n == 1
    for bad in ("petersen", "cycle(2)", "clique(0)"):
        with pytest.raises(ValueError):
            named_graph(bad)
