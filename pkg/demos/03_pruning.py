"""Similar structures: many interchangeable pieces around one vertex, and how one of them gets removed."""

from leafpower import (GeneratorSpec, accept_set, is_homogeneous, planted_similar_instance, prune,
                       recognize_bounded, validate_similar_structure, verify_k_leaf_root)
from leafpower.similar import extend_witness, prune_with_map
from leafpower.tree import RootedTree


k = 4

# --- 1. Plant five copies of a small subtree under one node ---
print("--- 1. Planted instance ---")
g, s = planted_similar_instance(5, GeneratorSpec(seed=3, n_leaves=2, max_arity=3, max_unary_chain=1, k=k), k)
print(f"{g.n} vertices, z={s.z}, pieces:", [sorted(c | y) for c, y in zip(s.c_sets, s.y_sets)])
print("valid:", validate_similar_structure(g, s, k))

# --- 2. Accept sets ---
# a piece accepts the signatures its own roots can show from z; homogeneous means all pieces agree
print("\n--- 2. Homogeneity ---")
sizes = [len(accept_set(g, s, i, k)) for i in range(s.size)]
print("accept set sizes:", sizes, "homogeneous:", is_homogeneous(g, s, k))

# --- 3. Prune piece 1 ---
print("\n--- 3. Prune ---")
small = prune(g, s, k)
print(f"{g.n} -> {small.n} vertices")
print("verdict before:", recognize_bounded(g, k)[0], "after:", recognize_bounded(small, k)[0])

# --- 4. Put it back ---
# a root of the smaller graph plus a root of piece 1 alone gives a root of the whole graph
print("\n--- 4. Insert back ---")
small, to_host = prune_with_map(g, s, k)
_, r = recognize_bounded(small, k)
r = RootedTree(r.parent, [-1 if x == -1 else to_host[x] for x in r.label])
t = extend_witness(g, s, k, [r])
print("full witness verifies:", verify_k_leaf_root(g, t, k))
