"""Inside the dynamic program: the decomposition, the valid sets, and the root restrictions."""

from collections import Counter

from leafpower import (GeneratorSpec, build_nice_decomposition, enumerate_root_restrictions,
                       random_leaf_power, run_dp, validate_decomposition)
from leafpower.dp import _pick_anchor
from leafpower.graph import connected_components, induced_subgraph


# --- 1. A random 4-leaf power ---
print("--- 1. Input ---")
g, planted = random_leaf_power(GeneratorSpec(seed=96, n_leaves=12, max_arity=3, max_unary_chain=1, k=4))
# the program works per component; this seed gives a connected graph, but be safe
g, _, _ = induced_subgraph(g, max(connected_components(g), key=len))
print(f"{g.n} vertices, {len(g.edges())} edges, max degree {g.max_degree()}")

# --- 2. Nice decomposition with clique bags ---
# the anchor z ends up alone in the root bag
print("\n--- 2. Decomposition ---")
z = _pick_anchor(g)
d = build_nice_decomposition(g, z)
print("anchor:", z, "bags:", len(d.bags), "valid:", validate_decomposition(g, d))
print("node kinds:", dict(Counter(d.kind)))

# --- 3. Valid sets ---
# each bag holds the restrictions of roots of the graph below it, with distances to hidden leaves
print("\n--- 3. Valid set sizes ---")
res = run_dp(g, z, 4, d)
sizes = res.sizes()
print("largest set:", max(sizes), "root set:", len(res.root_set))
print("one root entry:", res.root_set.entries[0].valued())

# --- 4. Root restrictions ---
# only the entries rooted at z's parent; these are what pruning compares
print("\n--- 4. Restrictions to N[z] ---")
roots = enumerate_root_restrictions(g, z, 4)
print(len(roots), "root restrictions")
for v in roots[:3]:
    print(" ", v)
