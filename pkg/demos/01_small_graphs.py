"""A first look: which small graphs are k-leaf powers, and what do their roots look like."""

from leafpower import named_graph, oracle_is_k_leaf_power, recognize_bounded, verify_k_leaf_root
from leafpower.tree import to_nested


# --- 1. A path ---
# P4 needs distance 3 between its ends, so it is a 3-leaf power but not a 2-leaf power.
print("--- 1. A path ---")
g = named_graph("path(4)")
for k in (2, 3):
    ok, root = recognize_bounded(g, k)
    print(f"k={k}: {'yes' if ok else 'no'}")
print("root for k=3:", to_nested(root))

# --- 2. The witness checks out on its own ---
print("\n--- 2. Verification ---")
print("verify at k=3:", verify_k_leaf_root(g, root, 3))
# at k=2 the same tree loses an edge; the verifier reports the pair and its distance
print("verify at k=2:", verify_k_leaf_root(g, root, 2))

# --- 3. Small obstructions ---
# bull, dart and gem are chordal yet not 3-leaf powers; one more unit of distance fixes that
print("\n--- 3. Obstructions ---")
for name in ("bull", "dart", "gem", "cycle(4)"):
    row = []
    for k in (3, 4, 5):
        ok, _ = recognize_bounded(named_graph(name), k)
        row.append(f"k={k}:{'yes' if ok else 'no'}")
    print(f"{name:9s}", " ".join(row))
# cycle(4) is not chordal, so no k helps

# --- 4. Against brute force ---
print("\n--- 4. Oracle agreement ---")
for name in ("star(4)", "clique(4)", "gem"):
    g = named_graph(name)
    print(name, [recognize_bounded(g, k)[0] == oracle_is_k_leaf_power(g, k)[0] for k in (2, 3, 4)])
