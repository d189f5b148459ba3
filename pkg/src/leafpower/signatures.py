"""Signatures of valued trees under a layering of their leaves.

A signature is stored as a nested tuple:

* leaf: ``(0, layer)``
* internal node: ``(1, ((child_sig, capped_count), ...), root_value)``

The child part is a sparse map sorted by child signature, holding only the
signatures that occur (with count 1 or 2).  Equality of the sparse form is
equality of the dense count vectors, since absent entries are zero.  Plain
tuple comparison gives a total order.
"""

from __future__ import annotations

from collections import Counter
from typing import Mapping

from .tree import INF, ValuedTree

Signature = tuple


class SignatureError(ValueError):
    """Input violates a signature precondition."""


class BoundTooLarge(OverflowError):
    """The requested bound has more digits than is sensible to materialise."""


def node_signatures(v: ValuedTree, layers: Mapping[int, int], k: int) -> list[Signature]:
    """Signature of the valued subtree rooted at every node, bottom-up."""
    t = v.tree
    out: list = [None] * len(t)
    for x in t.postorder():
        if not t.children[x]:
            lab = t.label[x]
            if lab not in layers:
                raise SignatureError(f"leaf {lab} has no layer")
            out[x] = (0, layers[lab])
            continue
        s = v.sigma[x]
        if s != INF and s > k:
            raise SignatureError(f"value {s} at node {x} exceeds k={k}")
        counts = Counter(out[c] for c in t.children[x])
        kids = tuple(sorted((sig, min(2, c)) for sig, c in counts.items()))
        out[x] = (1, kids, s)
    return out


def signature(v: ValuedTree, layers: Mapping[int, int], k: int) -> Signature:
    """Capped-count signature of ``v`` with leaves layered by ``layers``."""
    return node_signatures(v, layers, k)[v.tree.root]


def signature_height(sig: Signature) -> int:
    if sig[0] == 0:
        return 1
    return 1 + max(signature_height(c) for c, _ in sig[1])


def signature_to_json(sig: Signature):
    """Nested lists; a leaf is ``[layer]``, an internal node
    ``[[[child, count], ...], value]`` with ``"inf"`` for an infinite value."""
    if sig[0] == 0:
        return [sig[1]]
    return [[[signature_to_json(c), n] for c, n in sig[1]], "inf" if sig[2] == INF else sig[2]]


def signature_from_json(obj) -> Signature:
    if len(obj) == 1:
        return (0, int(obj[0]))
    kids, val = obj
    return (1, tuple((signature_from_json(c), int(n)) for c, n in kids),
            INF if val == "inf" else int(val))


def signature_space_bound(s: int, h: int, k: int, max_digits: int = 10**6) -> int:
    """Upper bound on the number of signatures of s-bounded trees of height <= h.

    ``k + 1`` for ``h == 1``; otherwise ``(s + 2) * 3**m + m`` with ``m`` the
    bound for ``h - 1``.  Raises :class:`BoundTooLarge` when the next power
    would exceed roughly ``max_digits`` decimal digits.
    """
    if h < 1:
        raise ValueError("height must be at least 1")
    if s < 0 or k < 0:
        raise ValueError("s and k must be non-negative")
    m = k + 1
    for _ in range(h - 1):
        # log10(3) < 0.478
        if m * 0.478 > max_digits:
            raise BoundTooLarge(f"bound for h={h} has more than {max_digits} digits")
        m = (s + 2) * 3**m + m
    return m


def check_basic_sig_properties(v1: ValuedTree, v2: ValuedTree,
                               l1: Mapping[int, int], l2: Mapping[int, int], k: int | None = None) -> bool:
    """Check the three structural consequences of equal signatures.

    1. a child of the first root whose signature is unique among its siblings
       has exactly one counterpart below the second root;
    2. a signature repeated below the first root is repeated below the second;
    3. every node of the first tree has a node of the second tree at the same
       depth with the same subtree signature.
    """
    if k is None:
        vals = [x for x in v1.sigma + v2.sigma if x is not None and x != INF]
        k = max(vals, default=0)
    s1 = node_signatures(v1, l1, k)
    s2 = node_signatures(v2, l2, k)
    t1, t2 = v1.tree, v2.tree
    if s1[t1.root] != s2[t2.root]:
        raise SignatureError("trees do not have equal signatures")
    c1 = Counter(s1[c] for c in t1.children[t1.root])
    c2 = Counter(s2[c] for c in t2.children[t2.root])
    for sig, n in c1.items():
        if n == 1 and c2[sig] != 1:
            return False
        if n >= 2 and c2[sig] < 2:
            return False
    by_depth = {(t2.depth(y), s2[y]) for y in range(len(t2))}
    return all((t1.depth(x), s1[x]) in by_depth for x in range(len(t1)))
