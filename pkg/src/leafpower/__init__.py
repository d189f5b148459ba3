"""Recognition of k-leaf powers.

A graph is a k-leaf power when some tree has its vertices as leaves and two
vertices are adjacent exactly when their tree distance is at most ``k``.
"""

from __future__ import annotations

from .decomposition import NiceDecomposition, build_nice_decomposition, validate_decomposition
from .dp import enumerate_root_restrictions, recognize_bounded, run_dp
from .engine import RunConfig, recognize
from .errors import PreconditionError, ResourceError
from .generator import GeneratorSpec, named_graph, planted_similar_instance, random_leaf_power
from .graph import Graph, is_chordal
from .oracle import oracle_enumerate_root_restrictions, oracle_is_k_leaf_power
from .signatures import signature, signature_space_bound
from .similar import (SimilarStructure, accept_set, insert_back, is_homogeneous, prune,
                      validate_similar_structure)
from .tree import INF, RootedTree, ValuedTree, restrict, valued_restrict, verify_k_leaf_root

__version__ = "0.1.0"

__all__ = [
    "INF", "Graph", "GeneratorSpec", "NiceDecomposition", "PreconditionError", "ResourceError",
    "RootedTree", "RunConfig", "SimilarStructure", "ValuedTree", "accept_set",
    "build_nice_decomposition", "enumerate_root_restrictions", "insert_back", "is_chordal",
    "is_homogeneous", "named_graph", "oracle_enumerate_root_restrictions", "oracle_is_k_leaf_power",
    "planted_similar_instance", "prune", "random_leaf_power", "recognize", "recognize_bounded",
    "restrict", "run_dp", "signature", "signature_space_bound", "validate_decomposition",
    "validate_similar_structure", "valued_restrict", "verify_k_leaf_root",
]
