"""One entry point over the recognition engines.

``dp`` runs the bounded-degree dynamic program, ``oracle`` the exhaustive
search, ``prune+dp`` removes redundant pieces (similar structures) until the
degree ceiling is met and then runs the DP, and ``auto`` picks DP, then
oracle, then pruning, whichever applies first.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .dp import recognize_bounded, join_components, root_witnesses
from .errors import PreconditionError, ResourceError
from .graph import Graph, connected_components, induced_subgraph, is_chordal
from .oracle import DEFAULT_LIMIT, oracle_is_k_leaf_power
from .similar import (SimilarStructure, extend_witness, find_similar_structure,
                      find_similar_structure_exhaustive, prune_with_map)
from .tree import RootedTree

log = logging.getLogger(__name__)

ENGINES = ("dp", "oracle", "auto", "prune+dp")


@dataclass
class RunConfig:
    k: int
    engine: str = "auto"
    degree_ceiling: int = 8
    oracle_limit: int = DEFAULT_LIMIT
    prune_l: int = 4
    prune_cmax: int = 4
    exhaustive_search: bool = False

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be at least 2")
        if self.engine not in ENGINES:
            raise ValueError(f"engine must be one of {', '.join(ENGINES)}")
        if min(self.degree_ceiling, self.oracle_limit, self.prune_l, self.prune_cmax) < 1:
            raise ValueError("limits must be positive")


@dataclass
class Report:
    verdict: bool
    witness: RootedTree | None
    paths: list[str] = field(default_factory=list)
    prunes: int = 0

    def to_json(self) -> dict:
        return {"verdict": "yes" if self.verdict else "no", "engine_path": self.paths,
                "prune_count": self.prunes}


def recognize(g: Graph, cfg: RunConfig) -> Report:
    """Decide whether ``g`` is a k-leaf power under ``cfg``; raises ResourceError if no engine applies."""
    rep = Report(True, None)
    parts = []
    for comp in connected_components(g):
        sub, _, to_host = induced_subgraph(g, comp)
        ok, t = _component(sub, cfg, rep)
        if not ok:
            rep.verdict, rep.witness = False, None
            return rep
        parts.append((t, to_host))
    if parts:
        rep.witness = join_components(parts, cfg.k)
    return rep


def _component(g: Graph, cfg: RunConfig, rep: Report) -> tuple[bool, RootedTree | None]:
    if cfg.engine == "oracle":
        rep.paths.append("oracle")
        return oracle_is_k_leaf_power(g, cfg.k, cfg.oracle_limit)
    if cfg.engine == "dp":
        rep.paths.append("dp")
        return recognize_bounded(g, cfg.k, cfg.degree_ceiling)
    try:
        ok, t = recognize_bounded(g, cfg.k, cfg.degree_ceiling)
        rep.paths.append("dp")
        return ok, t
    except ResourceError:
        pass
    if cfg.engine == "auto" and g.n <= cfg.oracle_limit:
        rep.paths.append("oracle")
        return oracle_is_k_leaf_power(g, cfg.k, cfg.oracle_limit)
    return _prune_loop(g, cfg, rep)


def _prune_loop(g: Graph, cfg: RunConfig, rep: Report) -> tuple[bool, RootedTree | None]:
    """Prune, recurse on the smaller graph, then extend its root back."""
    if not is_chordal(g)[0]:
        rep.paths.append("chordality")
        return False, None
    s = _find(g, cfg)
    if s is None:
        raise ResourceError("degree above the ceiling and no homogeneous structure found")
    smaller, to_host = prune_with_map(g, s, cfg.k, cfg.prune_l, check=False)
    rep.prunes += 1
    rep.paths.append("prune")
    log.info("pruned %d vertices around z=%d", g.n - smaller.n, s.z)
    inner = Report(True, None)
    ok, r = _component(smaller, cfg, inner) if len(connected_components(smaller)) == 1 else _split(smaller, cfg, inner)
    rep.paths += inner.paths
    rep.prunes += inner.prunes
    if not ok:
        return False, None
    return True, _extend(g, s, cfg, smaller, to_host, r)


def _split(g: Graph, cfg: RunConfig, rep: Report):
    res = recognize(g, cfg)
    rep.paths += res.paths
    rep.prunes += res.prunes
    return res.verdict, res.witness


def _find(g: Graph, cfg: RunConfig) -> SimilarStructure | None:
    if cfg.exhaustive_search:
        return find_similar_structure_exhaustive(g, cfg.k, cfg.prune_l, cfg.prune_cmax)
    return find_similar_structure(g, cfg.k, cfg.prune_l, cfg.prune_cmax)


def _extend(g, s, cfg, smaller, to_host, r) -> RootedTree:
    def relabel(t):
        return RootedTree(t.parent, [-1 if x == -1 else to_host[x] for x in t.label])

    def candidates():
        yield relabel(r)
        # other roots of the smaller graph, for when the first one breaks the pairing
        for _, full in root_witnesses(smaller, to_host.index(s.z), cfg.k):
            yield relabel(full)

    try:
        return extend_witness(g, s, cfg.k, candidates())
    except PreconditionError:
        log.warning("insertion failed, falling back to the DP on the full graph")
        ok, t = recognize_bounded(g, cfg.k)
        if not ok:
            raise
        return t
