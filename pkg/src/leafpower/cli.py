"""Command-line front end.

Exit status: 0 for yes (or success), 1 for no, 2 for errors and resource limits.
Set ``LEAFPOWER_LOG`` (e.g. ``INFO``) to see progress messages on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import formats
from .decomposition import build_nice_decomposition, validate_decomposition
from .engine import ENGINES, RunConfig, recognize
from .errors import PreconditionError, ResourceError
from .generator import GeneratorSpec, named_graph, planted_similar_instance, random_leaf_power
from .oracle import DEFAULT_LIMIT, oracle_is_k_leaf_power
from .signatures import BoundTooLarge, SignatureError
from .similar import accept_set, validate_similar_structure
from .tree import TreeError, verify_k_leaf_root

YES, NO, ERROR = 0, 1, 2


def _read_graph(path: str):
    with open(path, encoding="utf-8") as fh:
        return formats.read_graph(fh.read())


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _write_witness(path: str, t, labels) -> None:
    if path.endswith(".dot"):
        _write(path, formats.write_tree_dot(t, labels))
    else:
        _write(path, formats.write_tree_json(t))


def cmd_recognize(args) -> int:
    g, labels = _read_graph(args.graph)
    cfg = RunConfig(args.k, args.engine, args.degree_ceiling, args.oracle_limit,
                    args.prune_l, args.prune_cmax, args.exhaustive_structure_search)
    rep = recognize(g, cfg)
    if rep.verdict and rep.witness is not None:
        ok, bad = verify_k_leaf_root(g, rep.witness, args.k)
        if not ok:
            raise AssertionError(f"internal error: witness fails on pair {bad}")
    print("yes" if rep.verdict else "no")
    print(f"engine path: {' -> '.join(rep.paths) or 'none'}; prunes: {rep.prunes}")
    if args.witness and rep.witness is not None:
        _write_witness(args.witness, rep.witness, labels)
    if args.json:
        doc = rep.to_json()
        doc.update(k=args.k, vertices=g.n, edges=g.edge_count())
        _write(args.json, json.dumps(doc, indent=2) + "\n")
    return YES if rep.verdict else NO


def cmd_oracle(args) -> int:
    g, labels = _read_graph(args.graph)
    ok, t = oracle_is_k_leaf_power(g, args.k, args.oracle_limit)
    print("yes" if ok else "no")
    if args.witness and t is not None:
        _write_witness(args.witness, t, labels)
    return YES if ok else NO


def cmd_gen(args) -> int:
    if args.named:
        _write(args.out, formats.write_graph(named_graph(args.named)))
        return YES
    spec = GeneratorSpec(args.seed, args.leaves, args.max_arity, args.max_chain, args.k, args.twins)
    if args.planted:
        g, s = planted_similar_instance(args.planted, spec, args.k, args.extra_leaves)
        _write(args.out, formats.write_graph(g))
        if args.structure:
            _write(args.structure, json.dumps(formats.structure_to_json(s), indent=2) + "\n")
        return YES
    g, t = random_leaf_power(spec)
    _write(args.out, formats.write_graph(g))
    if args.witness:
        _write_witness(args.witness, t, None)
    return YES


def cmd_accept_set(args) -> int:
    g, _ = _read_graph(args.graph)
    with open(args.structure, encoding="utf-8") as fh:
        s = formats.structure_from_json(json.load(fh))
    ok, why = validate_similar_structure(g, s, args.k)
    if not ok:
        raise PreconditionError(f"structure is invalid ({why})")
    sigs = accept_set(g, s, args.index - 1, args.k, args.degree_ceiling)
    print(json.dumps(formats.signatures_to_json(sigs)))
    return YES if sigs else NO


def cmd_decompose(args) -> int:
    g, labels = _read_graph(args.graph)
    d = build_nice_decomposition(g, args.z)
    ok, why = validate_decomposition(g, d)
    if not ok:
        raise AssertionError(f"internal error: {why}")
    print(f"nodes: {len(d)}; width: {d.width()}")
    if args.dot:
        _write(args.dot, formats.write_decomposition_dot(d, labels))
    return YES


def cmd_verify(args) -> int:
    g, _ = _read_graph(args.graph)
    with open(args.witness, encoding="utf-8") as fh:
        t = formats.read_tree_json(fh.read())
    t = getattr(t, "tree", t)
    ok, bad = verify_k_leaf_root(g, t, args.k)
    if ok:
        print("valid")
        return YES
    u, v, dist = bad
    print(f"invalid: vertices {u} and {v} are at distance {dist}, adjacency says otherwise")
    return NO


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leafpower", description="k-leaf power recognition tools")
    sub = p.add_subparsers(dest="command", required=True)

    def common(q, graph=True):
        if graph:
            q.add_argument("graph", help="edge-list file")
        q.add_argument("-k", type=int, required=True)

    r = sub.add_parser("recognize", help="decide whether a graph is a k-leaf power")
    common(r)
    r.add_argument("--engine", choices=ENGINES, default="auto")
    r.add_argument("--degree-ceiling", type=int, default=8)
    r.add_argument("--oracle-limit", type=int, default=DEFAULT_LIMIT)
    r.add_argument("--prune-l", type=int, default=4, help="pieces a structure needs before pruning")
    r.add_argument("--prune-cmax", type=int, default=4, help="largest C-set tried by the search")
    r.add_argument("--exhaustive-structure-search", action="store_true",
                   help="try every tuple of small sets (tiny graphs only)")
    r.add_argument("--witness", help="write the k-leaf root (.dot for DOT, JSON otherwise)")
    r.add_argument("--json", help="write a JSON report")
    r.add_argument("--seed", type=int, default=0, help="accepted for symmetry with gen; unused")
    r.set_defaults(func=cmd_recognize)

    o = sub.add_parser("oracle", help="exhaustive search on small graphs")
    common(o)
    o.add_argument("--oracle-limit", type=int, default=DEFAULT_LIMIT)
    o.add_argument("--witness")
    o.set_defaults(func=cmd_oracle)

    gp = sub.add_parser("gen", help="write a generated graph")
    common(gp, graph=False)
    gp.add_argument("-o", "--out", required=True)
    gp.add_argument("--seed", type=int, default=0)
    gp.add_argument("--leaves", type=int, default=10)
    gp.add_argument("--max-arity", type=int, default=3)
    gp.add_argument("--max-chain", type=int, default=1)
    gp.add_argument("--twins", type=int, default=0)
    gp.add_argument("--planted", type=int, metavar="COPIES", help="plant this many similar copies")
    gp.add_argument("--extra-leaves", type=int, default=0)
    gp.add_argument("--structure", help="with --planted: write the structure JSON here")
    gp.add_argument("--named", help="bull, dart, gem, path(n), cycle(n), clique(n), star(n)")
    gp.add_argument("--witness")
    gp.set_defaults(func=cmd_gen)

    a = sub.add_parser("accept-set", help="signatures accepted by one piece of a structure")
    common(a)
    a.add_argument("--structure", required=True)
    a.add_argument("--index", type=int, default=1, help="piece number, starting at 1")
    a.add_argument("--degree-ceiling", type=int, default=None)
    a.set_defaults(func=cmd_accept_set)

    d = sub.add_parser("decompose", help="nice clique decomposition of a chordal graph")
    d.add_argument("graph")
    d.add_argument("-z", type=int, default=0, help="vertex for the root bag")
    d.add_argument("--dot")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a k-leaf root against a graph")
    common(v)
    v.add_argument("witness", help="tree JSON as written by --witness")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    level = os.environ.get("LEAFPOWER_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
    except (formats.ParseError, OSError, ValueError, TreeError, PreconditionError,
            SignatureError, BoundTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return ERROR


if __name__ == "__main__":
    sys.exit(main())
