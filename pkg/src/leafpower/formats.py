"""Text formats: edge lists, trees (JSON and DOT), decompositions, structures.

Every text format starts with the comment ``# format: v1``.

Edge list::

    # format: v1
    n 5          # optional vertex count, allows isolated vertices
    0 1
    1 2
    "a b" 3      # quoted tokens may hold any string

When every token is a non-negative integer the integers are the vertex ids;
otherwise tokens get dense ids in order of first appearance.  A line with a
single token declares an isolated vertex.
"""

from __future__ import annotations

import json
import shlex

from .decomposition import NiceDecomposition
from .graph import Graph
from .signatures import signature_from_json, signature_to_json
from .similar import SimilarStructure
from .tree import INF, RootedTree, TreeError, ValuedTree

HEADER = "# format: v1"


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _tokens(text: str):
    """Yield ``(line number, tokens)`` for non-blank lines, comments stripped."""
    for no, raw in enumerate(text.splitlines(), 1):
        try:
            toks = shlex.split(raw, comments=True, posix=True)
        except ValueError as exc:
            raise ParseError(no, str(exc)) from None
        if toks:
            yield no, toks, raw


def read_graph(text: str) -> tuple[Graph, list]:
    """Parse an edge list; returns the graph and the label of every vertex."""
    declared = None
    rows = []
    for no, toks, raw in _tokens(text):
        if toks[0] == "n" and len(toks) == 2 and not raw.lstrip().startswith(('"', "'")):
            if declared is not None:
                raise ParseError(no, "vertex count given twice")
            if not toks[1].isdigit():
                raise ParseError(no, f"bad vertex count {toks[1]!r}")
            declared = int(toks[1])
            continue
        if len(toks) > 2:
            raise ParseError(no, f"expected 'u v', got {len(toks)} tokens")
        rows.append((no, toks, raw))
    numeric = all(_is_plain_int(t, raw) for _, toks, raw in rows for t in toks)
    ids: dict = {}
    labels: list = []

    def vid(tok, no):
        if numeric:
            return int(tok)
        if tok not in ids:
            ids[tok] = len(labels)
            labels.append(tok)
        return ids[tok]

    edges = []
    seen = set()
    used = set()
    for no, toks, _ in rows:
        vs = [vid(t, no) for t in toks]
        used.update(vs)
        if len(vs) == 1:
            continue
        u, v = vs
        if u == v:
            raise ParseError(no, f"self-loop on {toks[0]!r}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ParseError(no, f"duplicate edge {toks[0]} {toks[1]}")
        seen.add(key)
        edges.append(key)
    if numeric:
        n = max(used) + 1 if used else 0
        if declared is not None:
            if declared < n:
                raise ParseError(1, f"declared {declared} vertices but vertex {n - 1} appears")
            n = declared
        labels = list(range(n))
    else:
        n = len(labels)
        if declared is not None:
            if declared < n:
                raise ParseError(1, f"declared {declared} vertices but {n} are named")
            labels += [f"_{i}" for i in range(n, declared)]
            n = declared
    return Graph(n, edges), labels


def _is_plain_int(tok: str, raw: str) -> bool:
    return tok.isdigit() and f'"{tok}"' not in raw and f"'{tok}'" not in raw


def write_graph(g: Graph, labels: list | None = None) -> str:
    """Edge list text; vertices are written by label when ``labels`` is given.

    Named vertices are declared one per line first, so reading the text back
    gives every vertex its old id.
    """
    named = labels is not None and not all(isinstance(x, int) for x in labels)

    def name(v):
        if not named:
            return str(v if labels is None else labels[v])
        lab = str(labels[v])
        if lab.isdigit() or lab == "n":
            return f'"{lab}"'  # keep it from reading as an id or a count
        return shlex.quote(lab)

    lines = [HEADER, f"n {g.n}"]
    if named:
        lines += [name(v) for v in range(g.n)]
    lines += [f"{name(u)} {name(v)}" for u, v in g.edges()]
    return "\n".join(lines) + "\n"


# trees ----------------------------------------------------------------------

def tree_to_json(t: RootedTree | ValuedTree) -> dict:
    out: dict = {"format": "v1"}
    if isinstance(t, ValuedTree):
        out["sigma"] = [None if s is None else ("inf" if s == INF else s) for s in t.sigma]
        t = t.tree
    out["parent"] = list(t.parent)
    out["label"] = list(t.label)
    return out


def tree_from_json(obj: dict) -> RootedTree | ValuedTree:
    if obj.get("format") != "v1":
        raise ValueError("tree document must carry format v1")
    try:
        t = RootedTree(obj["parent"], obj["label"])
    except KeyError as exc:
        raise ValueError(f"tree document lacks {exc}") from None
    if "sigma" in obj:
        return ValuedTree(t, [INF if s == "inf" else s for s in obj["sigma"]])
    return t


def write_tree_json(t: RootedTree | ValuedTree) -> str:
    return json.dumps(tree_to_json(t)) + "\n"


def read_tree_json(text: str) -> RootedTree | ValuedTree:
    try:
        return tree_from_json(json.loads(text))
    except (json.JSONDecodeError, TreeError) as exc:
        raise ValueError(f"bad tree document: {exc}") from None


def _dot_id(x) -> str:
    return json.dumps(str(x))


def write_tree_dot(t: RootedTree | ValuedTree, labels: list | None = None) -> str:
    """DOT text; leaves show vertex labels, internal nodes show their value if any."""
    sigma = None
    if isinstance(t, ValuedTree):
        t, sigma = t.tree, t.sigma
    lines = [HEADER, "graph tree {", "  node [shape=circle];"]
    for v in t.preorder():
        if t.children[v]:
            if sigma is None or sigma[v] is None:
                text = ""
            else:
                text = "inf" if sigma[v] == INF else str(sigma[v])
            shape = "box" if text else "point"
            lines.append(f"  n{v} [label={_dot_id(text)}, shape={shape}];")
        else:
            lab = t.label[v] if labels is None else labels[t.label[v]]
            lines.append(f"  n{v} [label={_dot_id(lab)}];")
    for v in t.preorder():
        for c in t.children[v]:
            lines.append(f"  n{v} -- n{c};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def write_decomposition_dot(d: NiceDecomposition, labels: list | None = None) -> str:
    def name(v):
        return str(v if labels is None else labels[v])

    lines = [HEADER, "digraph decomposition {", "  node [shape=box];"]
    for i in range(len(d)):
        bag = ", ".join(name(v) for v in sorted(d.bags[i]))
        tag = d.kind[i] if d.vertex[i] < 0 else f"{d.kind[i]} {name(d.vertex[i])}"
        lines.append(f"  b{i} [label={_dot_id(tag + ' {' + bag + '}')}];")
    for i in range(len(d)):
        for c in d.children[i]:
            lines.append(f"  b{i} -> b{c};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# structured objects -----------------------------------------------------------

def structure_to_json(s: SimilarStructure) -> dict:
    return {
        "format": "v1",
        "z": s.z,
        "c_sets": [sorted(c) for c in s.c_sets],
        "y_sets": [sorted(y) for y in s.y_sets],
        "layerings": [{str(v): x for v, x in sorted(lay.items())} for lay in s.layerings],
    }


def structure_from_json(obj: dict) -> SimilarStructure:
    if obj.get("format") != "v1":
        raise ValueError("structure document must carry format v1")
    return SimilarStructure(
        [frozenset(c) for c in obj["c_sets"]],
        [frozenset(y) for y in obj["y_sets"]],
        int(obj["z"]),
        [{int(v): int(x) for v, x in lay.items()} for lay in obj["layerings"]],
    )


def signatures_to_json(sigs) -> list:
    return sorted((signature_to_json(s) for s in sigs), key=json.dumps)


def signatures_from_json(objs: list) -> list:
    return [signature_from_json(o) for o in objs]
