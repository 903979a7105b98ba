"""Text, JSON and DOT formats for regular trees.

Text format, one directive per line, ``#`` starts a comment::

    alphabet omega            # or: alphabet finite 3
    start 0
    edge 0 set{0,1} 1
    edge 1 all 1
    edge 1 above(4) 0

A file without ``start`` line describes the empty tree.  Product trees for the
witness game add ``witness omega`` to the alphabet line and label edges with
``<spec>*<spec>``.
"""

from __future__ import annotations

import json
import re
from typing import Union

from .product import PairSpec, ProductTree
from .tree import Alphabet, ChildSpec, RegularTree, TreeError

AnyTree = Union[RegularTree, ProductTree]

_ID = re.compile(r"^(?:\d+|[A-Za-z_][\w.\-]*)$")
_SET = re.compile(r"^set\{(\d+(?:,\d+)*)\}$")
_ABOVE = re.compile(r"^above\((\d+)\)$")


class TreeParseError(TreeError):
    """Syntax or consistency error, located by line and column (both 1-based)."""

    def __init__(self, message: str, line: int, column: int, token: str = ""):
        self.line = line
        self.column = column
        self.token = token
        where = f"line {line}, column {column}"
        if token:
            where += f" near {token!r}"
        super().__init__(f"{where}: {message}")


def parse_state(token: str):
    if not _ID.match(token):
        raise ValueError(token)
    return int(token) if token.isdigit() else token


def parse_spec(token: str) -> ChildSpec:
    if token == "all":
        return ChildSpec.every()
    m = _SET.match(token)
    if m:
        return ChildSpec.of(*(int(x) for x in m.group(1).split(",")))
    m = _ABOVE.match(token)
    if m:
        return ChildSpec.above(int(m.group(1)))
    raise ValueError(token)


def _tokens(line: str) -> list:
    """Whitespace-separated tokens with 1-based start columns, comments stripped."""
    line = line.split("#", 1)[0]
    return [(m.group(0), m.start() + 1) for m in re.finditer(r"\S+", line)]


def parse_tree(text: str) -> AnyTree:
    """Parse the text format into a canonical tree (dead states are pruned)."""
    alphabet = None
    product = False
    start = None
    start_seen = False
    edges: dict = {}
    edge_lines: dict = {}
    last_line = 1
    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = _tokens(raw)
        if not toks:
            continue
        last_line = lineno
        head, col = toks[0]
        if head == "alphabet":
            if alphabet is not None:
                raise TreeParseError("duplicate alphabet line", lineno, col, head)
            words = [t for t, _ in toks[1:]]
            if words[:1] == ["omega"]:
                alphabet, rest = Alphabet.omega(), toks[2:]
            elif words[:1] == ["finite"] and len(words) >= 2:
                try:
                    alphabet = Alphabet.finite(int(words[1]))
                except (ValueError, TreeError):
                    raise TreeParseError("alphabet size must be a positive integer", lineno, toks[2][1], words[1])
                rest = toks[3:]
            else:
                tok, c = toks[1] if len(toks) > 1 else ("", col + len(head))
                raise TreeParseError("expected 'omega' or 'finite <n>'", lineno, c, tok)
            if rest:
                if [t for t, _ in rest] != ["witness", "omega"]:
                    raise TreeParseError("expected 'witness omega' or end of line", lineno, rest[0][1], rest[0][0])
                product = True
            continue
        if alphabet is None:
            raise TreeParseError("the first directive must be 'alphabet'", lineno, col, head)
        if head == "start":
            if len(toks) != 2:
                raise TreeParseError("expected 'start <id>'", lineno, col, head)
            if start_seen:
                raise TreeParseError("duplicate start line", lineno, col, head)
            try:
                start = parse_state(toks[1][0])
            except ValueError:
                raise TreeParseError("bad state id", lineno, toks[1][1], toks[1][0])
            start_seen = True
        elif head == "edge":
            if len(toks) != 4:
                tok, c = toks[-1]
                raise TreeParseError("expected 'edge <src> <spec> <dst>'", lineno, c, tok)
            (s_tok, s_col), (spec_tok, spec_col), (d_tok, d_col) = toks[1:]
            try:
                src = parse_state(s_tok)
            except ValueError:
                raise TreeParseError("bad state id", lineno, s_col, s_tok)
            try:
                dst = parse_state(d_tok)
            except ValueError:
                raise TreeParseError("bad state id", lineno, d_col, d_tok)
            try:
                if product:
                    a, sep, b = spec_tok.partition("*")
                    if not sep:
                        raise ValueError(spec_tok)
                    spec = PairSpec(parse_spec(a), parse_spec(b))
                else:
                    spec = parse_spec(spec_tok)
            except (ValueError, TreeError):
                raise TreeParseError("bad child spec", lineno, spec_col, spec_tok)
            first = spec.first if product else spec
            if first.kind == "above" and not alphabet.is_omega:
                raise TreeParseError("above() needs alphabet omega", lineno, spec_col, spec_tok)
            if first.kind == "set" and not all(alphabet.contains(x) for x in first.letters):
                raise TreeParseError(f"letters outside alphabet {alphabet}", lineno, spec_col, spec_tok)
            for other, _ in edges.get(src, []):
                if spec.overlaps(other):
                    raise TreeParseError(f"spec overlaps {other} on an earlier edge", lineno, spec_col, spec_tok)
            edges.setdefault(src, []).append((spec, dst))
            edges.setdefault(dst, [])
            edge_lines.setdefault(src, lineno)
        else:
            raise TreeParseError("unknown directive", lineno, col, head)
    if alphabet is None:
        raise TreeParseError("missing alphabet line", last_line, 1)
    if not start_seen:
        if edges:
            raise TreeParseError("edges given but no start line", last_line, 1)
        return ProductTree(alphabet, None, {}) if product else RegularTree.empty(alphabet)
    edges.setdefault(start, [])
    cls = ProductTree if product else RegularTree
    return cls.pruned(alphabet, start, edges)


def serialize_tree(tree: AnyTree) -> str:
    """Canonical text form; ``parse_tree(serialize_tree(t)) == t`` for canonical ``t``."""
    head = f"alphabet {tree.alphabet}"
    if isinstance(tree, ProductTree):
        head += " witness omega"
    lines = [head]
    if tree.start is not None:
        lines.append(f"start {tree.start}")
        for q in tree.sorted_states():
            for spec, t in tree.edges[q]:
                lines.append(f"edge {q} {spec} {t}")
    return "\n".join(lines) + "\n"


def tree_to_json(tree: AnyTree) -> dict:
    out = {"alphabet": str(tree.alphabet), "start": tree.start, "edges": []}
    if isinstance(tree, ProductTree):
        out["witness"] = "omega"
    for q in (tree.sorted_states() if tree.start is not None else []):
        for spec, t in tree.edges[q]:
            out["edges"].append({"src": q, "spec": str(spec), "dst": t})
    return out


def tree_from_json(data: Union[dict, str]) -> AnyTree:
    """Inverse of :func:`tree_to_json`; errors are reported against the equivalent text form."""
    if isinstance(data, str):
        data = json.loads(data)
    lines = [f"alphabet {data['alphabet']}" + (" witness omega" if data.get("witness") else "")]
    if data.get("start") is not None:
        lines.append(f"start {data['start']}")
    for e in data.get("edges", []):
        lines.append(f"edge {e['src']} {e['spec']} {e['dst']}")
    return parse_tree("\n".join(lines))


def _dot_id(state) -> str:
    return json.dumps(str(state))


def tree_to_dot(tree: AnyTree, name: str = "tree") -> str:
    """Graphviz source; edges carrying infinitely many letters get a doubled arrowhead."""
    lines = [f"digraph {name} {{", "  rankdir=LR;", "  node [shape=circle];"]
    if tree.start is not None:
        lines.append("  __start [shape=point];")
        lines.append(f"  __start -> {_dot_id(tree.start)};")
        for q in tree.sorted_states():
            for spec, t in tree.edges[q]:
                first = spec.first if isinstance(spec, PairSpec) else spec
                attrs = [f"label={json.dumps(str(spec))}"]
                if not first.is_finite(tree.alphabet) or isinstance(spec, PairSpec) and spec.witness.kind != "set":
                    attrs.append("arrowhead=normalnormal")
                lines.append(f"  {_dot_id(q)} -> {_dot_id(t)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
