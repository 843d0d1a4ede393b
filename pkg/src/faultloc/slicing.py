"""Dependence graphs, static and approximate dynamic slices, slice ranking.

Edges point in the backward-dependence direction: ``a -> b`` means statement
``a`` depends on ``b`` (through data or control). A backward slice is thus
plain forward reachability from the criterion.

Graph documents are either a DOT subset::

    digraph middle {
      "middle.c:15";
      "middle.c:3";
      "middle.c:15" -> "middle.c:3" [kind="data"];
    }

or the JSON mirror ``{"nodes": [...], "edges": [{"from", "to", "kind"}]}``.
Every node must be declared before or after use; edges may not introduce
nodes implicitly.
"""

from __future__ import annotations

import json
import re
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputError
from .sbfl import Policy, Ranking
from .spectra import StatementId, line_key


class EdgeKind(Enum):
    DATA = "data"
    CONTROL = "control"


@dataclass(frozen=True)
class Edge:
    src: StatementId
    dst: StatementId
    kind: EdgeKind


@dataclass(frozen=True)
class DependenceGraph:
    nodes: frozenset
    edges: tuple
    _succ: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        succ = {n: [] for n in self.nodes}
        for e in self.edges:
            for end in (e.src, e.dst):
                if end not in self.nodes:
                    raise InputError(f"edge {e.src} -> {e.dst} references undeclared node {end}")
            if e.kind is EdgeKind.CONTROL and e.src == e.dst:
                raise InputError(f"control self-loop on {e.src}")
            succ[e.src].append(e.dst)
        # deterministic traversal regardless of document edge order
        object.__setattr__(self, "_succ", {n: sorted(set(v), key=line_key) for n, v in succ.items()})

    def successors(self, s: StatementId) -> list:
        return self._succ[s]


def make_graph(nodes: Iterable, edges: Iterable) -> DependenceGraph:
    """Build a graph from ids and (src, dst, kind) triples."""
    node_set = frozenset(_as_id(n) for n in nodes)
    edge_list = []
    for src, dst, kind in edges:
        edge_list.append(Edge(_as_id(src), _as_id(dst), _kind(kind)))
    return DependenceGraph(node_set, tuple(edge_list))


def _as_id(s) -> StatementId:
    return s if isinstance(s, StatementId) else StatementId.parse(s)


def _kind(k) -> EdgeKind:
    if isinstance(k, EdgeKind):
        return k
    try:
        return EdgeKind(str(k).lower())
    except ValueError:
        raise InputError(f"unknown edge kind {k!r}") from None


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|//[^\n]*|\#[^\n]*|/\*.*?\*/)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<arrow>->)
  | (?P<punct>[{}\[\];,=])
  | (?P<word>[^\s{}\[\];,="]+)
    """,
    re.VERBOSE | re.DOTALL,
)


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise InputError(f"unexpected character at offset {pos}")
        pos = m.end()
        kind = m.lastgroup
        if kind == "ws":
            continue
        value = m.group()
        if kind == "string":
            value = value[1:-1].replace('\\"', '"')
        tokens.append((kind, value))
    return tokens


def parse_graph_dot(text: str) -> DependenceGraph:
    toks = _tokenize(text)
    i = 0

    def peek(k=0):
        return toks[i + k] if i + k < len(toks) else (None, None)

    def take(expected=None):
        nonlocal i
        if i >= len(toks):
            raise InputError("unexpected end of graph document")
        tok = toks[i]
        if expected is not None and tok[1] != expected:
            raise InputError(f"expected {expected!r}, got {tok[1]!r}")
        i += 1
        return tok

    if peek()[1] == "strict":
        take()
    if peek()[1] != "digraph":
        raise InputError("graph document must start with 'digraph'")
    take()
    if peek()[1] != "{":
        take()  # graph name
    take("{")

    nodes, edges = [], []
    while True:
        kind, value = peek()
        if value is None:
            raise InputError("unterminated digraph body")
        if value == "}":
            take()
            break
        if value == ";":
            take()
            continue
        if kind not in ("string", "word"):
            raise InputError(f"unexpected token {value!r}")
        if value in ("graph", "node", "edge") and peek(1)[1] == "[":
            take()
            _attrs(take, peek)
            continue
        chain = [take()[1]]
        while peek()[0] == "arrow":
            take()
            chain.append(take()[1])
        attrs = _attrs(take, peek) if peek()[1] == "[" else {}
        if len(chain) == 1:
            if peek()[1] == "=":  # graph-level attribute, e.g. rankdir=LR
                take()
                take()
                continue
            nodes.append(chain[0])
        else:
            if "kind" not in attrs:
                raise InputError(f"edge {' -> '.join(chain)} lacks a kind attribute")
            for a, b in zip(chain, chain[1:]):
                edges.append((a, b, attrs["kind"]))
    if i != len(toks):
        raise InputError("trailing content after digraph body")
    return make_graph(nodes, edges)


def _attrs(take, peek) -> dict:
    take("[")
    attrs = {}
    while peek()[1] != "]":
        if peek()[1] in (",", ";"):
            take()
            continue
        key = take()[1]
        take("=")
        attrs[key] = take()[1]
    take("]")
    return attrs


def parse_graph_json(text: str) -> DependenceGraph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}") from None
    if not isinstance(doc, dict) or "nodes" not in doc:
        raise InputError("JSON graph needs a 'nodes' list")
    try:
        edges = [(e["from"], e["to"], e["kind"]) for e in doc.get("edges", [])]
    except (KeyError, TypeError):
        raise InputError("each edge needs 'from', 'to' and 'kind'") from None
    return make_graph(doc["nodes"], edges)


def parse_graph(source) -> DependenceGraph:
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    if path.suffix.lower() == ".json":
        return parse_graph_json(text)
    return parse_graph_dot(text)


def dump_graph_dot(g: DependenceGraph, name: str = "pdg") -> str:
    out = [f"digraph {name} {{"]
    out += [f'  "{n.id}";' for n in sorted(g.nodes, key=line_key)]
    for e in g.edges:
        out.append(f'  "{e.src.id}" -> "{e.dst.id}" [kind="{e.kind.value}"];')
    out.append("}")
    return "\n".join(out) + "\n"


class SliceKind(Enum):
    STATIC = "static"
    APPROX_DYNAMIC = "approx-dynamic"


@dataclass(frozen=True)
class SliceRequest:
    criterion: StatementId
    executed: frozenset
    faulty: frozenset = frozenset()


@dataclass(frozen=True)
class Slice:
    criterion: StatementId
    distance: dict
    kind: SliceKind

    @property
    def members(self) -> frozenset:
        return frozenset(self.distance)


def _bfs(g: DependenceGraph, start: StatementId, allowed=None) -> dict:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for t in g.successors(s):
            if t in dist or (allowed is not None and t not in allowed):
                continue
            dist[t] = dist[s] + 1
            queue.append(t)
    return dist


def static_slice(g: DependenceGraph, criterion: StatementId) -> Slice:
    if criterion not in g.nodes:
        raise InputError(f"criterion {criterion} is not a graph node")
    return Slice(criterion, _bfs(g, criterion), SliceKind.STATIC)


def approx_dynamic_slice(g: DependenceGraph, req: SliceRequest) -> Slice:
    """Backward reachability from the criterion through executed statements only.

    Distances are measured in the graph restricted to executed nodes, so a
    path through an unexecuted statement does not count.
    """
    if req.criterion not in g.nodes:
        raise InputError(f"criterion {req.criterion} is not a graph node")
    stray = req.executed - g.nodes
    if stray:
        raise InputError(f"executed statement {min(stray, key=line_key)} is not a graph node")
    if req.criterion not in req.executed:
        raise InputError(f"criterion {req.criterion} was not executed by the failing run")
    return Slice(req.criterion, _bfs(g, req.criterion, req.executed), SliceKind.APPROX_DYNAMIC)


def slice_ranking(slc: Slice, universe: Sequence, reported: Sequence = ()) -> Ranking:
    """Rank the universe by backward-dependence distance from the criterion.

    `reported` is an optional prefix of statements already shown to the
    developer; they keep ordinal ranks 1..k and are skipped afterwards.

    Tier ranks count the reported prefix plus the non-criterion slice members
    in strictly closer tiers, plus one: the criterion is where the failure is
    observed and costs nothing to reach past. Statements outside the slice
    all share the last rank, |P|.
    """
    universe = list(universe)
    uset = set(universe)
    stray = slc.members - uset
    if stray:
        raise InputError(f"slice member {min(stray, key=line_key)} is outside the universe")
    reported = list(reported)
    if len(set(reported)) != len(reported) or not set(reported) <= uset:
        raise InputError("reported prefix must be distinct universe statements")

    done = set(reported)
    rank = {s: i for i, s in enumerate(reported, 1)}
    base = len(reported)
    members = sorted((s for s in slc.members if s not in done),
                     key=lambda s: (slc.distance[s], line_key(s)))
    closer = 0  # non-criterion members seen in strictly closer tiers
    tier, tier_size = None, 0
    for s in members:
        d = slc.distance[s]
        if d != tier:
            closer += tier_size
            tier, tier_size = d, 0
        rank[s] = base + closer + 1
        if s != slc.criterion:
            tier_size += 1
    rest = sorted((s for s in universe if s not in done and s not in slc.members), key=line_key)
    for s in rest:
        rank[s] = len(universe)

    order = tuple(reported + members + rest)
    policy = Policy.ORDINAL if len(reported) == len(universe) else Policy.MODIFIED_COMPETITION
    return Ranking(order, rank, policy)
