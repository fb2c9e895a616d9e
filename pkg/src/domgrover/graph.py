"""Undirected simple graphs, parsing, and the brute-force dominating set oracle.

Vertices are ``0..n-1``.  A vertex subset is canonically an ``n``-bit mask
with bit ``i`` set when vertex ``i`` is a member; printed bitstrings put the
highest vertex leftmost, so ``'001001'`` is ``{0, 3}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from itertools import combinations
from typing import Iterable, Iterator


class GraphError(ValueError):
    """Invalid graph structure or vertex reference."""


class GraphFormatError(GraphError):
    """Malformed graph input; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise GraphError(f"vertex count must be non-negative, got {self.n}")
        normalized = set()
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop on vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) has an endpoint outside 0..{self.n - 1}")
            normalized.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(normalized))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> Graph:
        """Build a graph, rejecting duplicate edges (in either orientation)."""
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphError(f"duplicate edge ({u}, {v})")
            seen.add(key)
        return cls(n, frozenset(seen))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.adjacency[v])

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise GraphError(f"vertex {v} out of range 0..{self.n - 1}")

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": [list(e) for e in sorted(self.edges)]})

    def to_dimacs(self) -> str:
        lines = [f"p edge {self.n} {len(self.edges)}"]
        lines += [f"e {u + 1} {v + 1}" for u, v in sorted(self.edges)]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VertexSet:
    """Subset of ``0..n-1`` stored as a bitmask."""

    n: int
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.n:
            raise GraphError(f"mask {self.mask:#b} has members outside 0..{self.n - 1}")

    @classmethod
    def of(cls, n: int, members: Iterable[int]) -> VertexSet:
        mask = 0
        for v in members:
            if not 0 <= v < n:
                raise GraphError(f"vertex {v} out of range 0..{n - 1}")
            mask |= 1 << v
        return cls(n, mask)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.mask >> v & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, v: object) -> bool:
        return isinstance(v, int) and 0 <= v < self.n and bool(self.mask >> v & 1)

    def bitstring(self) -> str:
        return format(self.mask, f"0{self.n}b") if self.n else ""


def _as_mask(g: Graph, s: VertexSet | int | Iterable[int]) -> int:
    if isinstance(s, VertexSet):
        if s.n != g.n:
            raise GraphError(f"vertex set is over {s.n} vertices, graph has {g.n}")
        return s.mask
    if isinstance(s, int):
        return VertexSet(g.n, s).mask
    return VertexSet.of(g.n, s).mask


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

def parse_graph(text: str, format: str = "dimacs") -> Graph:
    """Parse ``text`` as ``"dimacs"`` (1-based ``p edge``/``e`` lines) or ``"json"``."""
    if format == "dimacs":
        return _parse_dimacs(text)
    if format == "json":
        return _parse_json(text)
    raise GraphFormatError(f"unknown graph format {format!r}")


def _parse_int(token: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"expected an integer, got {token!r}", lineno) from None


def _parse_dimacs(text: str) -> Graph:
    n = m = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        tag = tokens[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError("duplicate 'p' header", lineno)
            if len(tokens) != 4 or tokens[1] != "edge":
                raise GraphFormatError("header must read 'p edge <n> <m>'", lineno)
            n, m = _parse_int(tokens[2], lineno), _parse_int(tokens[3], lineno)
            if n < 0 or m < 0:
                raise GraphFormatError("vertex and edge counts must be non-negative", lineno)
        elif tag == "e":
            if n is None:
                raise GraphFormatError("edge line before 'p edge' header", lineno)
            if len(tokens) != 3:
                raise GraphFormatError("edge line must read 'e <u> <v>'", lineno)
            u, v = _parse_int(tokens[1], lineno), _parse_int(tokens[2], lineno)
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(f"endpoint out of range 1..{n} in edge ({u}, {v})", lineno)
            if u == v:
                raise GraphFormatError(f"self-loop on vertex {u}", lineno)
            key = (min(u, v) - 1, max(u, v) - 1)
            if key in seen:
                raise GraphFormatError(f"duplicate edge ({u}, {v})", lineno)
            seen.add(key)
            edges.append(key)
        else:
            raise GraphFormatError(f"unrecognized line tag {tag!r}", lineno)
    if n is None:
        raise GraphFormatError("missing 'p edge <n> <m>' header")
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    return Graph(n, frozenset(edges))


def _parse_json(text: str) -> Graph:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict) or not isinstance(doc.get("n"), int) or isinstance(doc["n"], bool):
        raise GraphFormatError("expected an object with integer field 'n'")
    raw_edges = doc.get("edges", [])
    if not isinstance(raw_edges, list):
        raise GraphFormatError("'edges' must be a list of [u, v] pairs")
    edges = []
    for e in raw_edges:
        if not (isinstance(e, list) and len(e) == 2 and all(type(x) is int for x in e)):
            raise GraphFormatError(f"bad edge entry {e!r}")
        edges.append((e[0], e[1]))
    try:
        return Graph.from_edges(doc["n"], edges)
    except GraphFormatError:
        raise
    except GraphError as exc:
        raise GraphFormatError(str(exc)) from None


def load_graph(path: str, format: str | None = None) -> Graph:
    """Read a graph file; the format defaults from the extension (``.json`` or DIMACS)."""
    if format is None:
        format = "json" if str(path).endswith(".json") else "dimacs"
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read(), format)


def fixture_path(name: str) -> str:
    """Path of a bundled fixture graph, e.g. ``"surrogate6.dimacs"``."""
    path = resources.files("domgrover") / "fixtures" / name
    if not path.is_file():
        raise FileNotFoundError(name)
    return str(path)


def surrogate_graph() -> Graph:
    """The 6-vertex instance whose size-2 dominating sets are {0,3}, {1,3}, {2,3}, {2,5}."""
    return load_graph(fixture_path("surrogate6.dimacs"))


# --------------------------------------------------------------------------
# Domination
# --------------------------------------------------------------------------

def closed_neighborhood(g: Graph, v: int) -> VertexSet:
    g._check_vertex(v)
    return VertexSet.of(g.n, g.adjacency[v] | {v})


def is_dominating(g: Graph, s: VertexSet | int | Iterable[int]) -> bool:
    mask = _as_mask(g, s)
    return all(closed_neighborhood(g, v).mask & mask for v in range(g.n))


def dominating_predicate(g: Graph, k: int, x: int) -> bool:
    """``|x| == k`` and ``x`` dominates ``g``; the target of the Grover oracle."""
    return x.bit_count() == k and is_dominating(g, x)


def enumerate_dominating_sets(g: Graph, k: int) -> list[VertexSet]:
    """All size-``k`` dominating sets, in ascending bitmask order."""
    if not 0 < k <= g.n:
        raise GraphError(f"k must satisfy 0 < k <= {g.n}, got {k}")
    closed = [closed_neighborhood(g, v).mask for v in range(g.n)]
    masks = []
    for combo in combinations(range(g.n), k):
        mask = sum(1 << v for v in combo)
        if all(c & mask for c in closed):
            masks.append(mask)
    return [VertexSet(g.n, m) for m in sorted(masks)]
