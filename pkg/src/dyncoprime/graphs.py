"""Finite simple undirected graphs on vertex ids 0..n-1, plus the named families."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .errors import GraphValidationError, ParameterError

FAMILIES = ("path", "cycle", "wheel", "hypercube", "complete")


@dataclass(frozen=True)
class Graph:
    """Immutable simple graph. ``edges`` holds sorted ``(a, b)`` pairs with a < b."""

    n: int
    edges: tuple[tuple[int, int], ...]
    _adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for a, b in self.edges:
            adj[a].append(b)
            adj[b].append(a)
        object.__setattr__(self, "_adj", tuple(tuple(sorted(x)) for x in adj))

    @property
    def vertex_count(self) -> int:
        return self.n

    def vertices(self) -> range:
        return range(self.n)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(a) for a in self._adj]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[a, b] for a, b in self.edges]}

    @classmethod
    def from_json(cls, data: dict) -> Graph:
        return from_edge_list(data["n"], [tuple(e) for e in data["edges"]])


def from_edge_list(vertex_count: int, edges) -> Graph:
    """Validate and normalize an edge list. Duplicate and reversed pairs collapse."""
    if not isinstance(vertex_count, int) or vertex_count < 1:
        raise GraphValidationError(f"vertex_count must be a positive integer, got {vertex_count!r}")
    seen = set()
    for pair in edges:
        a, b = pair
        if not (0 <= a < vertex_count and 0 <= b < vertex_count):
            raise GraphValidationError(f"edge {pair!r} has an id outside [0, {vertex_count})", pair)
        if a == b:
            raise GraphValidationError(f"self-loop {pair!r}", pair)
        seen.add((min(a, b), max(a, b)))
    return Graph(vertex_count, tuple(sorted(seen)))


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ParameterError(msg)


def build_family(family: str, n: int) -> Graph:
    """Build P_n, C_n, W_n (hub 0, rim 1..n), Q_n or K_n."""
    if family not in FAMILIES:
        raise ParameterError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    _require(isinstance(n, int), f"n must be an integer, got {n!r}")
    if family == "path":
        _require(n >= 1, "path requires n >= 1")
        return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])
    if family == "cycle":
        _require(n >= 3, "cycle requires n >= 3")
        return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])
    if family == "wheel":
        _require(n >= 3, "wheel requires n >= 3 (W_n has n+1 vertices)")
        rim = [(1 + i, 1 + (i + 1) % n) for i in range(n)]
        return from_edge_list(n + 1, [(0, i) for i in range(1, n + 1)] + rim)
    if family == "hypercube":
        _require(n >= 1, "hypercube requires n >= 1")
        size = 1 << n
        return from_edge_list(size, [(v, v ^ (1 << b)) for v in range(size) for b in range(n) if not v >> b & 1])
    _require(n >= 1, "complete requires n >= 1")
    return from_edge_list(n, list(combinations(range(n), 2)))


@dataclass(frozen=True)
class Bipartition:
    part0: frozenset[int]
    part1: frozenset[int]


def _two_color(g: Graph):
    """BFS 2-colouring. Returns (colour, None) or (None, odd cycle as vertex list)."""
    color = [-1] * g.n
    parent = [-1] * g.n
    for root in g.vertices():
        if color[root] != -1:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if color[w] == -1:
                    color[w] = color[u] ^ 1
                    parent[w] = u
                    queue.append(w)
                elif color[w] == color[u]:
                    return None, _odd_cycle(parent, u, w)
    return color, None


def _odd_cycle(parent: list[int], u: int, w: int) -> list[int]:
    def chain(x):
        out = [x]
        while parent[x] != -1:
            x = parent[x]
            out.append(x)
        return out

    cu, cw = chain(u), chain(w)
    common = set(cu) & set(cw)
    head = [x for x in cu if x not in common]
    tail = [x for x in cw if x not in common]
    meet = next(x for x in cu if x in common)
    return head + [meet] + tail[::-1]


def bipartition_of(g: Graph) -> Bipartition | None:
    """Per-component 2-colouring; part0 holds each component's smallest id."""
    color, _ = _two_color(g)
    if color is None:
        return None
    return Bipartition(
        frozenset(v for v in g.vertices() if color[v] == 0),
        frozenset(v for v in g.vertices() if color[v] == 1),
    )


def find_odd_cycle(g: Graph) -> list[int] | None:
    return _two_color(g)[1]
