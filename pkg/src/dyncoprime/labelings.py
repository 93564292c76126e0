"""Initial labelings: canonical constructions, verification and an exact solver."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from .errors import DomainError, NotBipartiteError, ParameterError
from .graphs import Graph, bipartition_of, build_family, find_odd_cycle
from .numtheory import factorize, nth_prime


@dataclass(frozen=True)
class Labeling:
    """Vertex labels indexed by vertex id."""

    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(x) for x in self.values))
        if any(x < 1 for x in self.values):
            raise DomainError("labels must be positive integers")

    def __getitem__(self, v: int) -> int:
        return self.values[v]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    @property
    def injective(self) -> bool:
        return len(set(self.values)) == len(self.values)

    def to_json(self) -> dict:
        return {"labels": {str(v): str(x) for v, x in enumerate(self.values)}}

    @classmethod
    def from_json(cls, data: dict) -> Labeling:
        raw = data["labels"]
        n = len(raw)
        try:
            return cls(tuple(int(raw[str(v)]) for v in range(n)))
        except KeyError as exc:
            raise DomainError(f"labeling is missing vertex {exc.args[0]}") from None


def canonical_scope_note(family: str, n: int) -> str | None:
    if family == "cycle" and n % 2 == 0:
        return "identity labeling is valid, though the odd-cycle construction only covers odd n"
    return None


def canonical_initial_labeling(family: str, n: int) -> Labeling:
    """The standard f_0 for each family.

    Paths and cycles get 1..n. Wheels get hub 1 and rim p_1..p_n. Hypercubes
    split consecutive primes by parity class: the even-weight ids take
    p_1..p_{2^(n-1)} and the odd-weight ids the next block, both in
    ascending id order. Complete graphs get 1 followed by p_1..p_{n-1}.
    """
    g = build_family(family, n)
    if family in ("path", "cycle"):
        return Labeling(tuple(range(1, n + 1)))
    if family == "wheel":
        return Labeling((1,) + tuple(nth_prime(i) for i in range(1, n + 1)))
    if family == "hypercube":
        return bipartite_prime_labeling(g, scheme="block")
    return Labeling((1,) + tuple(nth_prime(i) for i in range(1, n)))


def bipartite_prime_labeling(g: Graph, scheme: str = "interleaved") -> Labeling:
    """Disjoint prime sets on the two sides of a bipartite graph.

    ``interleaved`` gives part0 the odd-indexed primes p_1, p_3, ... and part1
    the even-indexed ones. ``block`` gives part0 the first |part0| primes and
    part1 the following ones.
    """
    parts = bipartition_of(g)
    if parts is None:
        raise NotBipartiteError(find_odd_cycle(g))
    part0, part1 = sorted(parts.part0), sorted(parts.part1)
    labels = [0] * g.n
    if scheme == "interleaved":
        for i, v in enumerate(part0):
            labels[v] = nth_prime(2 * i + 1)
        for i, v in enumerate(part1):
            labels[v] = nth_prime(2 * i + 2)
    elif scheme == "block":
        for i, v in enumerate(part0 + part1):
            labels[v] = nth_prime(i + 1)
    else:
        raise ParameterError(f"unknown scheme {scheme!r}")
    return Labeling(tuple(labels))


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    violations: tuple[tuple[tuple[int, int], int], ...]
    injective: bool
    duplicate: tuple[int, int] | None


def _check_total(g: Graph, f) -> tuple[int, ...]:
    values = tuple(f)
    if len(values) != g.n:
        raise DomainError(f"labeling covers {len(values)} vertices, graph has {g.n}")
    return values


def verify_coprime(g: Graph, f) -> VerifyReport:
    values = _check_total(g, f)
    first_seen: dict[int, int] = {}
    duplicate = None
    for v, x in enumerate(values):
        if x in first_seen:
            duplicate = (first_seen[x], v)
            break
        first_seen[x] = v
    violations = []
    for u, v in g.edges:
        d = math.gcd(values[u], values[v])
        if d != 1:
            violations.append(((u, v), d))
    return VerifyReport(not violations and duplicate is None, tuple(violations), duplicate is None, duplicate)


def verify_prime_labeling(g: Graph, f) -> bool:
    values = tuple(f)
    if len(values) != g.n or sorted(values) != list(range(1, g.n + 1)):
        return False
    return verify_coprime(g, values).ok


# -- solver -----------------------------------------------------------------

@dataclass(frozen=True)
class SolveResult:
    status: str  # "feasible", "infeasible" or "timeout"
    labeling: Labeling | None
    nodes_explored: int
    k: int

    def to_json(self) -> dict:
        out = {"status": self.status, "nodes_explored": self.nodes_explored, "k": self.k}
        if self.labeling is not None:
            out.update(self.labeling.to_json())
        return out


class _Timeout(Exception):
    pass


def _radical(x: int) -> int:
    r = 1
    for p, _ in factorize(x):
        r *= p
    return r


def solve_coprime_labeling(
    g: Graph,
    k: int,
    node_limit: int | None = None,
    time_limit: float | None = None,
) -> SolveResult:
    """Backtracking search for an injective labeling into {1..k} coprime on edges.

    Vertices are taken by (degree desc, id asc) and labels ascending. Two
    unused labels with the same radical behave identically under every gcd
    test, so only the first of each radical class is tried at a given level.
    """
    if k < g.n:
        raise ParameterError(f"label budget k={k} is below |V|={g.n}")
    order = sorted(g.vertices(), key=lambda v: (-g.degree(v), v))
    radical = [0] + [_radical(x) for x in range(1, k + 1)]
    labels = [0] * g.n
    used = [False] * (k + 1)
    nodes = 0
    deadline = None if time_limit is None else time.monotonic() + time_limit

    def search(depth: int) -> bool:
        nonlocal nodes
        if depth == len(order):
            return True
        nodes += 1
        if node_limit is not None and nodes > node_limit:
            raise _Timeout
        if deadline is not None and nodes % 1024 == 0 and time.monotonic() > deadline:
            raise _Timeout
        v = order[depth]
        fixed = [labels[w] for w in g.neighbors(v) if labels[w]]
        tried = set()
        for x in range(1, k + 1):
            if used[x] or radical[x] in tried:
                continue
            if any(math.gcd(x, y) != 1 for y in fixed):
                continue
            tried.add(radical[x])
            labels[v], used[x] = x, True
            if search(depth + 1):
                return True
            labels[v], used[x] = 0, False
        return False

    try:
        found = search(0)
    except _Timeout:
        return SolveResult("timeout", None, nodes, k)
    if found:
        return SolveResult("feasible", Labeling(tuple(labels)), nodes, k)
    return SolveResult("infeasible", None, nodes, k)
