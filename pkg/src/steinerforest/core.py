"""Instance model, certificates and elementary graph edits.

Vertices are dense integers ``0..n-1``.  Every edit that renumbers vertices
returns a vertex map (old id -> new id, or ``None`` when the vertex is gone),
and :func:`edge_preimages` recovers, for each edge of the edited graph, one
edge of the original graph it came from.  Solvers use the pair to lift
certificates back into the caller's id space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Edge = tuple[int, int]
Pair = tuple[int, int]
VertexMap = list  # list[int | None], indexed by old vertex id


class SteinerError(Exception):
    """Base class for errors raised by this package."""


class GuardExceeded(SteinerError):
    """A configured size guard was exceeded; the input is not wrong, only too big."""

    def __init__(self, guard: str, limit, actual):
        self.guard = guard
        self.limit = limit
        self.actual = actual
        super().__init__(f"{guard}: {actual} exceeds limit {limit}")


class PreconditionError(SteinerError):
    """The input violates the structural precondition of the called solver."""


def norm_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class DisjointSet:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Build through :meth:`from_edges`, which normalises and validates.
    """

    n: int
    edges: tuple[Edge, ...]
    adj: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], *, merge: bool = False) -> "Graph":
        """Build a graph; with ``merge`` loops are dropped and parallel edges merged."""
        if n < 0:
            raise ValueError("negative vertex count")
        seen: set[Edge] = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                if merge:
                    continue
                raise ValueError(f"loop at vertex {u}")
            key = norm_edge(u, v)
            if key in seen and not merge:
                raise ValueError(f"duplicate edge {key[0]}-{key[1]}")
            seen.add(key)
        ordered = tuple(sorted(seen))
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in ordered:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return cls(n, ordered, tuple(tuple(sorted(x)) for x in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return norm_edge(u, v) in self.edge_set

    @property
    def edge_set(self) -> frozenset[Edge]:
        cached = self.__dict__.get("_edge_set")
        if cached is None:
            cached = frozenset(self.edges)
            object.__setattr__(self, "_edge_set", cached)
        return cached

    def components(self) -> list[list[int]]:
        """Connected components as sorted vertex lists, ordered by smallest vertex."""
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            stack, comp = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        stack.append(y)
                        comp.append(y)
            comps.append(sorted(comp))
        return comps

    def component_index(self) -> list[int]:
        idx = [0] * self.n
        for i, comp in enumerate(self.components()):
            for v in comp:
                idx[v] = i
        return idx

    def is_forest(self) -> bool:
        ds = DisjointSet(self.n)
        return all(ds.union(u, v) for u, v in self.edges)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", VertexMap]:
        keep = sorted(set(vertices))
        vmap: VertexMap = [None] * self.n
        for i, v in enumerate(keep):
            vmap[v] = i
        return quotient(self, vmap)[0], vmap


@dataclass(frozen=True)
class Instance:
    """A graph together with terminal pairs.

    Pairs are stored normalised (``s < t``), sorted and deduplicated.  Use
    :meth:`make` when pairs may contain ``s == t``; such pairs are dropped.
    """

    graph: Graph
    pairs: tuple[Pair, ...]

    def __post_init__(self):
        n = self.graph.n
        for s, t in self.pairs:
            if s == t:
                raise ValueError(f"pair with equal endpoints {s}")
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"pair {s}-{t} out of range for n={n}")

    @classmethod
    def make(cls, graph: Graph, pairs: Iterable[Sequence[int]]) -> "Instance":
        cleaned = {norm_edge(int(s), int(t)) for s, t in pairs if s != t}
        return cls(graph, tuple(sorted(cleaned)))

    @property
    def terminals(self) -> list[int]:
        return sorted({v for p in self.pairs for v in p})

    def key(self) -> tuple:
        """Hashable canonical form (labelled, not up to isomorphism)."""
        return (self.graph.n, self.graph.edges, self.pairs)

    def remap(self, graph: Graph, vmap: VertexMap) -> "Instance":
        """Rewrite pairs through ``vmap`` onto ``graph``; pairs that collapse are dropped.

        A pair with an endpoint mapped to ``None`` raises ``ValueError``.
        """
        out = []
        for s, t in self.pairs:
            a, b = vmap[s], vmap[t]
            if a is None or b is None:
                raise ValueError(f"pair {s}-{t} loses an endpoint")
            out.append((a, b))
        return Instance.make(graph, out)


@dataclass(frozen=True)
class ForestCertificate:
    edges: tuple[Edge, ...]

    @classmethod
    def of(cls, edges: Iterable[Sequence[int]]) -> "ForestCertificate":
        return cls(tuple(sorted({norm_edge(int(e[0]), int(e[1])) for e in edges})))

    @property
    def size(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class SolveResult:
    """``value`` is ``None`` for an infeasible instance."""

    value: int | None
    certificate: ForestCertificate | None = None

    @property
    def feasible(self) -> bool:
        return self.value is not None

    @property
    def cost(self) -> float:
        return math.inf if self.value is None else self.value

    @classmethod
    def from_edges(cls, edges: Iterable[Sequence[int]]) -> "SolveResult":
        cert = ForestCertificate.of(edges)
        return cls(cert.size, cert)

    def sort_key(self) -> tuple:
        edges = self.certificate.edges if self.certificate else ()
        return (self.cost, edges)


INFEASIBLE = SolveResult(None, None)


def best_of(results: Iterable[SolveResult]) -> SolveResult:
    """Minimum value; ties go to the lexicographically smallest certificate."""
    best = INFEASIBLE
    for r in results:
        if r.feasible and (not best.feasible or r.sort_key() < best.sort_key()):
            best = r
    return best


@dataclass(frozen=True)
class SchoolPartition:
    """``schools[:terminal_count]`` are the pair-closure classes, the rest singletons."""

    schools: tuple[tuple[int, ...], ...]
    terminal_count: int

    @property
    def h(self) -> int:
        return len(self.schools)


def validate_solution(inst: Instance, cert: ForestCertificate) -> bool:
    g = inst.graph
    for u, v in cert.edges:
        if not (0 <= u < g.n and 0 <= v < g.n) or not g.has_edge(u, v):
            raise ValueError(f"certificate edge {u}-{v} is not an edge of the graph")
    ds = DisjointSet(g.n)
    for u, v in cert.edges:
        if not ds.union(u, v):
            return False
    return all(ds.find(s) == ds.find(t) for s, t in inst.pairs)


def schools_of(inst: Instance, ground: Iterable[int] | None = None) -> SchoolPartition:
    """Group terminals into the transitive closure classes of the pairs.

    Vertices of ``ground`` (default: all vertices) outside every class follow
    as singleton schools in increasing order.
    """
    ds = DisjointSet(inst.graph.n)
    for s, t in inst.pairs:
        ds.union(s, t)
    classes: dict[int, list[int]] = {}
    for v in inst.terminals:
        classes.setdefault(ds.find(v), []).append(v)
    terminal_schools = sorted(tuple(sorted(c)) for c in classes.values())
    used = {v for c in terminal_schools for v in c}
    ground_set = range(inst.graph.n) if ground is None else sorted(set(ground))
    singles = [(v,) for v in ground_set if v not in used]
    return SchoolPartition(tuple(terminal_schools) + tuple(singles), len(terminal_schools))


def quotient(g: Graph, vmap: VertexMap) -> tuple[Graph, dict[Edge, Edge]]:
    """Image of ``g`` under a vertex map; loops dropped, parallel edges merged.

    Returns the new graph and, per new edge, the smallest original edge mapping
    onto it.  New vertex count is ``max(image) + 1``.
    """
    images = [x for x in vmap if x is not None]
    n_new = max(images) + 1 if images else 0
    pre: dict[Edge, Edge] = {}
    for u, v in g.edges:
        a, b = vmap[u], vmap[v]
        if a is None or b is None or a == b:
            continue
        key = norm_edge(a, b)
        if key not in pre:
            pre[key] = (u, v)
    return Graph.from_edges(n_new, pre.keys()), pre


def edge_preimages(g: Graph, vmap: VertexMap) -> dict[Edge, Edge]:
    return quotient(g, vmap)[1]


def merge_map(n: int, groups: Iterable[Iterable[int]], removed: Iterable[int] = ()) -> VertexMap:
    """Dense vertex map merging each group into one vertex and dropping ``removed``.

    New ids follow the order of the smallest old id of each class.
    """
    rep = list(range(n))
    for grp in groups:
        grp = sorted(set(grp))
        for v in grp:
            rep[v] = grp[0]
    gone = set(removed)
    vmap: VertexMap = [None] * n
    next_id = 0
    assigned: dict[int, int] = {}
    for v in range(n):
        if v in gone:
            continue
        r = rep[v]
        if r in gone:
            raise ValueError(f"merged vertex {v} has a removed representative")
        if r not in assigned:
            assigned[r] = next_id
            next_id += 1
        vmap[v] = assigned[r]
    return vmap


def contract_edge(g: Graph, e: Sequence[int]) -> tuple[Graph, VertexMap]:
    u, v = norm_edge(e[0], e[1])
    if not g.has_edge(u, v):
        raise ValueError(f"{u}-{v} is not an edge")
    vmap = merge_map(g.n, [(u, v)])
    return quotient(g, vmap)[0], vmap


def delete_edges(g: Graph, edges: Iterable[Sequence[int]], cleanup: bool = False):
    """Remove edges; with ``cleanup`` isolated vertices go too and ``(graph, vmap)`` is returned."""
    gone = set()
    for e in edges:
        key = norm_edge(e[0], e[1])
        if not g.has_edge(*key):
            raise ValueError(f"{key[0]}-{key[1]} is not an edge")
        gone.add(key)
    h = Graph.from_edges(g.n, [e for e in g.edges if e not in gone])
    if not cleanup:
        return h
    isolated = [v for v in range(h.n) if not h.adj[v]]
    return delete_vertices(h, isolated)


def delete_vertices(g: Graph, vertices: Iterable[int]) -> tuple[Graph, VertexMap]:
    gone = set(vertices)
    for v in gone:
        if not 0 <= v < g.n:
            raise ValueError(f"vertex {v} out of range")
    keep = [v for v in range(g.n) if v not in gone]
    vmap: VertexMap = [None] * g.n
    for i, v in enumerate(keep):
        vmap[v] = i
    h, _ = quotient(g, vmap)
    if h.n < len(keep):  # trailing isolated vertices
        h = Graph.from_edges(len(keep), h.edges)
    return h, vmap


def derive(inst: Instance, vmap: VertexMap, n_new: int | None = None) -> tuple[Instance, dict[Edge, Edge]]:
    """Apply a vertex map to a whole instance, returning it with edge preimages."""
    h, pre = quotient(inst.graph, vmap)
    images = [x for x in vmap if x is not None]
    want = n_new if n_new is not None else (max(images) + 1 if images else 0)
    if h.n < want:
        h = Graph.from_edges(want, h.edges)
    return inst.remap(h, vmap), pre


def lift(result: SolveResult, pre: dict[Edge, Edge], extra: Iterable[Edge] = (), weight: int = 0) -> SolveResult:
    """Map a derived certificate back and add ``extra`` edges counted by ``weight``."""
    if not result.feasible:
        return INFEASIBLE
    edges = [pre[e] for e in result.certificate.edges]
    edges.extend(extra)
    cert = ForestCertificate.of(edges)
    return SolveResult(result.value + weight, cert)


def spanning_forest(g: Graph, edges: Iterable[Edge]) -> list[Edge]:
    ds = DisjointSet(g.n)
    return [e for e in sorted(edges) if ds.union(*e)]


def terminal_lower_bound(inst: Instance) -> int:
    """|terminals| minus the number of pair classes: every forest needs that many edges."""
    return len(inst.terminals) - schools_of(inst, ground=()).terminal_count


def pairs_connected(inst: Instance) -> bool:
    idx = inst.graph.component_index()
    return all(idx[s] == idx[t] for s, t in inst.pairs)
