"""Random instances with planted structure.

Every generator is a pure function of its :class:`GenSpec`; the witness it
returns (cover, deletion set, apex, parent array) can be re-verified with the
subgraph module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..core import Graph, Instance, SteinerError, norm_edge
from ..subgraph import find_embedding


@dataclass(frozen=True)
class PlantedCover:
    k: int


@dataclass(frozen=True)
class Planted2DS2:
    pass


@dataclass(frozen=True)
class Fan:
    pass


@dataclass(frozen=True)
class CyclePathUnion:
    pass


@dataclass(frozen=True)
class HSubgraphFree:
    pattern: object
    max_repairs: int = 10_000


@dataclass(frozen=True)
class TreeDepth3:
    pass


Kind = PlantedCover | Planted2DS2 | Fan | CyclePathUnion | HSubgraphFree | TreeDepth3


@dataclass(frozen=True)
class GenSpec:
    kind: Kind
    n: int
    edge_prob: float = 0.3
    pair_count: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need at least one vertex")
        if not 0.0 <= self.edge_prob <= 1.0:
            raise ValueError("edge_prob must lie in [0, 1]")
        if self.pair_count < 0:
            raise ValueError("pair_count must be non-negative")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass(frozen=True)
class Generated:
    instance: Instance
    witness: dict = field(default_factory=dict)


class RepairFailed(SteinerError):
    pass


def _pairs(rng: random.Random, g: Graph, count: int) -> list[tuple[int, int]]:
    """Pairs inside one component where possible, so most instances are feasible."""
    comps = [c for c in g.components() if len(c) > 1]
    out = []
    for _ in range(count):
        if comps:
            comp = rng.choice(comps)
            s, t = rng.sample(comp, 2)
        elif g.n > 1:
            s, t = rng.sample(range(g.n), 2)
        else:
            break
        out.append((s, t))
    return out


def _planted_cover(rng, spec, k):
    n = spec.n
    if not 0 <= k <= n:
        raise ValueError("cover size must lie in [0, n]")
    cover = sorted(rng.sample(range(n), k))
    cs = set(cover)
    edges = set()
    for i, a in enumerate(cover):
        for b in cover[i + 1:]:
            if rng.random() < spec.edge_prob:
                edges.add(norm_edge(a, b))
    for x in range(n):
        if x in cs or not cover:
            continue
        nbrs = [c for c in cover if rng.random() < spec.edge_prob]
        if not nbrs:
            nbrs = [rng.choice(cover)]
        edges.update(norm_edge(x, c) for c in nbrs)
    return edges, {"cover": tuple(cover)}


def _planted_2ds2(rng, spec):
    n = spec.n
    if n < 2:
        raise ValueError("need at least two vertices")
    hubs = tuple(sorted(rng.sample(range(n), 2)))
    rest = [x for x in range(n) if x not in hubs]
    rng.shuffle(rest)
    edges = set()
    if rng.random() < spec.edge_prob:
        edges.add(hubs)
    i = 0
    while i < len(rest):
        size = 2 if i + 1 < len(rest) and rng.random() < 0.5 else 1
        part = rest[i:i + size]
        i += size
        if size == 2:
            edges.add(norm_edge(*part))
        for x in part:
            for h in hubs:
                if rng.random() < max(spec.edge_prob, 0.5):
                    edges.add(norm_edge(x, h))
        if not any(norm_edge(x, h) in edges for x in part for h in hubs):
            edges.add(norm_edge(part[0], rng.choice(hubs)))
    return edges, {"deletion_set": hubs}


def _fan(rng, spec):
    n = spec.n
    apex = rng.randrange(n)
    path = [x for x in range(n) if x != apex]
    rng.shuffle(path)
    edges = set()
    for a, b in zip(path, path[1:]):
        if rng.random() < 0.9:
            edges.add(norm_edge(a, b))
    for x in path:
        if rng.random() < max(spec.edge_prob, 0.2):
            edges.add(norm_edge(apex, x))
    return edges, {"apex": apex}


def _cycle_path_union(rng, spec):
    order = list(range(spec.n))
    rng.shuffle(order)
    edges = set()
    parts = []
    i = 0
    while i < len(order):
        size = rng.randint(1, max(1, min(8, len(order) - i)))
        piece = order[i:i + size]
        i += size
        closed = size >= 3 and rng.random() < 0.5
        edges.update(norm_edge(a, b) for a, b in zip(piece, piece[1:]))
        if closed:
            edges.add(norm_edge(piece[0], piece[-1]))
        parts.append(("cycle" if closed else "path", tuple(piece)))
    return edges, {"parts": tuple(parts)}


def _h_free(rng, spec, kind: HSubgraphFree):
    n = spec.n
    edges = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < spec.edge_prob}
    repairs = 0
    while True:
        emb = find_embedding(Graph.from_edges(n, edges), kind.pattern)
        if emb is None:
            return edges, {"pattern": kind.pattern, "repairs": repairs}
        if repairs >= kind.max_repairs:
            raise RepairFailed(f"pattern still present after {repairs} repairs")
        edges.discard(rng.choice(sorted(emb.edges)))
        repairs += 1


def _tree_depth3(rng, spec):
    n = spec.n
    parent = [-1] * n
    level = [0] * n
    order = list(range(n))
    rng.shuffle(order)
    placed = []
    for x in order:
        opts = [y for y in placed if level[y] < 2]
        if opts and rng.random() < 0.85:
            p = rng.choice(opts)
            parent[x], level[x] = p, level[p] + 1
        placed.append(x)
    edges = set()
    for x in range(n):
        anc = parent[x]
        first = True
        while anc != -1:
            if first or rng.random() < spec.edge_prob:
                edges.add(norm_edge(x, anc))
            first = False
            anc = parent[anc]
    return edges, {"parent": tuple(parent)}


def generate(spec: GenSpec) -> Generated:
    rng = random.Random(spec.seed)
    kind = spec.kind
    if isinstance(kind, PlantedCover):
        edges, wit = _planted_cover(rng, spec, kind.k)
    elif isinstance(kind, Planted2DS2):
        edges, wit = _planted_2ds2(rng, spec)
    elif isinstance(kind, Fan):
        edges, wit = _fan(rng, spec)
    elif isinstance(kind, CyclePathUnion):
        edges, wit = _cycle_path_union(rng, spec)
    elif isinstance(kind, HSubgraphFree):
        edges, wit = _h_free(rng, spec, kind)
    elif isinstance(kind, TreeDepth3):
        edges, wit = _tree_depth3(rng, spec)
    else:
        raise TypeError(f"unknown generator kind {kind!r}")
    g = Graph.from_edges(spec.n, sorted(edges))
    return Generated(Instance.make(g, _pairs(rng, g, spec.pair_count)), wit)
