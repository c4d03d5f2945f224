"""Forbidden-pattern detection and structural parameters."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import networkx as nx

from .core import Edge, Graph, GuardExceeded, norm_edge

PATTERN_VERTEX_LIMIT = 12


# --- patterns -------------------------------------------------------------

@dataclass(frozen=True)
class Path:
    a: int

    def __post_init__(self):
        if self.a < 1:
            raise ValueError("path needs at least one vertex")


@dataclass(frozen=True)
class Star13:
    pass


@dataclass(frozen=True)
class SubdividedClaw:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if min(self.a, self.b, self.c) < 1:
            raise ValueError("claw legs must have length >= 1")


@dataclass(frozen=True)
class DisjointUnion:
    parts: tuple

    def __init__(self, parts):
        object.__setattr__(self, "parts", tuple(parts))
        if not self.parts:
            raise ValueError("empty disjoint union")


@dataclass(frozen=True)
class PlusP2:
    inner: object
    s: int

    def __post_init__(self):
        if self.s < 0:
            raise ValueError("negative P2 count")


Pattern = Path | Star13 | SubdividedClaw | DisjointUnion | PlusP2

K13 = Star13()
TWO_K13 = DisjointUnion([K13, K13])
TWO_K13_P3 = DisjointUnion([K13, K13, Path(3)])
TWO_P4_P3 = DisjointUnion([Path(4), Path(4), Path(3)])
S114 = SubdividedClaw(1, 1, 4)


def _atoms(pat) -> list:
    """Flatten a pattern into connected atoms (P2 copies from PlusP2 included)."""
    if isinstance(pat, DisjointUnion):
        return [a for p in pat.parts for a in _atoms(p)]
    if isinstance(pat, PlusP2):
        return _atoms(pat.inner) + [Path(2)] * pat.s
    return [pat]


def _atom_edges(atom) -> tuple[int, list[Edge]]:
    if isinstance(atom, Path):
        return atom.a, [(i, i + 1) for i in range(atom.a - 1)]
    if isinstance(atom, Star13):
        atom = SubdividedClaw(1, 1, 1)
    if isinstance(atom, SubdividedClaw):
        edges, nxt = [], 1
        for leg in (atom.a, atom.b, atom.c):
            prev = 0
            for _ in range(leg):
                edges.append((prev, nxt))
                prev = nxt
                nxt += 1
        return nxt, edges
    raise TypeError(f"not a pattern atom: {atom!r}")


def split_pattern(pat) -> tuple[list, int]:
    """Separate a pattern into its non-P2 atoms and the number of P2 atoms."""
    atoms = _atoms(pat)
    core = [a for a in atoms if a != Path(2)]
    return core, len(atoms) - len(core)


def pattern_graph(pat) -> tuple[Graph, list[int]]:
    """Pattern as a graph, atoms laid out consecutively; also returns atom start offsets."""
    edges, starts, off = [], [], 0
    for atom in _atoms(pat):
        k, es = _atom_edges(atom)
        starts.append(off)
        edges.extend((u + off, v + off) for u, v in es)
        off += k
    return Graph.from_edges(off, edges), starts


def pattern_size(pat) -> int:
    return pattern_graph(pat)[0].n


@dataclass(frozen=True)
class Embedding:
    """``vertices[i]`` is the host image of pattern vertex ``i`` (atoms laid out as in ``pattern_graph``)."""

    vertices: tuple[int, ...]
    edges: tuple[Edge, ...]

    @property
    def image(self) -> frozenset[int]:
        return frozenset(self.vertices)


# --- embedding search ------------------------------------------------------

def _twin_representatives(g: Graph, keep: int) -> list[bool]:
    """Mark at most ``keep`` vertices of every false-twin class (same open neighbourhood)."""
    count: dict[tuple[int, ...], int] = {}
    allowed = [False] * g.n
    for v in range(g.n):
        key = g.adj[v]
        c = count.get(key, 0)
        if c < keep:
            allowed[v] = True
        count[key] = c + 1
    return allowed


class _Matcher:
    """Backtracking search for a (not necessarily induced) subgraph."""

    def __init__(self, host: Graph, atoms: list):
        self.host = host
        self.atoms = atoms
        edges, starts, off = [], [], 0
        for atom in atoms:
            k, es = _atom_edges(atom)
            starts.append(off)
            edges.extend((u + off, v + off) for u, v in es)
            off += k
        self.k = off
        self.pat = Graph.from_edges(off, edges)
        self.allowed = _twin_representatives(host, max(off, 1))
        self.order, self.before, self.roots = self._plan(starts)

    def _plan(self, starts):
        pat = self.pat
        order, roots = [], {}
        bounds = list(zip(starts, starts[1:] + [self.k]))
        prev_root = None
        prev_atom = None
        for atom, (lo, hi) in zip(self.atoms, bounds):
            verts = range(lo, hi)
            root = max(verts, key=lambda x: (pat.degree(x), -x))
            seen = {root}
            queue = [root]
            for x in queue:
                for y in pat.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            order.extend(queue)
            twin_root = any(pat.adj[root] == pat.adj[y] for y in verts if y != root)
            roots[root] = prev_root if (atom == prev_atom and prev_root is not None and not twin_root) else None
            prev_root, prev_atom = root, atom
        pos = {x: i for i, x in enumerate(order)}
        before = []
        for x in order:
            mapped_nbrs = [y for y in pat.adj[x] if pos[y] < pos[x]]
            twins = [y for y in range(self.k)
                     if y != x and pos[y] < pos[x] and pat.adj[y] == pat.adj[x]]
            before.append((x, mapped_nbrs, twins))
        return order, before, roots

    def search(self) -> Iterator[tuple[int, ...]]:
        host, pat = self.host, self.pat
        img = [-1] * self.k
        used = [False] * host.n
        deg_ok = {}
        for x in range(self.k):
            d = pat.degree(x)
            deg_ok[x] = [host.degree(v) >= d and self.allowed[v] for v in range(host.n)]

        def rec(i):
            if i == len(self.before):
                yield tuple(img)
                return
            x, nbrs, twins = self.before[i]
            ok = deg_ok[x]
            if nbrs:
                anchor = img[nbrs[0]]
                cands = host.adj[anchor]
            else:
                cands = range(host.n)
            lo = max((img[t] for t in twins), default=-1)
            r = self.roots.get(x)
            if r is not None:
                lo = max(lo, img[r])
            for v in cands:
                if v <= lo or used[v] or not ok[v]:
                    continue
                if any(not host.has_edge(v, img[y]) for y in nbrs[1:]):
                    continue
                img[x] = v
                used[v] = True
                yield from rec(i + 1)
                used[v] = False
            img[x] = -1

        yield from rec(0)


def _matching_in(host: Graph, banned: frozenset[int], s: int) -> list[Edge] | None:
    if s == 0:
        return []
    taken = set(banned)
    greedy = []
    for u, v in host.edges:
        if u not in taken and v not in taken:
            taken.update((u, v))
            greedy.append((u, v))
            if len(greedy) == s:
                return greedy
    nxg = nx.Graph()
    nxg.add_edges_from(e for e in host.edges if e[0] not in banned and e[1] not in banned)
    mate = nx.max_weight_matching(nxg, maxcardinality=True)
    if len(mate) < s:
        return None
    return sorted(norm_edge(u, v) for u, v in mate)[:s]


def find_embedding(g: Graph, pat, limit: int = PATTERN_VERTEX_LIMIT) -> Embedding | None:
    """An embedding of ``pat`` as a subgraph of ``g``, or ``None``.

    P2 atoms are found as a maximum matching outside the image of the rest.
    """
    core, s = split_pattern(pat)
    pg, _ = pattern_graph(DisjointUnion(core)) if core else (Graph.from_edges(0, []), [])
    if pg.n > limit:
        raise GuardExceeded("pattern vertices", limit, pg.n)
    if pg.n + 2 * s > g.n:
        return None
    # core atoms first, P2 copies after, matching pattern_graph(core + sP2) layout
    full, _ = pattern_graph(DisjointUnion(core + [Path(2)] * s)) if (core or s) else (pg, [])
    if core:
        gen = _Matcher(g, core).search()
    else:
        gen = iter([()])
    for img in gen:
        match = _matching_in(g, frozenset(img), s)
        if match is None:
            continue
        verts = tuple(img) + tuple(v for e in match for v in e)
        edges = tuple(norm_edge(verts[a], verts[b]) for a, b in full.edges)
        return Embedding(verts, edges)
    return None


def is_subgraph_free(g: Graph, pat, limit: int = PATTERN_VERTEX_LIMIT) -> bool:
    return find_embedding(g, pat, limit) is None


# --- paths ------------------------------------------------------------------

def longest_path(g: Graph, k: int) -> list[int]:
    """A longest path (vertex list), stopping early once ``k`` vertices are reached."""
    if k > 10:
        raise GuardExceeded("longest path bound", 10, k)
    if g.n == 0:
        return []
    allowed = _twin_representatives(g, (k + 1) // 2 + 1)
    best: list[int] = [0]
    onpath = [False] * g.n
    path: list[int] = []

    def dfs(v) -> bool:
        nonlocal best
        path.append(v)
        onpath[v] = True
        if len(path) > len(best):
            best = list(path)
        done = len(path) >= k
        if not done:
            for w in g.adj[v]:
                if not onpath[w] and allowed[w] and dfs(w):
                    done = True
                    break
        onpath[v] = False
        path.pop()
        return done

    for v in range(g.n):
        if allowed[v] and g.adj[v] and dfs(v):
            break
    return best[:k]


def longest_path_up_to(g: Graph, k: int) -> int:
    """Vertices on a longest path, capped at ``k``."""
    return len(longest_path(g, k))


# --- blocks -------------------------------------------------------------------

@dataclass(frozen=True)
class BlockDecomposition:
    blocks: tuple[tuple[int, ...], ...]
    block_edges: tuple[tuple[Edge, ...], ...]
    cut_vertices: frozenset[int]

    def tree(self) -> dict:
        """Block-cut tree: nodes ``('B', i)`` and ``('C', v)``."""
        adj: dict = {}
        for i, blk in enumerate(self.blocks):
            adj.setdefault(("B", i), [])
            for v in blk:
                if v in self.cut_vertices:
                    adj[("B", i)].append(("C", v))
                    adj.setdefault(("C", v), []).append(("B", i))
        return adj


def blocks(g: Graph) -> BlockDecomposition:
    """Biconnected components by an iterative low-link search; bridges give 2-vertex blocks."""
    n = g.n
    disc = [-1] * n
    low = [0] * n
    timer = 0
    found: list[list[Edge]] = []
    for root in range(n):
        if disc[root] != -1 or not g.adj[root]:
            continue
        disc[root] = low[root] = timer
        timer += 1
        estack: list[Edge] = []
        stack = [(root, -1, iter(g.adj[root]))]
        while stack:
            v, parent, it = stack[-1]
            advanced = False
            for w in it:
                if w == parent:
                    continue
                if disc[w] == -1:
                    estack.append((v, w))
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, v, iter(g.adj[w])))
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    estack.append((v, w))
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if parent != -1:
                low[parent] = min(low[parent], low[v])
                if low[v] >= disc[parent]:
                    comp = []
                    while True:
                        e = estack.pop()
                        comp.append(norm_edge(*e))
                        if e == (parent, v):
                            break
                    found.append(comp)
    blks = []
    for comp in found:
        verts = sorted({x for e in comp for x in e})
        blks.append((tuple(verts), tuple(sorted(comp))))
    blks.sort()
    count: dict[int, int] = {}
    for verts, _ in blks:
        for v in verts:
            count[v] = count.get(v, 0) + 1
    return BlockDecomposition(
        tuple(b for b, _ in blks),
        tuple(e for _, e in blks),
        frozenset(v for v, c in count.items() if c >= 2),
    )


@dataclass(frozen=True)
class TwoPath:
    vertices: tuple[int, ...]
    end_degrees: tuple[int, int]

    @property
    def maximal(self) -> bool:
        return self.end_degrees[0] != 2 and self.end_degrees[1] != 2

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


def is_two_path(g: Graph, verts: Sequence[int]) -> bool:
    if len(verts) < 2 or len(set(verts)) != len(verts):
        return False
    if any(not g.has_edge(a, b) for a, b in zip(verts, verts[1:])):
        return False
    return all(g.degree(x) == 2 for x in verts[1:-1])


def maximal_two_paths(g: Graph) -> tuple[list[TwoPath], list[tuple[int, ...]]]:
    """Maximal 2-paths, plus closed degree-2 walks reported separately.

    The second list holds cycle components (all vertices of degree 2) and
    cycles hanging at a single vertex of degree != 2, starting at that vertex.
    """
    paths: list[TwoPath] = []
    cycles: list[tuple[int, ...]] = []
    seen_edges: set[Edge] = set()
    for s in range(g.n):
        if g.degree(s) == 2 or g.degree(s) == 0:
            continue
        for first in g.adj[s]:
            if norm_edge(s, first) in seen_edges:
                continue
            walk = [s, first]
            while g.degree(walk[-1]) == 2 and walk[-1] != s:
                a, b = g.adj[walk[-1]]
                walk.append(b if a == walk[-2] else a)
            for x, y in zip(walk, walk[1:]):
                seen_edges.add(norm_edge(x, y))
            if walk[-1] == s:
                cycles.append(tuple(walk[:-1]))
                continue
            if walk[-1] < walk[0] or (walk[-1] == walk[0]):
                walk.reverse()
            paths.append(TwoPath(tuple(walk), (g.degree(walk[0]), g.degree(walk[-1]))))
    for comp in g.components():
        if len(comp) >= 3 and all(g.degree(v) == 2 for v in comp):
            cyc = [comp[0]]
            prev = -1
            while True:
                a, b = g.adj[cyc[-1]]
                nxt = a if a != prev and a != cyc[-1] else b
                if len(cyc) > 1 and nxt == cyc[0]:
                    break
                if nxt == cyc[0] and len(cyc) == 1:
                    nxt = b
                prev = cyc[-1]
                if nxt == cyc[0]:
                    break
                cyc.append(nxt)
            cycles.append(tuple(cyc))
    paths.sort(key=lambda p: p.vertices)
    return paths, cycles


def hub_two_paths(g: Graph) -> list[TwoPath]:
    """Maximal 2-paths whose two ends both have degree more than 2."""
    paths, _ = maximal_two_paths(g)
    return [p for p in paths if p.end_degrees[0] > 2 and p.end_degrees[1] > 2]


# --- covers and deletion sets ------------------------------------------------

VC_GUARD = 25


def vertex_cover_at_most(g: Graph, k: int) -> tuple[int, ...] | None:
    """A vertex cover of size at most ``k`` by bounded search, or ``None``."""
    if k > VC_GUARD:
        raise GuardExceeded("vertex cover bound", VC_GUARD, k)
    adj = {v: set(g.adj[v]) for v in range(g.n) if g.adj[v]}

    def remove(a, v):
        for w in a.pop(v):
            a[w].discard(v)
            if not a[w]:
                del a[w]

    def rec(a, k) -> list[int] | None:
        taken = []
        while True:
            if not a:
                return taken
            leaf = next((v for v, nb in a.items() if len(nb) == 1), None)
            if leaf is None:
                break
            if k == 0:
                return None
            (w,) = a[leaf]
            remove(a, w)
            taken.append(w)
            k -= 1
        edges = sum(len(nb) for nb in a.values()) // 2
        v = max(a, key=lambda x: (len(a[x]), -x))
        if k == 0 or edges > k * len(a[v]):
            return None
        b = {x: set(nb) for x, nb in a.items()}
        remove(b, v)
        sub = rec(b, k - 1)
        if sub is not None:
            return taken + [v] + sub
        nbrs = sorted(a[v])
        if len(nbrs) <= k:
            b = {x: set(nb) for x, nb in a.items()}
            for w in nbrs:
                if w in b:
                    remove(b, w)
            sub = rec(b, k - len(nbrs))
            if sub is not None:
                return taken + nbrs + sub
        return None

    res = rec(adj, k)
    return None if res is None else tuple(sorted(res))


def min_vertex_cover(g: Graph, limit: int = VC_GUARD) -> tuple[int, ...] | None:
    """A minimum vertex cover if its size is at most ``limit``."""
    for k in range(0, min(limit, VC_GUARD) + 1):
        c = vertex_cover_at_most(g, k)
        if c is not None:
            return c
    return None


def is_c_deletion_set(g: Graph, removed, c: int) -> bool:
    gone = set(removed)
    seen = set(gone)
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        stack, size = [s], 1
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
                    size += 1
                    if size > c:
                        return False
    return True


def c_deletion_set(g: Graph, c: int, d: int) -> tuple[int, ...] | None:
    """Smallest (then lexicographically first) set of at most ``d`` vertices leaving components of size <= ``c``."""
    if d > 3:
        raise GuardExceeded("deletion set size", 3, d)
    for size in range(d + 1):
        if g.n - size > (size + 1) * c * max(1, g.n) and size < d:
            continue
        for combo in itertools.combinations(range(g.n), size):
            if is_c_deletion_set(g, combo, c):
                return combo
    return None
