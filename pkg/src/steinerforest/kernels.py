"""Exact solvers for base classes and the block and 2-path reductions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

from .core import (
    INFEASIBLE,
    Edge,
    Graph,
    GuardExceeded,
    Instance,
    PreconditionError,
    SolveResult,
    best_of,
    merge_map,
    norm_edge,
    quotient,
    schools_of,
    terminal_lower_bound,
)
from .subgraph import TwoPath, blocks, hub_two_paths, is_two_path

Solver = Callable[[Instance], SolveResult]


# --- sub-instances -----------------------------------------------------------

def induced_instance(inst: Instance, vertices, pairs=None) -> tuple[Instance, list[int]]:
    """Instance induced on ``vertices``; returns it with the new -> old id list.

    ``pairs`` (old ids, default: pairs with both ends inside) become the new pairs.
    """
    keep = sorted(set(vertices))
    pos = {v: i for i, v in enumerate(keep)}
    edges = [(pos[u], pos[v]) for u, v in inst.graph.edges if u in pos and v in pos]
    if pairs is None:
        pairs = [p for p in inst.pairs if p[0] in pos and p[1] in pos]
    sub = Instance.make(Graph.from_edges(len(keep), edges), [(pos[s], pos[t]) for s, t in pairs])
    return sub, keep


def lift_back(res: SolveResult, back: Sequence[int]) -> SolveResult:
    if not res.feasible:
        return INFEASIBLE
    return SolveResult.from_edges(norm_edge(back[a], back[b]) for a, b in res.certificate.edges)


def combine(parts: list[SolveResult], extra: Sequence[Edge] = ()) -> SolveResult:
    """Union of vertex-disjoint partial solutions (all already in one id space)."""
    edges = list(extra)
    for r in parts:
        if not r.feasible:
            return INFEASIBLE
        edges.extend(r.certificate.edges)
    return SolveResult.from_edges(edges)


def by_components(inst: Instance, solver: Solver) -> SolveResult:
    """Solve every terminal-carrying component separately; a pair across components is infeasible."""
    g = inst.graph
    idx = g.component_index()
    if any(idx[s] != idx[t] for s, t in inst.pairs):
        return INFEASIBLE
    if not inst.pairs:
        return SolveResult.from_edges([])
    comps = g.components()
    used = sorted({idx[s] for s, _ in inst.pairs})
    if len(used) == 1 and len(comps[used[0]]) == g.n:
        return solver(inst)
    parts = []
    for c in used:
        sub, back = induced_instance(inst, comps[c])
        parts.append(lift_back(solver(sub), back))
    return combine(parts)


# --- forests and cycles --------------------------------------------------------

def sf_on_forest(inst: Instance) -> SolveResult:
    """Union of the unique tree paths of all pairs."""
    g = inst.graph
    if not g.is_forest():
        raise PreconditionError("graph is not a forest")
    parent = [-1] * g.n
    depth = [0] * g.n
    root = [-1] * g.n
    for r in range(g.n):
        if root[r] != -1:
            continue
        root[r] = r
        parent[r] = r
        stack = [r]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if root[y] == -1:
                    root[y] = r
                    parent[y] = x
                    depth[y] = depth[x] + 1
                    stack.append(y)
    edges: set[Edge] = set()
    for s, t in inst.pairs:
        if root[s] != root[t]:
            return INFEASIBLE
        while s != t:
            if depth[s] < depth[t]:
                s, t = t, s
            edges.add(norm_edge(s, parent[s]))
            s = parent[s]
    return SolveResult.from_edges(edges)


def _cycle_order(g: Graph, comp: list[int]) -> list[int]:
    order = [comp[0]]
    prev = -1
    while True:
        cur = order[-1]
        nxt = next((y for y in g.adj[cur] if y != prev), None)
        if nxt == order[0] or nxt is None:
            return order
        prev = cur
        order.append(nxt)


def _solve_cycle(inst: Instance) -> SolveResult:
    g = inst.graph
    order = _cycle_order(g, list(range(g.n)))
    cycle = [norm_edge(order[i], order[(i + 1) % len(order)]) for i in range(len(order))]
    results = []
    for e in cycle:
        h = Graph.from_edges(g.n, [x for x in g.edges if x != e])
        results.append(sf_on_forest(Instance(h, inst.pairs)))
    return best_of(results)


def sf_on_cycle_path_union(inst: Instance) -> SolveResult:
    """Disjoint union of paths and cycles: cycles try every single-edge deletion."""
    g = inst.graph
    if g.max_degree() > 2:
        raise PreconditionError("maximum degree exceeds 2")

    def one(sub: Instance) -> SolveResult:
        if sub.graph.m == sub.graph.n and sub.graph.n >= 3:
            return _solve_cycle(sub)
        return sf_on_forest(sub)

    return by_components(inst, one)


# --- fans --------------------------------------------------------------------

def sf_on_fan(inst: Instance, apex: int) -> SolveResult:
    """Apex plus a linear forest, by interval DP along each path.

    A solution meets each path in disjoint segments; a segment either hangs
    off the apex through one apex edge, or stands alone and then must hold
    whole schools not involving the apex.
    """
    g = inst.graph
    rest = [v for v in range(g.n) if v != apex]
    sub = Graph.from_edges(g.n, [e for e in g.edges if apex not in e])
    if sub.max_degree() > 2 or not sub.is_forest():
        raise PreconditionError("graph minus apex is not a linear forest")
    if not inst.pairs:
        return SolveResult.from_edges([])
    sch = schools_of(inst, ground=())
    school_of = {v: i for i, c in enumerate(sch.schools) for v in c}
    apex_school = school_of.get(apex)
    size = [len(c) for c in sch.schools]
    seen = [False] * g.n
    seen[apex] = True
    total = 0
    edges: list[Edge] = []
    for s in rest:
        if seen[s] or sub.degree(s) == 2:
            continue
        # walk the path starting from an end
        path = [s]
        seen[s] = True
        while True:
            nxt = [y for y in sub.adj[path[-1]] if not seen[y]]
            if not nxt:
                break
            path.append(nxt[0])
            seen[nxt[0]] = True
        cost, chosen = _fan_path(g, apex, path, school_of, apex_school, size)
        if cost == math.inf:
            return INFEASIBLE
        total += cost
        edges.extend(chosen)
    if any(not seen[v] for v in range(g.n)):
        raise PreconditionError("graph minus apex contains a cycle")
    res = SolveResult.from_edges(edges)
    assert res.value == total
    return res


def _fan_path(g, apex, path, school_of, apex_school, size):
    L = len(path)
    term = [school_of.get(v) for v in path]
    hits = [g.has_edge(apex, v) for v in path]
    dp = [math.inf] * (L + 1)
    back: list = [None] * (L + 1)
    dp[0] = 0
    for j in range(L):
        if dp[j] == math.inf:
            continue
        count: dict[int, int] = {}
        apex_at = None
        for k in range(j, L):
            if term[k] is not None:
                count[term[k]] = count.get(term[k], 0) + 1
            if apex_at is None and hits[k]:
                apex_at = path[k]
            options = []
            if all(c == size[s] and s != apex_school for s, c in count.items()):
                options.append((k - j, None))
            if apex_at is not None:
                options.append((k - j + 1, apex_at))
            for cost, at in options:
                if dp[j] + cost < dp[k + 1]:
                    dp[k + 1], back[k + 1] = dp[j] + cost, (j, at)
    if dp[L] == math.inf:
        return math.inf, []
    chosen = []
    k = L
    while k > 0:
        j, at = back[k]
        seg = path[j:k]
        chosen.extend(norm_edge(a, b) for a, b in zip(seg, seg[1:]))
        if at is not None:
            chosen.append(norm_edge(apex, at))
        k = j
    return dp[L], chosen


# --- blocks ------------------------------------------------------------------

def split_at_leaf_block(inst: Instance):
    """Split a connected instance at a leaf block.

    Returns ``((inst1, back1), (inst2, back2))`` with ``inst1`` on the leaf
    block and ``inst2`` on the rest, cross pairs routed through the cut
    vertex, or ``None`` if the graph is a single block.
    """
    dec = blocks(inst.graph)
    if len(dec.blocks) <= 1:
        return None
    leaf = None
    for blk in dec.blocks:
        cuts = [v for v in blk if v in dec.cut_vertices]
        if len(cuts) == 1:
            leaf = (blk, cuts[0])
            break
    blk, v = leaf
    inside = set(blk)
    other = [x for x in range(inst.graph.n) if x not in inside or x == v]
    p1, p2 = [], []
    for s, t in inst.pairs:
        a, b = s in inside and s != v, t in inside and t != v
        if a and b:
            p1.append((s, t))
        elif a:
            p1.append((s, v))
            p2.append((v, t))
        elif b:
            p1.append((t, v))
            p2.append((v, s))
        elif s == v and t in inside or t == v and s in inside:
            p1.append((s, t))
        else:
            p2.append((s, t))
    return induced_instance(inst, blk, p1), induced_instance(inst, other, p2)


def _block_order(dec):
    """Blocks ordered leaves first, each with the cut vertex towards the root."""
    members: dict[int, list[int]] = {}
    for i, blk in enumerate(dec.blocks):
        for v in blk:
            members.setdefault(v, []).append(i)
    seen = [False] * len(dec.blocks)
    order = []
    for r in range(len(dec.blocks)):
        if seen[r]:
            continue
        seen[r] = True
        queue = [(r, None)]
        for i, via in queue:
            for v in dec.blocks[i]:
                if v == via:
                    continue
                for j in members[v]:
                    if not seen[j]:
                        seen[j] = True
                        queue.append((j, v))
        order.extend(reversed(queue))
    return order


def solve_via_blocks(inst: Instance, inner: Solver) -> SolveResult:
    """Peel leaf blocks one at a time, routing cross pairs through the cut vertex.

    ``inner`` is called on each block (2-connected, at least three vertices)
    that carries pairs; bridges are settled directly.
    """
    g = inst.graph
    idx = g.component_index()
    if any(idx[s] != idx[t] for s, t in inst.pairs):
        return INFEASIBLE
    dec = blocks(g)
    pairs = set(inst.pairs)
    edges: list[Edge] = []
    for i, via in _block_order(dec):
        blk = dec.blocks[i]
        inside = set(blk)
        local, keep = [], set()
        for s, t in pairs:
            a, b = s in inside, t in inside
            if a and b:
                local.append((s, t))
            elif a and s != via:
                local.append((s, via))
                keep.add((via, t))
            elif b and t != via:
                local.append((t, via))
                keep.add((s, via))
            else:
                keep.add((s, t))
        pairs = {norm_edge(s, t) for s, t in keep if s != t}
        local = [p for p in local if p[0] != p[1]]
        if not local:
            continue
        if len(blk) == 2:
            edges.append(norm_edge(*blk))
            continue
        sub, back = induced_instance(inst, blk, local)
        res = lift_back(inner(sub), back)
        if not res.feasible:
            return INFEASIBLE
        edges.extend(res.certificate.edges)
    return SolveResult.from_edges(edges)


# --- 2-path branching ----------------------------------------------------------

@dataclass(frozen=True)
class BranchPlan:
    """A derived instance whose optimum plus ``weight`` is a candidate value.

    ``pre`` maps derived edges to original edges and ``extra`` lists the
    original edges the branch commits to (``len(extra) == weight``).
    """

    instance: Instance
    weight: int
    provenance: tuple
    pre: dict
    extra: tuple[Edge, ...]

    def lift(self, res: SolveResult) -> SolveResult:
        if not res.feasible:
            return INFEASIBLE
        edges = [self.pre[e] for e in res.certificate.edges] + list(self.extra)
        out = SolveResult.from_edges(edges)
        if out.value != res.value + self.weight:
            raise AssertionError("branch certificate overlaps committed edges")
        return out


def branch_two_path(inst: Instance, p: TwoPath | Sequence[int]) -> list[BranchPlan]:
    """Contracted branch plus one cut branch per edge pair ``e`` before-or-equal ``f``.

    Cut branches whose middle piece separates a pair are dropped.  Branches
    with identical derived instances keep only the smallest weight.
    """
    verts = list(p.vertices if isinstance(p, TwoPath) else p)
    g = inst.graph
    if not is_two_path(g, verts):
        raise PreconditionError(f"{verts} is not a 2-path")
    L = len(verts) - 1
    u, v = verts[0], verts[-1]
    path_e = [norm_edge(verts[k], verts[k + 1]) for k in range(L)]
    pos = {x: k for k, x in enumerate(verts)}
    plans: list[BranchPlan] = []

    vmap = merge_map(g.n, [verts])
    h, pre = quotient(g, vmap)
    plans.append(BranchPlan(inst.remap(h, vmap), L, ("contract",), pre, tuple(path_e)))

    inner = set(verts[1:-1])
    drop = set(path_e)
    keep_ids = [x for x in range(g.n) if x not in inner]
    cmap: list = [None] * g.n
    for i, x in enumerate(keep_ids):
        cmap[x] = i
    base = Graph.from_edges(len(keep_ids), [(cmap[a], cmap[b]) for a, b in g.edges if (a, b) not in drop])
    cpre = {norm_edge(cmap[a], cmap[b]): (a, b) for a, b in g.edges if (a, b) not in drop}
    best: dict = {}
    for i in range(1, L + 1):
        for j in range(i, L + 1):
            # P side p_0..p_{i-1}, middle p_i..p_{j-1}, Q side p_j..p_L
            def side(x):
                k = pos.get(x)
                if k is None:
                    return "out"
                if k <= i - 1:
                    return "P"
                if k >= j:
                    return "Q"
                return "M"

            mid_pairs, rest = [], []
            dead = False
            for s, t in inst.pairs:
                a, b = side(s), side(t)
                if a == "M" and b == "M":
                    mid_pairs.append((pos[s], pos[t]))
                elif a == "M" or b == "M":
                    dead = True
                    break
                else:
                    rest.append((u if a == "P" else v if a == "Q" else s,
                                 u if b == "P" else v if b == "Q" else t))
            if dead:
                continue
            lo = [min(a, b) for a, b in mid_pairs]
            hi = [max(a, b) for a, b in mid_pairs]
            mid_edges: set[Edge] = set()
            for a, b in zip(lo, hi):
                mid_edges.update(path_e[a:b])
            extra = tuple(sorted(set(path_e[: i - 1]) | set(path_e[j:]) | mid_edges))
            derived = Instance.make(base, [(cmap[s], cmap[t]) for s, t in rest])
            key = derived.key()
            if key not in best or len(extra) < best[key].weight:
                best[key] = BranchPlan(derived, len(extra), ("cut", path_e[i - 1], path_e[j - 1]), cpre, extra)
    plans.extend(best.values())
    return plans


# --- bounded number of 2-paths ---------------------------------------------------

class BoundedTwoPathSolver:
    """Branch on hub-to-hub maximal 2-paths until every block is a cycle or an edge."""

    def __init__(self, k_guard: int = 8):
        self.k_guard = k_guard
        self.memo: dict = {}

    def __call__(self, inst: Instance) -> SolveResult:
        return self.solve(inst)

    def solve(self, inst: Instance) -> SolveResult:
        key = inst.key()
        hit = self.memo.get(key)
        if hit is None:
            hit = solve_via_blocks(inst, self._block)
            self.memo[key] = hit
        return hit

    def _block(self, inst: Instance) -> SolveResult:
        g = inst.graph
        if g.max_degree() <= 2:
            return sf_on_cycle_path_union(inst)
        paths = hub_two_paths(g)
        if len(paths) > self.k_guard:
            raise GuardExceeded("maximal 2-paths", self.k_guard, len(paths))
        path = max(paths, key=lambda p: (len(p.vertices), [-x for x in p.vertices]))
        best = INFEASIBLE
        plans = sorted(branch_two_path(inst, path), key=lambda pl: (pl.weight, pl.provenance))
        for plan in plans:
            bound = plan.weight + terminal_lower_bound(plan.instance)
            if best.feasible and bound > best.value:
                continue
            best = best_of([best, plan.lift(self.solve(plan.instance))])
        return best


def solve_bounded_two_paths(inst: Instance, k_guard: int = 8) -> SolveResult:
    return BoundedTwoPathSolver(k_guard).solve(inst)
