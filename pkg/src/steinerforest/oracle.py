"""Brute-force ground truth: edge-subset enumeration and a Steiner-tree partition oracle."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .core import (
    INFEASIBLE,
    DisjointSet,
    Edge,
    Graph,
    GuardExceeded,
    Instance,
    SolveResult,
    norm_edge,
    pairs_connected,
    schools_of,
    spanning_forest,
)


@dataclass(frozen=True)
class OracleBudget:
    max_edges_for_subset_enum: int = 22
    max_schools_for_partition: int = 6
    max_terminals_per_tree: int = 10

    def __post_init__(self):
        if min(self.max_edges_for_subset_enum, self.max_schools_for_partition, self.max_terminals_per_tree) <= 0:
            raise ValueError("budgets must be positive")


DEFAULT_BUDGET = OracleBudget()


def bfs_parents(g: Graph, src: int) -> list[int]:
    """BFS tree parents from ``src`` (``-1`` for unreached, ``src`` for itself); neighbours in id order."""
    par = [-1] * g.n
    par[src] = src
    q = deque([src])
    while q:
        x = q.popleft()
        for y in g.adj[x]:
            if par[y] == -1:
                par[y] = x
                q.append(y)
    return par


def path_edges(par: list[int], v: int) -> list[Edge]:
    out = []
    while par[v] != v:
        out.append(norm_edge(v, par[v]))
        v = par[v]
    return out


def prune_leaves(edges, keep) -> list[Edge]:
    """Strip leaves not in ``keep`` until none remain."""
    edges = set(edges)
    keep = set(keep)
    deg: dict[int, int] = {}
    inc: dict[int, set] = {}
    for e in edges:
        for x in e:
            deg[x] = deg.get(x, 0) + 1
            inc.setdefault(x, set()).add(e)
    stack = [x for x, d in deg.items() if d == 1 and x not in keep]
    while stack:
        x = stack.pop()
        if deg.get(x) != 1:
            continue
        (e,) = inc[x]
        edges.discard(e)
        for y in e:
            deg[y] -= 1
            inc[y].discard(e)
            if deg[y] == 1 and y not in keep:
                stack.append(y)
    return sorted(edges)


def greedy_forest(inst: Instance) -> list[Edge] | None:
    """Union of BFS paths per pair, reduced to a forest without non-terminal leaves."""
    g = inst.graph
    union: set[Edge] = set()
    parents: dict[int, list[int]] = {}
    for s, t in inst.pairs:
        if s not in parents:
            parents[s] = bfs_parents(g, s)
        par = parents[s]
        if par[t] == -1:
            return None
        union.update(path_edges(par, t))
    return prune_leaves(spanning_forest(g, union), inst.terminals)


# --- edge subset enumeration -------------------------------------------------

def sf_subset_enum(inst: Instance, budget: OracleBudget = DEFAULT_BUDGET) -> SolveResult:
    """Exact optimum by enumerating acyclic edge subsets in increasing size.

    The first feasible subset found is the lexicographically smallest among
    the minimum ones.
    """
    g = inst.graph
    if g.m > budget.max_edges_for_subset_enum:
        raise GuardExceeded("edges for subset enumeration", budget.max_edges_for_subset_enum, g.m)
    if not inst.pairs:
        return SolveResult.from_edges([])
    if not pairs_connected(inst):
        return INFEASIBLE
    greedy = greedy_forest(inst)
    upper = len(greedy)
    # edges in components without terminals never help
    idx = g.component_index()
    live = {idx[v] for v in inst.terminals}
    edges = [e for e in g.edges if idx[e[0]] in live]
    m = len(edges)
    pairs = inst.pairs
    sch = schools_of(inst, ground=())
    school_of = {v: i for i, c in enumerate(sch.schools) for v in c}
    terms = inst.terminals

    def lower_bound(ds: DisjointSet) -> int:
        roots = {}
        for v in terms:
            roots.setdefault(ds.find(v), set()).add(school_of[v])
        # schools sharing a class must end up together
        sds = DisjointSet(sch.h)
        for grp in roots.values():
            it = iter(grp)
            a = next(it)
            for b in it:
                sds.union(a, b)
        groups = len({sds.find(i) for i in range(sch.h)})
        return len(roots) - groups

    def reachable(ds_parent: list[int], start: int) -> bool:
        ds = DisjointSet(g.n)
        ds.parent = list(ds_parent)
        for u, v in edges[start:]:
            ds.union(u, v)
        return all(ds.find(s) == ds.find(t) for s, t in pairs)

    def search(k: int) -> list[Edge] | None:
        chosen: list[Edge] = []

        def rec(i: int, parent: list[int]) -> bool:
            ds = DisjointSet(g.n)
            ds.parent = parent
            left = k - len(chosen)
            if left == 0:
                return all(ds.find(s) == ds.find(t) for s, t in pairs)
            if m - i < left or lower_bound(ds) > left:
                return False
            u, v = edges[i]
            ru, rv = ds.find(u), ds.find(v)
            if ru != rv:
                nxt = list(ds.parent)
                lo, hi = (ru, rv) if ru < rv else (rv, ru)
                nxt[hi] = lo
                chosen.append(edges[i])
                if rec(i + 1, nxt):
                    return True
                chosen.pop()
            if not reachable(ds.parent, i + 1):
                return False
            return rec(i + 1, ds.parent)

        return list(chosen) if rec(0, list(range(g.n))) else None

    start = max(0, lower_bound(DisjointSet(g.n)))
    for k in range(start, upper + 1):
        sol = search(k)
        if sol is not None:
            return SolveResult.from_edges(sol)
    return SolveResult.from_edges(greedy)


# --- Dreyfus-Wagner ----------------------------------------------------------

class SteinerTable:
    """Subset DP over a terminal list: ``cost(mask)`` is the Steiner tree size of that subset."""

    def __init__(self, g: Graph, terminals, budget: OracleBudget = DEFAULT_BUDGET):
        terminals = sorted(set(terminals))
        t = len(terminals)
        if t > budget.max_terminals_per_tree:
            raise GuardExceeded("terminals per tree", budget.max_terminals_per_tree, t)
        self.g = g
        self.terminals = terminals
        n = g.n
        self.parents = [bfs_parents(g, v) for v in range(n)]
        dist = np.full((n, n), np.inf)
        for v, par in enumerate(self.parents):
            q = deque([v])
            dist[v, v] = 0
            while q:
                x = q.popleft()
                for y in g.adj[x]:
                    if dist[v, y] == np.inf:
                        dist[v, y] = dist[v, x] + 1
                        q.append(y)
        self.dist = dist
        full = 1 << t
        split = np.full((full, n), np.inf)
        best = np.full((full, n), np.inf)
        self.split_choice = np.zeros((full, n), dtype=np.int64)
        self.relax_from = np.zeros((full, n), dtype=np.int64)
        for i, x in enumerate(terminals):
            split[1 << i, x] = 0
        for mask in range(1, full):
            if mask & (mask - 1):
                low = mask & -mask
                rest = mask ^ low
                sub = rest
                cur = np.full(n, np.inf)
                choice = np.zeros(n, dtype=np.int64)
                # every split puts the lowest terminal in ``a``
                while True:
                    a = sub | low
                    b = mask ^ a
                    if b:
                        val = best[a] + best[b]
                        better = val < cur
                        cur = np.where(better, val, cur)
                        choice = np.where(better, a, choice)
                    if sub == 0:
                        break
                    sub = (sub - 1) & rest
                split[mask] = cur
                self.split_choice[mask] = choice
            tot = split[mask][:, None] + dist
            self.relax_from[mask] = np.argmin(tot, axis=0)
            best[mask] = tot[self.relax_from[mask], np.arange(n)]
        self.split = split
        self.best = best

    def mask_of(self, vertices) -> int:
        pos = {v: i for i, v in enumerate(self.terminals)}
        mask = 0
        for v in vertices:
            mask |= 1 << pos[v]
        return mask

    def cost(self, mask: int) -> float:
        if mask == 0 or not mask & (mask - 1):
            return 0
        return float(self.best[mask].min())

    def _collect(self, mask: int, v: int, out: set):
        u = int(self.relax_from[mask, v])
        out.update(path_edges(self.parents[u], v))
        if mask & (mask - 1):
            a = int(self.split_choice[mask, u])
            self._collect(a, u, out)
            self._collect(mask ^ a, u, out)

    def tree(self, mask: int) -> SolveResult:
        if mask == 0 or not mask & (mask - 1):
            return SolveResult.from_edges([])
        row = self.best[mask]
        v = int(np.argmin(row))
        if row[v] == np.inf:
            return INFEASIBLE
        union: set[Edge] = set()
        self._collect(mask, v, union)
        keep = [x for i, x in enumerate(self.terminals) if mask >> i & 1]
        edges = prune_leaves(spanning_forest(self.g, union), keep)
        res = SolveResult.from_edges(edges)
        assert res.value == int(row[v]), "Steiner tree reconstruction mismatch"
        return res


def steiner_tree_dw(g: Graph, terminals, budget: OracleBudget = DEFAULT_BUDGET) -> SolveResult:
    """Minimum Steiner tree on ``terminals`` (INFEASIBLE if they are disconnected)."""
    table = SteinerTable(g, terminals, budget)
    return table.tree((1 << len(table.terminals)) - 1)


def set_partitions(k: int):
    """Restricted-growth strings of length ``k``."""
    if k == 0:
        yield ()
        return
    rgs = [0] * k

    def rec(i, top):
        if i == k:
            yield tuple(rgs)
            return
        for c in range(top + 2):
            rgs[i] = c
            yield from rec(i + 1, max(top, c))

    rgs[0] = 0
    yield from rec(1, 0)


def sf_partition_oracle(inst: Instance, budget: OracleBudget = DEFAULT_BUDGET) -> SolveResult:
    """Minimum over groupings of the schools of the summed Steiner-tree costs."""
    sch = schools_of(inst, ground=())
    h = sch.terminal_count
    if h > budget.max_schools_for_partition:
        raise GuardExceeded("schools for partition oracle", budget.max_schools_for_partition, h)
    if h == 0:
        return SolveResult.from_edges([])
    if not pairs_connected(inst):
        return INFEASIBLE
    table = SteinerTable(inst.graph, inst.terminals, budget)
    masks = [table.mask_of(c) for c in sch.schools[:h]]
    best_val = np.inf
    best_groups = None
    for rgs in set_partitions(h):
        groups: dict[int, int] = {}
        for i, c in enumerate(rgs):
            groups[c] = groups.get(c, 0) | masks[i]
        val = sum(table.cost(mk) for mk in groups.values())
        if val < best_val:
            best_val, best_groups = val, list(groups.values())
    if best_val == np.inf:
        return INFEASIBLE
    edges: set[Edge] = set()
    for mk in best_groups:
        edges.update(table.tree(mk).certificate.edges)
    res = SolveResult.from_edges(spanning_forest(inst.graph, edges))
    assert res.value == int(best_val), "partition certificate mismatch"
    return res
