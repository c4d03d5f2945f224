"""Exact solver parameterised by a vertex cover.

For every guess of the unused cover vertices ``I0`` and of the partition
``A`` of the remaining cover into solution components, a dynamic program
walks over the schools (pair classes, then the unused remainder vertices one
by one) and tracks how the cover vertices are currently grouped.  A school
either hangs its vertices off one part of ``A``, or spends some of them as
connectors merging groups inside one part; the connectors are placed by a
bipartite matching against a guessed merge pattern.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from ..core import (
    INFEASIBLE,
    Edge,
    Graph,
    GuardExceeded,
    Instance,
    PreconditionError,
    SchoolPartition,
    SolveResult,
    norm_edge,
    schools_of,
)
from ..kernels import induced_instance, lift_back
from ..oracle import greedy_forest
from .matching import min_weight_perfect_matching
from .patterns import _partitions, enumerate_pattern_forests

COVER_GUARD = 12


@dataclass(frozen=True)
class CoverContext:
    cover: tuple[int, ...]
    remainder: tuple[int, ...]
    schools: SchoolPartition
    lift_count: int


@dataclass(frozen=True)
class ArchipelagoBranch:
    """``unused`` and ``parts`` are bitmasks over the cover index."""

    unused: int
    parts: tuple[int, ...]


def is_vertex_cover(g: Graph, cover) -> bool:
    cs = set(cover)
    return all(u in cs or v in cs for u, v in g.edges)


def lift_terminals_off_cover(inst: Instance, cover) -> tuple[Instance, CoverContext]:
    """Move terminals sitting on cover vertices to fresh pendant vertices."""
    g = inst.graph
    cover = tuple(sorted(set(cover)))
    if not is_vertex_cover(g, cover):
        raise PreconditionError("not a vertex cover")
    term = set(inst.terminals)
    lifted = [c for c in cover if c in term]
    moved = {c: g.n + i for i, c in enumerate(lifted)}
    h = Graph.from_edges(g.n + len(lifted), list(g.edges) + [(c, moved[c]) for c in lifted])
    pairs = [(moved.get(s, s), moved.get(t, t)) for s, t in inst.pairs]
    out = Instance.make(h, pairs)
    cs = set(cover)
    rem = tuple(v for v in range(h.n) if v not in cs)
    ctx = CoverContext(cover, rem, schools_of(out, ground=rem), len(lifted))
    return out, ctx


def solve_vertex_cover_fpt(inst: Instance, cover, guard: int = COVER_GUARD) -> SolveResult:
    cover = sorted(set(cover))
    if len(cover) > guard:
        raise GuardExceeded("vertex cover size", guard, len(cover))
    lifted, ctx = lift_terminals_off_cover(inst, cover)
    g = lifted.graph
    idx = g.component_index()
    if any(idx[s] != idx[t] for s, t in lifted.pairs):
        return INFEASIBLE
    comps = g.components()
    edges: list[Edge] = []
    for c in sorted({idx[s] for s, _ in lifted.pairs}):
        sub, back = induced_instance(lifted, comps[c])
        pos = {v: i for i, v in enumerate(back)}
        res = lift_back(_CoverDP(sub, [pos[x] for x in cover if x in pos]).solve(), back)
        if not res.feasible:
            return INFEASIBLE
        edges.extend(res.certificate.edges)
    n = inst.graph.n
    kept = [e for e in edges if e[1] < n]
    if len(kept) != len(edges) - ctx.lift_count:
        raise AssertionError("pendant edge missing from solution")
    return SolveResult.from_edges(kept)


def _bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def _low(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


class _CoverDP:
    """The dynamic program on one connected component, terminals already off the cover."""

    def __init__(self, inst: Instance, cover: list[int]):
        self.inst = inst
        g = inst.graph
        self.g = g
        self.C = sorted(cover)
        self.k = len(self.C)
        cpos = {c: i for i, c in enumerate(self.C)}
        self.cpos = cpos
        self.cadj = [sum(1 << cpos[y] for y in g.adj[c] if y in cpos) for c in self.C]
        terms = set(inst.terminals)
        self.terms = terms
        self.nbr = {x: sum(1 << cpos[y] for y in g.adj[x]) for x in range(g.n) if x not in cpos}
        sch = schools_of(inst, ground=())
        self.schools = [tuple(s) for s in sch.schools[: sch.terminal_count]]
        # unused remainder vertices; a useful one needs two cover neighbours,
        # and among false twins at most deg-1 can ever be used
        singles, seen = [], {}
        for x in sorted(self.nbr):
            if x in terms:
                continue
            m = self.nbr[x]
            d = bin(m).count("1")
            if d < 2:
                continue
            c = seen.get(m, 0)
            if c < d - 1:
                singles.append(x)
                seen[m] = c + 1
        self.singles = singles
        link = list(self.cadj)
        for x, m in self.nbr.items():
            for i in _bits(m):
                link[i] |= m
        self.link = link

    # --- branch enumeration -------------------------------------------------

    def _connected(self, mask: int, adj) -> bool:
        if mask == 0:
            return True
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            i = _low(frontier)
            frontier &= frontier - 1
            new = adj[i] & mask & ~seen
            seen |= new
            frontier |= new
        return seen == mask

    def branches(self) -> list[tuple[int, ArchipelagoBranch]]:
        k = self.k
        T = len(self.terms)
        school_masks = [[self.nbr[x] for x in s] for s in self.schools]
        out = []

        def rec(i, unused, parts):
            if i == k:
                if not parts:
                    return
                for sm in school_masks:
                    if not any(all(m & P for m in sm) for P in parts):
                        return
                for P in parts:
                    if not any(all(m & P for m in sm) for sm in school_masks):
                        return
                    if not self._connected(P, self.link):
                        return
                lb = (bin(((1 << k) - 1) & ~unused).count("1")) + T - len(parts)
                out.append((lb, ArchipelagoBranch(unused, tuple(parts))))
                return
            bit = 1 << i
            rec(i + 1, unused | bit, parts)
            for j in range(len(parts)):
                parts[j] |= bit
                rec(i + 1, unused, parts)
                parts[j] &= ~bit
            parts.append(bit)
            rec(i + 1, unused, parts)
            parts.pop()

        rec(0, 0, [])
        out.sort(key=lambda t: t[0])
        return out

    def solve(self) -> SolveResult:
        if not self.inst.pairs:
            return SolveResult.from_edges([])
        if self.k == 0:
            return INFEASIBLE
        greedy = greedy_forest(self.inst)
        if greedy is None:
            return INFEASIBLE
        # every bound check is inclusive, so the greedy value itself stays reachable
        best_val = len(greedy)
        found = None
        for lb, br in self.branches():
            if lb > best_val:
                break
            res = self.run(br, best_val)
            if res is not None and (found is None or res.sort_key() < found.sort_key()):
                found = res
                best_val = res.value
        if found is None:
            raise AssertionError("no branch reached the greedy bound")
        return found

    # --- dynamic program ----------------------------------------------------

    def _base_states(self, parts):
        per = []
        for P in parts:
            opts = []
            for blocks in _partitions(list(_bits(P))):
                masks = [sum(1 << i for i in b) for b in blocks]
                if all(self._connected(m, self.cadj) for m in masks):
                    opts.append(masks)
            per.append(opts)
        states = [[]]
        for opts in per:
            states = [s + o for s in states for o in opts]
        return {tuple(sorted(s)): (sum(bin(m).count("1") - 1 for m in s), None) for s in states}

    def run(self, br: ArchipelagoBranch, bound: float) -> SolveResult | None:
        parts = br.parts
        p = len(parts)
        steps = [("school", s) for s in self.schools] + [("single", x) for x in self.singles]
        alphas = [len(s) for s in self.schools] + [0] * len(self.singles)
        rem = [0] * (len(steps) + 1)
        for i in range(len(steps) - 1, -1, -1):
            rem[i] = rem[i + 1] + alphas[i]
        cur = self._base_states(parts)
        layers = [cur]

        def keep(state, val, i):
            return val + rem[i] + len(state) - p <= bound

        cur = {s: v for s, v in cur.items() if keep(s, v[0], 0)}
        for i, (kind, item) in enumerate(steps):
            nxt: dict = {}

            def offer(state, val, back):
                old = nxt.get(state)
                if (old is None or val < old[0]) and keep(state, val, i + 1):
                    nxt[state] = (val, back)

            if kind == "school":
                self._school_step(item, parts, cur, offer, nxt)
            else:
                self._single_step(item, parts, cur, offer)
            cur = nxt
            layers.append(cur)
            if not cur:
                return None
        final = tuple(sorted(parts))
        if final not in cur:
            return None
        return self._rebuild(layers, steps, parts, final)

    def _school_step(self, school, parts, cur, offer, nxt):
        masks = [self.nbr[x] for x in school]
        alpha = len(school)
        okj = [j for j, P in enumerate(parts) if all(m & P for m in masks)]
        for state, (val, _) in cur.items():
            offer(state, val + alpha, (state, ("attach", okj[0])))
        for state, (val, _) in cur.items():
            for j in okj:
                A = parts[j]
                inside = [P for P in state if P & A]
                if len(inside) < 2:
                    continue
                outside = [P for P in state if not P & A]
                for grouping in _partitions(inside):
                    big = [grp for grp in grouping if len(grp) > 1]
                    if not big or len(big) > alpha:
                        continue
                    merged = tuple(sorted(outside + [sum(grp) for grp in grouping]))
                    cost = val + alpha + sum(len(grp) - 1 for grp in big)
                    old = nxt.get(merged)
                    if old is not None and old[0] <= cost:
                        continue
                    plan = self._place(school, masks, A, big, alpha)
                    if plan is not None:
                        offer(merged, cost, (state, ("distill", j, plan)))

    def _place(self, school, masks, A, big, alpha):
        """Find a merge pattern for the groups in ``big`` whose connectors can be matched to ``school``."""
        counts = [len(grp) for grp in big]
        for forest in enumerate_pattern_forests(counts, alpha):
            nodes = []
            for grp, tree in zip(big, forest.trees):
                for node in tree:
                    nodes.append(tuple(sum(grp[i] for i in child) for child in node))
            beta = len(nodes)
            if beta > alpha:
                continue
            cost = []
            for m in masks:
                row = [len(node) if all(m & c for c in node) else math.inf for node in nodes]
                row += [1 if m & A else math.inf] * (alpha - beta)
                cost.append(row)
            if any(all(c == math.inf for c in (cost[r][col] for r in range(alpha))) for col in range(beta)):
                continue
            got = min_weight_perfect_matching(cost)
            if got is not None:
                return nodes, got[0]
        return None

    def _single_step(self, x, parts, cur, offer):
        N = self.nbr[x]
        for state, (val, _) in cur.items():
            offer(state, val, (state, None))
        for state, (val, _) in cur.items():
            for j, A in enumerate(parts):
                if not N & A:
                    continue
                touch = [P for P in state if P & A and P & N]
                if len(touch) < 2:
                    continue
                rest = [P for P in state if P not in touch]
                for r in range(2, len(touch) + 1):
                    for sub in combinations(touch, r):
                        others = [P for P in touch if P not in sub]
                        merged = tuple(sorted(rest + others + [sum(sub)]))
                        offer(merged, val + r, (state, ("connect", x, sub)))

    def _rebuild(self, layers, steps, parts, final) -> SolveResult:
        C = self.C
        edges: list[Edge] = []
        state = final
        for i in range(len(steps), 0, -1):
            val, back = layers[i][state]
            prev, action = back
            kind, item = steps[i - 1]
            if action is not None:
                if action[0] == "attach":
                    A = parts[action[1]]
                    edges.extend(norm_edge(u, C[_low(self.nbr[u] & A)]) for u in item)
                elif action[0] == "distill":
                    _, j, (nodes, assign) = action
                    A = parts[j]
                    for r, u in enumerate(item):
                        col = assign[r]
                        if col < len(nodes):
                            edges.extend(norm_edge(u, C[_low(self.nbr[u] & c)]) for c in nodes[col])
                        else:
                            edges.append(norm_edge(u, C[_low(self.nbr[u] & A)]))
                else:
                    _, x, sub = action
                    edges.extend(norm_edge(x, C[_low(self.nbr[x] & P)]) for P in sub)
            state = prev
        for P in state:
            edges.extend(self._tree(P))
        res = SolveResult.from_edges(edges)
        if res.value != layers[-1][final][0]:
            raise AssertionError("cover DP reconstruction mismatch")
        return res

    def _tree(self, mask: int) -> list[Edge]:
        C = self.C
        start = _low(mask)
        seen = 1 << start
        stack = [start]
        out = []
        while stack:
            i = stack.pop()
            for j in _bits(self.cadj[i] & mask & ~seen):
                seen |= 1 << j
                out.append(norm_edge(C[i], C[j]))
                stack.append(j)
        return out
