"""Exact solver for graphs with a 2-deletion set of size at most two, and its edge-set extension.

On a 2-connected block with deletion set ``{u, v}`` the optimum is the best of:
a solution containing a short u-v path (contract it), a solution avoiding
``v`` or avoiding ``u``, and a solution in which ``u`` and ``v`` lie in
different components.  For the last kind at most three non-terminal relay
vertices are needed; once they are fixed every remaining vertex is a
terminal, the cost is forced, and only a 2-SAT side assignment remains.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Sequence

from ..core import (
    INFEASIBLE,
    Edge,
    Graph,
    GuardExceeded,
    Instance,
    PreconditionError,
    SolveResult,
    best_of,
    derive,
    delete_vertices,
    merge_map,
    norm_edge,
    schools_of,
)
from ..kernels import branch_two_path, sf_on_cycle_path_union, solve_via_blocks
from ..subgraph import c_deletion_set, is_c_deletion_set

EXTENSION_GUARD = 12


def _lift_vmap(res: SolveResult, pre: dict, extra: Sequence[Edge] = ()) -> SolveResult:
    if not res.feasible:
        return INFEASIBLE
    return SolveResult.from_edges([pre[e] for e in res.certificate.edges] + list(extra))


class TwoDeletionSolver:
    def __init__(self):
        self.memo: dict = {}

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
        dset = c_deletion_set(g, 2, 2)
        if dset is None:
            raise PreconditionError("block has no 2-deletion set of size at most 2")
        if len(dset) < 2:
            # a 2-connected block on four or more vertices has no such cut
            raise AssertionError("single-vertex 2-deletion set in a 2-connected block")
        u, v = dset
        if g.has_edge(u, v):
            out = []
            for plan in branch_two_path(inst, [u, v]):
                out.append(plan.lift(self.solve(plan.instance)))
            return best_of(out)
        cands = [self._paths(inst, u, v), self._without(inst, v), self._without(inst, u),
                 self._split(inst, u, v)]
        return best_of(cands)

    def _paths(self, inst: Instance, u: int, v: int) -> SolveResult:
        g = inst.graph
        out = []
        routes = [[u, x, v] for x in g.adj[u] if g.has_edge(x, v)]
        for x in g.adj[u]:
            for y in g.adj[x]:
                if y not in (u, v) and g.has_edge(y, v):
                    routes.append([u, x, y, v])
        for route in routes:
            vmap = merge_map(g.n, [route])
            sub, pre = derive(inst, vmap)
            extra = [norm_edge(a, b) for a, b in zip(route, route[1:])]
            out.append(_lift_vmap(self.solve(sub), pre, extra))
        return best_of(out)

    def _without(self, inst: Instance, x: int) -> SolveResult:
        if x in set(inst.terminals):
            return INFEASIBLE
        h, vmap = delete_vertices(inst.graph, [x])
        sub = inst.remap(h, vmap)
        back = {vmap[a]: a for a in range(inst.graph.n) if vmap[a] is not None}
        res = self.solve(sub)
        if not res.feasible:
            return INFEASIBLE
        return SolveResult.from_edges(norm_edge(back[a], back[b]) for a, b in res.certificate.edges)

    # --- u and v in different components -------------------------------------

    def _split(self, inst: Instance, u: int, v: int) -> SolveResult:
        g = inst.graph
        sch = schools_of(inst, ground=())
        school_of = {x: i for i, c in enumerate(sch.schools[: sch.terminal_count]) for x in c}
        if u in school_of and school_of.get(u) == school_of.get(v):
            return INFEASIBLE
        terms = set(school_of)
        hub = {u, v}
        rest = [x for x in range(g.n) if x not in hub]
        comp_of: dict[int, tuple[int, ...]] = {}
        for x in rest:
            if x not in comp_of:
                others = [y for y in g.adj[x] if y not in hub]
                comp = tuple(sorted([x] + others))
                for y in comp:
                    comp_of[y] = comp
        comps = sorted(set(comp_of.values()))
        if any(len(c) > 2 for c in comps):
            raise PreconditionError("components outside the deletion set exceed size 2")
        # a relay is a non-terminal passing its terminal partner on to a hub
        # the partner cannot reach directly
        relays = []
        for comp in comps:
            if len(comp) != 2:
                continue
            for z, y in (comp, comp[::-1]):
                if z in terms or y not in terms:
                    continue
                for side in (u, v):
                    if g.has_edge(z, side) and not g.has_edge(y, side):
                        relays.append((z, y, side))
        for size in range(0, 4):
            for choice in combinations(relays, size):
                if len({z for z, _, _ in choice}) < size:
                    continue
                res = self._endgame(inst, u, v, comps, terms, school_of, choice)
                if res is not None:
                    return res
        return INFEASIBLE

    def _endgame(self, inst, u, v, comps, terms, school_of, choice):
        """Fixed-cost completion once relays are fixed; ``None`` if the side constraints clash."""
        g = inst.graph
        sch_sizes: dict[int, int] = {}
        for x, s in school_of.items():
            sch_sizes[s] = sch_sizes.get(s, 0) + 1
        via = {y: (z, side) for z, y, side in choice}
        edges: list[Edge] = [norm_edge(z, side) for z, _, side in choice]

        def reach(y, side):
            if g.has_edge(y, side):
                return [norm_edge(y, side)]
            hop = via.get(y)
            if hop is not None and hop[1] == side:
                return [norm_edge(y, hop[0])]
            return None

        # side variables per school: True means the u side
        forced: dict[int, bool] = {}
        if u in school_of:
            forced[school_of[u]] = True
        if v in school_of:
            forced[school_of[v]] = False
        units: list[tuple[int, bool]] = list(forced.items())
        binaries: list[tuple[int, int, list[tuple[bool, bool]]]] = []
        options: list = []
        for comp in comps:
            tcomp = [x for x in comp if x in terms and x not in (u, v)]
            if not tcomp:
                continue
            if len(tcomp) == 2:
                x, y = tcomp
                if school_of[x] == school_of[y] and sch_sizes[school_of[x]] == 2:
                    edges.append(norm_edge(x, y))
                    continue
                allowed = []
                for sx, sy in product((True, False), repeat=2):
                    if self._pair_edges(g, x, y, sx, sy, u, v) is not None:
                        allowed.append((sx, sy))
                options.append(("pair", x, y))
                binaries.append((school_of[x], school_of[y], allowed))
            else:
                (y,) = tcomp
                allowed_sides = [s for s, hub in ((True, u), (False, v)) if reach(y, hub) is not None]
                if not allowed_sides:
                    return None
                options.append(("single", y))
                if len(allowed_sides) == 1:
                    units.append((school_of[y], allowed_sides[0]))
        used = {school_of[o[1]] for o in options} | {school_of[o[2]] for o in options if o[0] == "pair"}
        sides = _two_sat(units, binaries, used)
        if sides is None:
            return None
        for opt in options:
            if opt[0] == "pair":
                _, x, y = opt
                edges.extend(self._pair_edges(g, x, y, sides[school_of[x]], sides[school_of[y]], u, v))
            else:
                y = opt[1]
                edges.extend(reach(y, u if sides[school_of[y]] else v))
        return SolveResult.from_edges(edges)

    @staticmethod
    def _pair_edges(g, x, y, sx, sy, u, v):
        hx, hy = (u if sx else v), (u if sy else v)
        if hx == hy:
            if g.has_edge(x, hx):
                return [norm_edge(x, hx), norm_edge(x, y)]
            if g.has_edge(y, hx):
                return [norm_edge(y, hx), norm_edge(x, y)]
            return None
        if g.has_edge(x, hx) and g.has_edge(y, hy):
            return [norm_edge(x, hx), norm_edge(y, hy)]
        return None


def _two_sat(units, binaries, variables=()) -> dict[int, bool] | None:
    """Boolean CSP with unary and binary relations (always 2-SAT expressible).

    Uses the classical assign-and-propagate scheme, which never needs to
    backtrack past a single variable for binary constraints.
    """
    cons: dict[int, list] = {}
    for a, b, allowed in binaries:
        rel = set(allowed)
        cons.setdefault(a, []).append((b, rel, True))
        if a != b:
            cons.setdefault(b, []).append((a, rel, False))

    def propagate(assign, start):
        stack = list(start)
        while stack:
            a = stack.pop()
            va = assign[a]
            for b, rel, first in cons.get(a, ()):
                if a == b:
                    if (va, va) not in rel:
                        return False
                    continue
                ok = [vb for vb in (True, False) if ((va, vb) if first else (vb, va)) in rel]
                if not ok:
                    return False
                if b in assign:
                    if assign[b] not in ok:
                        return False
                elif len(ok) == 1:
                    assign[b] = ok[0]
                    stack.append(b)
        return True

    assign: dict[int, bool] = {}
    for a, val in units:
        if assign.get(a, val) != val:
            return None
        assign[a] = val
    if not propagate(assign, list(assign)):
        return None
    for a in sorted(set(cons) | set(assign) | set(variables)):
        if a in assign:
            continue
        for val in (True, False):
            trial = dict(assign)
            trial[a] = val
            if propagate(trial, [a]):
                assign = trial
                break
        else:
            return None
    return assign


def solve_2ds2(inst: Instance, dset=None) -> SolveResult:
    """Exact optimum when ``inst.graph`` has a 2-deletion set of size at most two."""
    g = inst.graph
    if dset is not None:
        if len(set(dset)) > 2 or not is_c_deletion_set(g, dset, 2):
            raise PreconditionError("given set is not a 2-deletion set of size at most 2")
    elif c_deletion_set(g, 2, 2) is None:
        raise PreconditionError("graph has no 2-deletion set of size at most 2")
    return TwoDeletionSolver().solve(inst)


def extension_edges(g: Graph, dset) -> list[Edge]:
    """Edges touching components of ``g - dset`` with more than two vertices."""
    gone = set(dset)
    h, vmap = delete_vertices(g, gone)
    back = {vmap[x]: x for x in range(g.n) if vmap[x] is not None}
    big = {back[x] for comp in h.components() if len(comp) > 2 for x in comp}
    return [e for e in g.edges if e[0] in big or e[1] in big]


def solve_2ds2_extension(inst: Instance, X, dset=None, guard: int = EXTENSION_GUARD) -> SolveResult:
    """Branch contract/cut on every edge of ``X``, then solve the 2-deletion-set instance."""
    X = sorted({norm_edge(*e) for e in X})
    if len(X) > guard:
        raise GuardExceeded("extension edge set", guard, len(X))
    g = inst.graph
    for e in X:
        if not g.has_edge(*e):
            raise PreconditionError(f"{e} is not an edge")
    rest = Graph.from_edges(g.n, [e for e in g.edges if e not in set(X)])
    if dset is None:
        dset = c_deletion_set(rest, 2, 2)
        if dset is None:
            raise PreconditionError("G - X has no 2-deletion set of size at most 2")
    elif not is_c_deletion_set(rest, dset, 2):
        raise PreconditionError("given set is not a 2-deletion set of G - X")
    ds = set(dset)
    for e in X:
        for x in e:
            if x not in ds and rest.adj[x]:
                raise PreconditionError(f"endpoint {x} of {e} is neither isolated in G - X nor in the deletion set")
    solver = TwoDeletionSolver()
    return _extend(inst, X, solver)


def _extend(inst: Instance, X: list[Edge], solver: TwoDeletionSolver) -> SolveResult:
    live = [e for e in X if inst.graph.has_edge(*e)]
    if not live:
        return solver.solve(inst)
    e, rest = live[0], live[1:]
    out = []
    for plan in branch_two_path(inst, list(e)):
        vmap = _plan_vmap(inst.graph, plan, e)
        mapped = set()
        for a, b in rest:
            x, y = vmap[a], vmap[b]
            if x is not None and y is not None and x != y:
                mapped.add(norm_edge(x, y))
        out.append(plan.lift(_extend(plan.instance, sorted(mapped), solver)))
    return best_of(out)


def _plan_vmap(g: Graph, plan, e: Edge) -> list:
    if plan.provenance[0] == "contract":
        return merge_map(g.n, [e])
    return list(range(g.n))
