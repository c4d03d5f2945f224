"""Solvers for the subgraph-free classes, instance classification and routing.

Each ``solve_*_free`` function is exact on its class.  They reduce to
2-connected blocks first and then find a small vertex cover, a small
2-deletion set, or a bounded number of 2-paths inside each block.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .core import (
    INFEASIBLE,
    Graph,
    GuardExceeded,
    Instance,
    PreconditionError,
    SolveResult,
    SteinerError,
    best_of,
    norm_edge,
    terminal_lower_bound,
)
from .fpt.two_deletion import extension_edges, solve_2ds2, solve_2ds2_extension
from .fpt.vertex_cover import COVER_GUARD, is_vertex_cover, solve_vertex_cover_fpt
from .kernels import (
    BoundedTwoPathSolver,
    Solver,
    by_components,
    sf_on_cycle_path_union,
    sf_on_fan,
    sf_on_forest,
    solve_via_blocks,
)
from .oracle import OracleBudget, sf_partition_oracle, sf_subset_enum
from .subgraph import (
    K13,
    S114,
    TWO_K13,
    TWO_K13_P3,
    TWO_P4_P3,
    Embedding,
    Path,
    PlusP2,
    SubdividedClaw,
    c_deletion_set,
    find_embedding,
    is_c_deletion_set,
    longest_path,
    min_vertex_cover,
)

TWO_PATH_GUARD = 24
BRANCH_GUARD = 4096


class Unsupported(SteinerError):
    """No route applies within the configured guards."""

    def __init__(self, guards: list[GuardExceeded]):
        self.guards = guards
        if guards:
            g = min(guards, key=lambda e: (e.actual / max(e.limit, 1), e.guard))
            msg = f"no route applies; smallest violated guard: {g}"
        else:
            msg = "no route applies"
        super().__init__(msg)


@dataclass(frozen=True)
class Limits:
    vc: int = 7
    oracle_edges: int = 22
    oracle_schools: int = 6
    oracle_terminals: int = 10
    two_paths: int = TWO_PATH_GUARD
    branches: int = BRANCH_GUARD
    extension: int = 16
    peel: int = 2

    @property
    def budget(self) -> OracleBudget:
        return OracleBudget(self.oracle_edges, self.oracle_schools, self.oracle_terminals)


DEFAULT_LIMITS = Limits()


@dataclass(frozen=True)
class Antares:
    hub: int
    neighbors: tuple[int, int, int]

    @property
    def vertices(self) -> tuple[int, ...]:
        return (self.hub,) + self.neighbors

    @classmethod
    def around(cls, g: Graph, v: int) -> "Antares":
        if g.degree(v) < 3:
            raise PreconditionError(f"vertex {v} has degree below 3")
        return cls(v, tuple(g.adj[v][:3]))


def _cover_for(g: Graph, proposed) -> tuple[int, ...]:
    """The proposed cover, or a minimum cover when that is strictly smaller."""
    proposed = tuple(sorted(set(proposed)))
    if not is_vertex_cover(g, proposed):
        raise PreconditionError("structural cover check failed")
    smaller = min_vertex_cover(g, limit=len(proposed) - 1)
    return proposed if smaller is None else smaller


def _cover_solve(inst: Instance, proposed, guard: int = COVER_GUARD) -> SolveResult:
    return solve_vertex_cover_fpt(inst, _cover_for(inst.graph, proposed), guard=guard)


def _require_free(g: Graph, pat, name: str):
    if find_embedding(g, pat) is not None:
        raise PreconditionError(f"graph contains {name}")


# --- H + sP2 peeling ---------------------------------------------------------

def solve_sp2_peel(inst: Instance, inner, s: int, base_solver: Solver, guard: int = COVER_GUARD) -> SolveResult:
    """Exact on (inner + sP2)-free graphs given an exact ``base_solver`` for inner-free ones.

    Any copy of inner + (s-1)P2 covers every edge, so the vertex cover
    solver applies; otherwise the graph is free of it and we recurse.
    """
    if s < 0:
        raise ValueError("negative P2 count")
    g = inst.graph
    while s > 0:
        pat = PlusP2(inner, s - 1) if s > 1 else inner
        emb = find_embedding(g, pat)
        if emb is not None:
            return _cover_solve(inst, emb.image, guard)
        s -= 1
    return base_solver(inst)


# --- 2K13-free -----------------------------------------------------------------

def _is_fan(g: Graph, apex: int) -> bool:
    rest = Graph.from_edges(g.n, [e for e in g.edges if apex not in e])
    return rest.max_degree() <= 2 and rest.is_forest()


class _TwoClawFree:
    def __init__(self, two_paths: int, branches: int):
        self.paths = BoundedTwoPathSolver(two_paths)
        self.branches = branches

    def tail(self, inst: Instance) -> SolveResult:
        """Blocks left after the hub branching: cycles, fans or few 2-paths."""
        g = inst.graph
        if g.max_degree() <= 2:
            return sf_on_cycle_path_union(inst)
        apex = max(range(g.n), key=lambda x: (g.degree(x), -x))
        if _is_fan(g, apex):
            return sf_on_fan(inst, apex)
        return self.paths.solve(inst)

    def block(self, inst: Instance) -> SolveResult:
        g = inst.graph
        if g.max_degree() <= 2:
            return sf_on_cycle_path_union(inst)
        v = max(range(g.n), key=lambda x: (g.degree(x), -x))
        if g.degree(v) <= 6:
            return self.paths.solve(inst)
        return self.hub_branch(inst, Antares.around(g, v))

    def hub_branch(self, inst: Instance, ant: Antares) -> SolveResult:
        g = inst.graph
        v = ant.hub
        for u in range(g.n):
            if u != v and g.degree(u) > 6:
                raise PreconditionError("two vertices of degree above 6")
        choices = []
        for path in antares_paths(g, ant):
            pos = [k for k, x in enumerate(path) if g.has_edge(v, x)]
            options = {frozenset(norm_edge(v, path[k]) for k in kept) for kept in kept_hub_sets(pos)}
            choices.append(sorted(options, key=lambda o: (len(o), sorted(o))))
        count = math.prod(len(c) for c in choices)
        if count > self.branches:
            raise GuardExceeded("hub branches (use the oracle instead)", self.branches, count)
        hub_edges = {e for c in choices for o in c for e in o}
        lb = terminal_lower_bound(inst)
        best = INFEASIBLE
        seen = set()
        for pick in itertools.product(*choices):
            kept = set().union(*pick) if pick else set()
            drop = hub_edges - kept
            h = Graph.from_edges(g.n, [e for e in g.edges if e not in drop])
            if h.edges in seen:
                continue
            seen.add(h.edges)
            res = solve_via_blocks(Instance(h, inst.pairs), self.tail)
            best = best_of([best, res])
            if best.feasible and best.value <= lb:
                break
        return best


def antares_paths(g: Graph, ant: Antares) -> list[list[int]]:
    """Components of G - A as vertex lists in path order; raises if one is not a path."""
    gone = set(ant.vertices)
    rest = Graph.from_edges(g.n, [e for e in g.edges if e[0] not in gone and e[1] not in gone])
    out = []
    for comp in rest.components():
        if comp[0] in gone:
            continue
        sub = [x for x in comp]
        ends = [x for x in sub if rest.degree(x) <= 1]
        if rest.max_degree() > 2 or not ends:
            raise PreconditionError("G - A is not a union of paths")
        order = [min(ends)]
        prev = -1
        while len(order) < len(sub):
            nxt = [y for y in rest.adj[order[-1]] if y != prev]
            prev = order[-1]
            order.append(nxt[0])
        out.append(order)
    return out


def kept_hub_sets(pos: list[int]):
    """Kept hub-neighbour positions on one path, over every guess of end pieces.

    A kept set is a run of consecutive hub neighbours (the middle pieces)
    plus at most one hub neighbour before it and one after it (the edges
    of the first and last piece).  The empty set covers an unused path.
    """
    m = len(pos)
    yield ()
    for lo in range(m + 1):
        for hi in range(lo, m + 1):
            run = pos[lo:hi]
            for a in [None] + pos[:lo]:
                for b in [None] + pos[hi:]:
                    yield tuple(x for x in (a, *run, b) if x is not None)


def solve_2k13_free(inst: Instance, *, check: bool = True, two_paths: int = TWO_PATH_GUARD,
                    branches: int = BRANCH_GUARD) -> SolveResult:
    """Exact Steiner forest on 2K13-subgraph-free graphs."""
    g = inst.graph
    if g.max_degree() <= 2:
        return sf_on_cycle_path_union(inst)
    if check:
        _require_free(g, TWO_K13, "2K13")
    return solve_via_blocks(inst, _TwoClawFree(two_paths, branches).block)


# --- (2K13 + P3)-free ----------------------------------------------------------

def solve_2k13_p3_free(inst: Instance, *, check: bool = True, guard: int = 16,
                       two_paths: int = TWO_PATH_GUARD, branches: int = BRANCH_GUARD) -> SolveResult:
    """Exact on (2K13+P3)-free graphs via the two claw centres as a 2-deletion set."""
    g = inst.graph
    if not inst.pairs:
        return SolveResult.from_edges([])
    if check:
        _require_free(g, TWO_K13_P3, "2K13+P3")
    emb = find_embedding(g, TWO_K13)
    if emb is None:
        return solve_2k13_free(inst, check=False, two_paths=two_paths, branches=branches)
    roots = (emb.vertices[0], emb.vertices[4])
    X = extension_edges(g, roots)
    # any pair is a valid deletion set for the extension solver; prefer the smallest X
    if len(X) > 0 and g.n <= 60:
        for pair in itertools.combinations(range(g.n), 2):
            other = extension_edges(g, pair)
            if len(other) < len(X):
                roots, X = pair, other
    rest = Graph.from_edges(g.n, [e for e in g.edges if e not in set(X)])
    if not is_c_deletion_set(rest, roots, 2):
        raise PreconditionError("claw centres are not a 2-deletion set of G - X")
    return solve_2ds2_extension(inst, X, dset=roots, guard=guard)


# --- S114-free -----------------------------------------------------------------

def _s114_block(inst: Instance) -> SolveResult:
    g = inst.graph
    emb = find_embedding(g, SubdividedClaw(1, 1, 3))
    if emb is None:
        emb = find_embedding(g, SubdividedClaw(1, 1, 2))
        if emb is None:
            if find_embedding(g, K13) is None:
                return sf_on_cycle_path_union(inst)
            # a 2-connected graph with a claw but no S112 has four vertices
            if g.n > 4:
                raise PreconditionError("S112-free block with a claw has more than four vertices")
            return _cover_solve(inst, range(g.n))
        return _cover_solve(inst, emb.vertices)
    s, b, c, a1, a2, a3 = emb.vertices
    comps = s114_components(g, emb)
    big = [comp for comp in comps if len(comp) >= 2]
    if len(big) > 3 or any(len(comp) > 3 for comp in big):
        raise PreconditionError("component structure contradicts S114-freeness")
    cover = {s, a1, b, c, a2}.union(*big) if big else {s, a1, b, c, a2}
    return _cover_solve(inst, cover)


def s114_components(g: Graph, emb: Embedding) -> list[list[int]]:
    """Components of G minus the image of an S113 embedding."""
    gone = set(emb.vertices)
    rest = Graph.from_edges(g.n, [e for e in g.edges if e[0] not in gone and e[1] not in gone])
    return [comp for comp in rest.components() if comp[0] not in gone]


def solve_s114_free(inst: Instance, *, check: bool = True) -> SolveResult:
    """Exact on S114-subgraph-free graphs; every block has a cover of at most 14 vertices."""
    if check:
        _require_free(inst.graph, S114, "S114")
    return solve_via_blocks(inst, _s114_block)


# --- P9-free --------------------------------------------------------------------

def _p9_block(inst: Instance) -> SolveResult:
    g = inst.graph
    path = longest_path(g, 9)
    r = len(path)
    if r >= 9:
        raise PreconditionError("graph contains P9")
    if r <= 5:
        return _s114_block(inst)
    if is_vertex_cover(g, path):
        return _cover_solve(inst, path)
    if r == 8:
        dset = c_deletion_set(g, 2, 2)
        if dset is not None:
            return solve_2ds2(inst, dset)
    raise PreconditionError("block has neither a path cover nor a 2-deletion set of size 2")


def solve_p9_free(inst: Instance, *, check: bool = True) -> SolveResult:
    """Exact on P9-subgraph-free graphs by the longest path in every block."""
    if check and len(longest_path(inst.graph, 9)) >= 9:
        raise PreconditionError("graph contains P9")
    return solve_via_blocks(inst, _p9_block)


# --- (2P4 + P3)-free -------------------------------------------------------------

def _2p4_p3_block(inst: Instance) -> SolveResult:
    g = inst.graph
    path = longest_path(g, 9)
    if len(path) < 9:
        return _p9_block(inst)
    return _cover_solve(inst, path)


def solve_2p4_p3_free(inst: Instance, *, check: bool = True) -> SolveResult:
    """Exact on (2P4+P3)-free graphs: a P9 in a block covers it."""
    if not inst.pairs:
        return SolveResult.from_edges([])
    if check:
        _require_free(inst.graph, TWO_P4_P3, "2P4+P3")
    return solve_via_blocks(inst, _2p4_p3_block)


# --- classification --------------------------------------------------------------

PEEL_BASES = (
    ("2k13+p3", TWO_K13_P3),
    ("2p4+p3", TWO_P4_P3),
    ("p9", Path(9)),
    ("s114", S114),
)


@dataclass
class ClassReport:
    """Class memberships; ``*_witness`` holds an embedding when the graph is not free."""

    forest: bool
    max_degree_le2: bool
    vertex_cover: tuple[int, ...] | None
    deletion_set: tuple[int, ...] | None
    witnesses: dict[str, Embedding | None] = field(default_factory=dict)
    peel_depth: dict[str, int | None] = field(default_factory=dict)

    def free(self, name: str) -> bool:
        return self.witnesses[name] is None

    def summary(self, base: int = 0) -> dict:
        """Flat dict of flags; vertex ids shifted by ``base`` (1 for file ids)."""

        def ids(vs):
            return None if vs is None else [v + base for v in vs]

        out = {
            "forest": self.forest,
            "max-degree-2": self.max_degree_le2,
            "vertex-cover": ids(self.vertex_cover),
            "2-deletion-set": ids(self.deletion_set),
        }
        for name, emb in self.witnesses.items():
            out[f"{name}-free"] = emb is None
            if emb is not None:
                out[f"{name}-witness"] = ids(emb.vertices)
        for name, s in self.peel_depth.items():
            out[f"{name}+sP2-free-at-s"] = s
        return out


CLASS_PATTERNS = (
    ("p9", Path(9)),
    ("s114", S114),
    ("2k13", TWO_K13),
    ("2k13+p3", TWO_K13_P3),
    ("2p4+p3", TWO_P4_P3),
)


def classify(g: Graph, limits: Limits = DEFAULT_LIMITS) -> ClassReport:
    witnesses = {name: find_embedding(g, pat) for name, pat in CLASS_PATTERNS}
    peel: dict[str, int | None] = {}
    for name, base in PEEL_BASES:
        peel[name] = None
        for s in range(1, limits.peel + 1):
            if find_embedding(g, PlusP2(base, s)) is None:
                peel[name] = s
                break
    return ClassReport(
        forest=g.is_forest(),
        max_degree_le2=g.max_degree() <= 2,
        vertex_cover=min_vertex_cover(g, limits.vc),
        deletion_set=c_deletion_set(g, 2, 2),
        witnesses=witnesses,
        peel_depth=peel,
    )


# --- routing ---------------------------------------------------------------------

_PEEL_SOLVERS = {
    "2k13+p3": lambda inst: solve_2k13_p3_free(inst, check=False),
    "2p4+p3": lambda inst: solve_2p4_p3_free(inst, check=False),
    "p9": lambda inst: solve_p9_free(inst, check=False),
    "s114": lambda inst: solve_s114_free(inst, check=False),
}
_PEEL_PATTERNS = dict(PEEL_BASES)


def _oracle(inst: Instance, limits: Limits) -> SolveResult:
    try:
        return sf_subset_enum(inst, limits.budget)
    except GuardExceeded:
        return sf_partition_oracle(inst, limits.budget)


def _candidates(inst: Instance, limits: Limits):
    """Yield ``(route, thunk)`` in priority order, computing class tests lazily."""
    g = inst.graph
    if g.is_forest():
        yield "forest", lambda: sf_on_forest(inst)
    if g.max_degree() <= 2:
        yield "degree2", lambda: sf_on_cycle_path_union(inst)
    cover = min_vertex_cover(g, limits.vc)
    if cover is not None:
        yield "vertex-cover-fpt", lambda: solve_vertex_cover_fpt(inst, cover, guard=max(limits.vc, 1))
    dset = c_deletion_set(g, 2, 2)
    if dset is not None:
        yield "2-deletion-set", lambda: solve_2ds2(inst, dset)
    if len(longest_path(g, 9)) < 9:
        yield "p9-free", lambda: solve_p9_free(inst, check=False)
    if find_embedding(g, S114) is None:
        yield "s114-free", lambda: solve_s114_free(inst, check=False)
    if find_embedding(g, TWO_K13) is None:
        yield "2k13-free", lambda: solve_2k13_free(inst, check=False, two_paths=limits.two_paths,
                                                   branches=limits.branches)
    if find_embedding(g, TWO_K13_P3) is None:
        yield "2k13+p3-free", lambda: solve_2k13_p3_free(inst, check=False, guard=limits.extension)
    if find_embedding(g, TWO_P4_P3) is None:
        yield "2p4+p3-free", lambda: solve_2p4_p3_free(inst, check=False)
    for s in range(1, limits.peel + 1):
        for name, base in PEEL_BASES:
            if find_embedding(g, PlusP2(base, s)) is None:
                yield f"{name}+{s}p2-peel", (
                    lambda b=base, s=s, f=_PEEL_SOLVERS[name]: solve_sp2_peel(inst, b, s, f))
    yield "oracle", lambda: _oracle(inst, limits)


ROUTE_NAMES = {
    "forest": "forest",
    "degree2": "degree2",
    "vc": "vertex-cover-fpt",
    "2ds2": "2-deletion-set",
    "p9": "p9-free",
    "s114": "s114-free",
    "2k13": "2k13-free",
    "2k13p3": "2k13+p3-free",
    "2p4p3": "2p4+p3-free",
    "oracle": "oracle",
}


def solve(inst: Instance, limits: Limits = DEFAULT_LIMITS, route: str = "auto") -> tuple[SolveResult, str]:
    """Solve by the first applicable route; returns the result and the route name.

    Routes that exceed a guard are skipped.  ``route`` forces one route by
    its short name (see ``ROUTE_NAMES``).
    """
    if route != "auto" and route not in ROUTE_NAMES:
        raise ValueError(f"unknown route {route!r}")
    if not inst.pairs:
        return SolveResult.from_edges([]), "trivial"
    wanted = ROUTE_NAMES.get(route)
    guards: list[GuardExceeded] = []
    for name, thunk in _candidates(inst, limits):
        if wanted is not None and name != wanted:
            continue
        try:
            return thunk(), name
        except GuardExceeded as err:
            guards.append(err)
    if wanted is not None and not guards:
        raise PreconditionError(f"route {route!r} does not apply to this instance")
    raise Unsupported(guards)


def solve_components(inst: Instance, limits: Limits = DEFAULT_LIMITS) -> SolveResult:
    """Route each terminal-carrying component independently."""
    return by_components(inst, lambda sub: solve(sub, limits)[0])


__all__ = [
    "Antares",
    "ClassReport",
    "DEFAULT_LIMITS",
    "Limits",
    "ROUTE_NAMES",
    "Unsupported",
    "antares_paths",
    "classify",
    "kept_hub_sets",
    "s114_components",
    "solve",
    "solve_2k13_free",
    "solve_2k13_p3_free",
    "solve_2p4_p3_free",
    "solve_p9_free",
    "solve_s114_free",
    "solve_sp2_peel",
]
