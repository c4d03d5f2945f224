import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import certified, cycle, make, path
from steinerforest.core import Graph, GuardExceeded, Instance, PreconditionError, schools_of
from steinerforest.fpt import (
    enumerate_pattern_forests,
    extension_edges,
    hierarchies,
    lift_terminals_off_cover,
    min_weight_perfect_matching,
    solve_2ds2,
    solve_2ds2_extension,
    solve_vertex_cover_fpt,
)
from steinerforest.fpt.patterns import count_hierarchies_bruteforce
from steinerforest.oracle import sf_partition_oracle, sf_subset_enum

INF = float("inf")


# --- matching -------------------------------------------------------------------

def test_matching_examples():
    assert min_weight_perfect_matching([[3]]) == ([0], 3)
    assert min_weight_perfect_matching([[1, 2], [2, 1]])[1] == 2
    assert min_weight_perfect_matching([[INF, INF], [1, 1]]) is None
    with pytest.raises(ValueError):
        min_weight_perfect_matching([[1, 2]])


@given(st.integers(1, 6).flatmap(
    lambda k: st.lists(st.lists(st.one_of(st.integers(0, 9), st.just(INF)), min_size=k, max_size=k),
                       min_size=k, max_size=k)))
def test_matching_matches_permutations(cost):
    k = len(cost)
    best = min((sum(cost[i][p[i]] for i in range(k)) for p in itertools.permutations(range(k))), default=0)
    got = min_weight_perfect_matching(cost)
    if best == INF:
        assert got is None
    else:
        assign, total = got
        assert total == best == sum(cost[i][assign[i]] for i in range(k))
        assert sorted(assign) == list(range(k))


# --- merge patterns -----------------------------------------------------------------

def test_pattern_counts():
    counts = [sum(1 for _ in enumerate_pattern_forests([z])) for z in range(1, 7)]
    assert counts == [count_hierarchies_bruteforce(z) for z in range(1, 7)]
    # the number of series-reduced rooted trees on labelled leaves
    assert counts == [1, 1, 4, 26, 236, 2752]
    (only,) = enumerate_pattern_forests([1])
    assert only.beta == 0
    (pair,) = enumerate_pattern_forests([2])
    assert pair.beta == 1


def test_hierarchy_nodes_partition_their_leaves():
    for tree in hierarchies(range(5)):
        root = tree[0]
        assert frozenset().union(*root) == frozenset(range(5))
        for node in tree:
            assert len(node) >= 2
            assert sum(len(g) for g in node) == len(frozenset().union(*node))


def test_pattern_guard():
    with pytest.raises(GuardExceeded):
        next(enumerate_pattern_forests([13]))


def test_budget_limits_internal_nodes():
    assert all(f.beta <= 2 for f in enumerate_pattern_forests([4, 3], budget=2))
    full = sum(1 for f in enumerate_pattern_forests([4, 3]) if f.beta <= 2)
    assert sum(1 for _ in enumerate_pattern_forests([4, 3], budget=2)) == full


# --- vertex cover ---------------------------------------------------------------------

def planted_cover(rng, k, n, p, npairs):
    cover = list(range(k))
    edges = {(a, b) for a, b in itertools.combinations(cover, 2) if rng.random() < p}
    edges |= {(c, x) for x in range(k, n) for c in cover if rng.random() < p}
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(npairs)]
    return make(n, sorted(edges), pairs), cover


def test_lift_terminals():
    inst = make(5, [(0, i) for i in range(1, 5)], [(1, 2)])
    lifted, ctx = lift_terminals_off_cover(inst, [0])
    assert lifted == inst and ctx.lift_count == 0
    inst = make(3, path(3), [(1, 2)])
    lifted, ctx = lift_terminals_off_cover(inst, [1])
    assert lifted.graph.n == 4 and ctx.lift_count == 1
    assert sf_subset_enum(lifted).value == sf_subset_enum(inst).value + 1
    inst = make(4, cycle(4), [(0, 2)])
    _, ctx = lift_terminals_off_cover(inst, [0, 2])
    assert ctx.lift_count == 2
    with pytest.raises(PreconditionError):
        lift_terminals_off_cover(inst, [0])


def test_vertex_cover_examples():
    star = make(5, [(0, i) for i in range(1, 5)], [(1, 2)])
    assert solve_vertex_cover_fpt(star, [0]).value == 2
    c6 = make(6, cycle(6), [(0, 3)])
    assert solve_vertex_cover_fpt(c6, [1, 3, 5]).value == 3
    with pytest.raises(GuardExceeded):
        solve_vertex_cover_fpt(make(14, path(14), [(0, 13)]), range(13), guard=12)


def test_vertex_cover_planted_40_vertices():
    rng = random.Random(11)
    for _ in range(5):
        inst, cover = planted_cover(rng, 5, 40, 0.3, 3)
        res = solve_vertex_cover_fpt(inst, cover)
        assert res.value == sf_partition_oracle(inst).value
        assert certified(inst, res)


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1))
def test_vertex_cover_matches_oracle(seed):
    rng = random.Random(seed)
    k = rng.randint(1, 5)
    inst, cover = planted_cover(rng, k, rng.randint(k + 1, 14), rng.uniform(0.2, 0.7), rng.randint(0, 4))
    res = solve_vertex_cover_fpt(inst, cover)
    assert res.value == sf_partition_oracle(inst).value
    assert certified(inst, res)


# --- 2-deletion sets ---------------------------------------------------------------------

def planted_hubs(rng, max_edges=18):
    n, edges = 2, set()
    if rng.random() < 0.3:
        edges.add((0, 1))
    while len(edges) < max_edges and n < 16:
        size = rng.choice([1, 2, 2])
        vs = list(range(n, n + size))
        n += size
        if size == 2:
            edges.add((vs[0], vs[1]))
        for x in vs:
            for h in (0, 1):
                if rng.random() < 0.55:
                    edges.add((h, x))
    pairs = [(rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 5))]
    return make(n, sorted(edges), pairs)


def test_2ds2_examples():
    p9 = make(9, path(9), [(0, 8)])
    with pytest.raises(PreconditionError):
        solve_2ds2(p9)
    p8 = make(8, path(8), [(0, 7)])
    assert solve_2ds2(p8).value == 7
    # hubs 0 and 1 non-adjacent, joined through size-2 components and a singleton
    inst = make(6, [(0, 2), (2, 3), (3, 1), (0, 4), (4, 1), (0, 5)], [(0, 1)])
    assert solve_2ds2(inst).value == 2
    with pytest.raises(PreconditionError):
        solve_2ds2(p8, dset=(0, 1))


def test_2ds2_planted_partition_oracle():
    rng = random.Random(3)
    done = 0
    while done < 10:
        inst = planted_hubs(rng, max_edges=40)
        if schools_of(inst, ground=()).terminal_count > 3:
            continue
        res = solve_2ds2(inst, (0, 1))
        assert res.value == sf_partition_oracle(inst).value
        assert certified(inst, res)
        done += 1


@settings(max_examples=80)
@given(st.integers(0, 2**32 - 1))
def test_2ds2_matches_oracle(seed):
    inst = planted_hubs(random.Random(seed))
    res = solve_2ds2(inst, (0, 1))
    assert res.value == sf_subset_enum(inst).value
    assert certified(inst, res)


def planted_extension(rng):
    inst = planted_hubs(rng, max_edges=14)
    n = inst.graph.n
    extra = list(range(n, n + rng.randint(1, 3)))
    cand = [(a, b) for a in extra for b in [0, 1] + extra if a != b]
    rng.shuffle(cand)
    X = sorted({tuple(sorted(e)) for e in cand[:3]})
    edges = list(inst.graph.edges) + X
    total = n + len(extra)
    pairs = [(rng.randrange(total), rng.randrange(total)) for _ in range(rng.randint(1, 4))]
    return make(total, edges, pairs), X


def test_extension_examples():
    inst = planted_hubs(random.Random(5))
    assert solve_2ds2_extension(inst, []).value == solve_2ds2(inst).value
    # a pendant edge to a terminal must be used
    base = make(4, [(0, 2), (1, 2), (0, 3)], [(3, 1)])
    res = solve_2ds2_extension(base, [(0, 3)], dset=(0, 1))
    assert res.value == 3 and (0, 3) in res.certificate.edges
    with pytest.raises(GuardExceeded):
        solve_2ds2_extension(make(14, path(14), [(0, 1)]), path(14), guard=12)


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_extension_matches_oracle(seed):
    inst, X = planted_extension(random.Random(seed))
    res = solve_2ds2_extension(inst, X, dset=(0, 1))
    assert res.value == sf_subset_enum(inst).value
    assert certified(inst, res)


def test_extension_edges_touch_big_components():
    g = Graph.from_edges(7, [(0, 2), (2, 3), (3, 4), (1, 5), (5, 6)])
    assert extension_edges(g, (0, 1)) == [(0, 2), (2, 3), (3, 4)]
    assert extension_edges(Graph.from_edges(4, [(0, 2), (2, 3), (1, 3)]), (0, 1)) == []


def test_extension_rejects_bad_endpoints():
    inst = Instance.make(Graph.from_edges(5, [(0, 2), (2, 3), (3, 4)]), [(0, 4)])
    with pytest.raises(PreconditionError):
        solve_2ds2_extension(inst, [(2, 3)], dset=(0, 1))
