import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import cycle, instances, make, path
from steinerforest.core import (
    INFEASIBLE,
    ForestCertificate,
    Graph,
    Instance,
    SolveResult,
    best_of,
    contract_edge,
    delete_edges,
    delete_vertices,
    schools_of,
    terminal_lower_bound,
    validate_solution,
)
from steinerforest.oracle import greedy_forest, sf_subset_enum

TRIANGLE = [(0, 1), (1, 2), (0, 2)]


def test_graph_rejects_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(1, 1)])
    with pytest.raises(ValueError):
        Graph.from_edges(2, [(0, 1), (1, 0)])
    g = Graph.from_edges(2, [(0, 1), (1, 0), (1, 1)], merge=True)
    assert g.edges == ((0, 1),)


def test_graph_invariants():
    g = Graph.from_edges(5, [(3, 1), (0, 4), (1, 0)])
    assert g.edges == ((0, 1), (0, 4), (1, 3))
    assert g.adj[0] == (1, 4)
    assert sum(g.degree(v) for v in range(g.n)) == 2 * g.m


def test_instance_pairs_normalised():
    inst = Instance.make(Graph.from_edges(3, TRIANGLE), [(2, 0), (0, 2), (1, 1)])
    assert inst.pairs == ((0, 2),)
    with pytest.raises(ValueError):
        Instance(Graph.from_edges(3, TRIANGLE), ((1, 1),))


def test_validate_solution_examples():
    inst = make(3, TRIANGLE, [(0, 1)])
    assert validate_solution(inst, ForestCertificate.of([(0, 1)]))
    assert not validate_solution(inst, ForestCertificate.of(TRIANGLE))
    p3 = make(3, path(3), [(0, 2)])
    assert not validate_solution(p3, ForestCertificate.of([(0, 1)]))


def test_validate_solution_rejects_foreign_edges():
    with pytest.raises(ValueError):
        validate_solution(make(3, path(3), [(0, 2)]), ForestCertificate.of([(0, 2)]))


def test_schools_examples():
    sp = schools_of(make(4, [], [(0, 1), (1, 2)]))
    assert sp.schools[:1] == ((0, 1, 2),) and sp.terminal_count == 1
    sp = schools_of(make(2, [(0, 1)]), ground=[0, 1])
    assert sp.schools == ((0,), (1,)) and sp.terminal_count == 0
    sp = schools_of(make(4, [], [(0, 1), (2, 3)]), ground=())
    assert sp.schools == ((0, 1), (2, 3)) and sp.terminal_count == 2


@given(instances(max_n=8, max_pairs=5), st.randoms(use_true_random=False))
def test_schools_independent_of_pair_order(inst, rnd):
    pairs = list(inst.pairs)
    rnd.shuffle(pairs)
    again = Instance.make(inst.graph, [(t, s) for s, t in pairs])
    assert schools_of(again) == schools_of(inst)


def test_contract_edge_examples():
    g, vmap = contract_edge(Graph.from_edges(3, path(3)), (0, 1))
    assert g.n == 2 and g.edges == ((0, 1),) and vmap == [0, 0, 1]
    g, _ = contract_edge(Graph.from_edges(3, TRIANGLE), (1, 2))
    assert g.n == 2 and g.m == 1
    g, _ = contract_edge(Graph.from_edges(4, cycle(4)), (0, 1))
    assert g.n == 3 and g.m == 3
    with pytest.raises(ValueError):
        contract_edge(Graph.from_edges(3, path(3)), (0, 2))


@given(instances(min_n=2, max_n=8))
def test_contract_edge_drops_one_vertex(inst):
    g = inst.graph
    for e in g.edges:
        h, vmap = contract_edge(g, e)
        assert h.n == g.n - 1
        assert vmap[e[0]] == vmap[e[1]]


def test_delete_examples():
    h, vmap = delete_vertices(Graph.from_edges(3, path(3)), [1])
    assert h.n == 2 and h.m == 0 and vmap == [0, None, 1]
    h = delete_edges(Graph.from_edges(4, cycle(4)), [(0, 3)])
    assert h.edges == tuple(path(4))
    h, _ = delete_vertices(Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)]), [0])
    assert h.n == 3 and h.m == 0
    h, vmap = delete_edges(Graph.from_edges(3, path(3)), [(1, 2)], cleanup=True)
    assert h.n == 2 and vmap == [0, 1, None]
    with pytest.raises(ValueError):
        delete_edges(Graph.from_edges(3, path(3)), [(0, 2)])


def test_best_of_prefers_value_then_certificate():
    a = SolveResult.from_edges([(1, 2)])
    b = SolveResult.from_edges([(0, 2)])
    assert best_of([INFEASIBLE, a, b]) == b
    assert best_of([]) == INFEASIBLE


@given(instances(max_n=7, max_pairs=4))
def test_valid_certificates_are_at_least_optimal(inst):
    opt = sf_subset_enum(inst)
    greedy = greedy_forest(inst)
    if not opt.feasible:
        assert greedy is None
        return
    cert = ForestCertificate.of(greedy)
    assert validate_solution(inst, cert)
    assert terminal_lower_bound(inst) <= opt.value <= cert.size
