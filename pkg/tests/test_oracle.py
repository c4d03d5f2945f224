import pytest
from hypothesis import given

from conftest import certified, cycle, instances, make, path
from steinerforest.core import Graph, GuardExceeded, Instance
from steinerforest.oracle import (
    OracleBudget,
    SteinerTable,
    set_partitions,
    sf_partition_oracle,
    sf_subset_enum,
    steiner_tree_dw,
)


def test_budget_must_be_positive():
    with pytest.raises(ValueError):
        OracleBudget(0, 6, 10)


def test_subset_enum_examples():
    assert sf_subset_enum(make(3, [(0, 1), (1, 2), (0, 2)], [(0, 1)])).value == 1
    assert sf_subset_enum(make(5, path(5), [(0, 2), (3, 4)])).value == 3
    assert not sf_subset_enum(make(4, [(0, 1), (2, 3)], [(0, 3)])).feasible
    assert sf_subset_enum(make(3, path(3))).value == 0


def test_subset_enum_guard():
    k5 = [(a, b) for a in range(8) for b in range(a + 1, 8)]
    with pytest.raises(GuardExceeded):
        sf_subset_enum(make(8, k5, [(0, 1)]))


def test_dreyfus_wagner_examples():
    assert steiner_tree_dw(Graph.from_edges(5, [(0, i) for i in range(1, 5)]), [1, 2, 3]).value == 3
    assert steiner_tree_dw(Graph.from_edges(6, path(6)), [0, 5]).value == 5
    assert steiner_tree_dw(Graph.from_edges(6, cycle(6)), [0, 2, 4]).value == 4
    assert not steiner_tree_dw(Graph.from_edges(4, [(0, 1), (2, 3)]), [0, 3]).feasible
    with pytest.raises(GuardExceeded):
        steiner_tree_dw(Graph.from_edges(12, path(12)), range(12))


def test_steiner_table_costs_every_subset():
    g = Graph.from_edges(6, cycle(6))
    table = SteinerTable(g, [0, 2, 4])
    assert table.cost(table.mask_of([0, 2])) == 2
    assert table.cost(table.mask_of([0])) == 0
    assert table.cost(table.mask_of([0, 2, 4])) == 4


def test_set_partitions_are_bell_numbers():
    assert [sum(1 for _ in set_partitions(k)) for k in range(7)] == [1, 1, 2, 5, 15, 52, 203]


def test_partition_oracle_examples():
    inst = make(5, path(5), [(0, 2), (3, 4)])
    assert sf_partition_oracle(inst).value == 3
    g = Graph.from_edges(6, cycle(6))
    one = Instance.make(g, [(0, 2), (2, 4)])
    assert sf_partition_oracle(one).value == steiner_tree_dw(g, [0, 2, 4]).value
    two = make(6, path(3) + [(3, 4), (4, 5)], [(0, 2), (3, 5)])
    assert sf_partition_oracle(two).value == 4
    many = make(14, path(14), [(i, i + 1) for i in range(0, 14, 2)])
    with pytest.raises(GuardExceeded):
        sf_partition_oracle(many)


@given(instances(max_n=7, max_pairs=4))
def test_oracles_agree(inst):
    a, b = sf_subset_enum(inst), sf_partition_oracle(inst)
    assert a.value == b.value
    assert certified(inst, a) and certified(inst, b)


@given(instances(min_n=2, max_n=7, max_pairs=3))
def test_adding_an_edge_never_hurts(inst):
    g = inst.graph
    missing = [(a, b) for a in range(g.n) for b in range(a + 1, g.n) if not g.has_edge(a, b)]
    if not missing:
        return
    bigger = Instance(Graph.from_edges(g.n, list(g.edges) + [missing[0]]), inst.pairs)
    assert sf_subset_enum(bigger).cost <= sf_subset_enum(inst).cost


@given(instances(max_n=5, max_pairs=2), instances(max_n=5, max_pairs=2))
def test_additive_over_components(a, b):
    n = a.graph.n
    edges = list(a.graph.edges) + [(u + n, v + n) for u, v in b.graph.edges]
    pairs = list(a.pairs) + [(s + n, t + n) for s, t in b.pairs]
    both = make(n + b.graph.n, edges, pairs)
    assert sf_subset_enum(both).cost == sf_subset_enum(a).cost + sf_subset_enum(b).cost
