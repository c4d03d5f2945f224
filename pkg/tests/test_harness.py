import json
import random
import warnings

import pytest
from conftest import cycle, make, path
from hypothesis import given
from hypothesis import strategies as st

from steinerforest.core import Graph
from steinerforest.harness import (
    CyclePathUnion,
    Fan,
    GenSpec,
    HSubgraphFree,
    Planted2DS2,
    PlantedCover,
    SFPError,
    TreeDepth3,
    generate,
    normalize,
    parse_certificate,
    parse_instance,
    write_certificate,
    write_instance,
)
from steinerforest.harness.cli import main
from steinerforest.subgraph import S114, Path, find_embedding, is_c_deletion_set, vertex_cover_at_most

KINDS = [PlantedCover(3), Planted2DS2(), Fan(), CyclePathUnion(), HSubgraphFree(Path(9)), TreeDepth3()]


@pytest.mark.parametrize("kind", KINDS, ids=lambda k: type(k).__name__)
def test_generation_is_deterministic(kind):
    spec = GenSpec(kind, 14, 0.3, 3, seed=99)
    assert generate(spec) == generate(spec)
    assert generate(spec).instance.graph.n == 14


@given(st.integers(0, 2**64 - 1), st.integers(4, 16))
def test_planted_witnesses_verify(seed, n):
    g = generate(GenSpec(PlantedCover(3), n, 0.3, 2, seed)).instance.graph
    assert vertex_cover_at_most(g, 3) is not None
    gen = generate(GenSpec(Planted2DS2(), n, 0.3, 2, seed))
    assert is_c_deletion_set(gen.instance.graph, gen.witness["deletion_set"], 2)
    gen = generate(GenSpec(Fan(), n, 0.3, 2, seed))
    apex = gen.witness["apex"]
    rest = Graph.from_edges(n, [e for e in gen.instance.graph.edges if apex not in e])
    assert rest.max_degree() <= 2 and rest.is_forest()


@given(st.integers(0, 2**64 - 1), st.integers(1, 20))
def test_tree_depth3_is_p8_free(seed, n):
    gen = generate(GenSpec(TreeDepth3(), n, 0.5, 2, seed))
    assert find_embedding(gen.instance.graph, Path(8)) is None
    parent = gen.witness["parent"]
    for u, v in gen.instance.graph.edges:
        anc = {u}
        x = u
        while parent[x] != -1:
            x = parent[x]
            anc.add(x)
        below = {v}
        x = v
        while parent[x] != -1:
            x = parent[x]
            below.add(x)
        assert v in anc or u in below  # every edge joins an ancestor and a descendant


def test_h_free_generator_avoids_pattern():
    gen = generate(GenSpec(HSubgraphFree(S114), 12, 0.4, 3, seed=5))
    assert find_embedding(gen.instance.graph, S114) is None
    assert gen.witness["repairs"] >= 0


def test_bad_specs():
    with pytest.raises(ValueError):
        GenSpec(Fan(), 0)
    with pytest.raises(ValueError):
        GenSpec(Fan(), 5, edge_prob=1.5)
    with pytest.raises(ValueError):
        GenSpec(Fan(), 5, seed=-1)


# --- SFP ---------------------------------------------------------------------------

MINIMAL = "SFP 1\nSECTION Graph\nNodes 1\nEND\nSECTION Pairs\nEND\nEOF\n"


def test_minimal_file():
    inst = parse_instance(MINIMAL)
    assert inst.graph.n == 1 and inst.graph.m == 0 and inst.pairs == ()


def test_round_trip_many():
    rng = random.Random(3)
    for _ in range(1000):
        n = rng.randint(1, 12)
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3]
        rng.shuffle(edges)
        edges = [(b, a) if rng.random() < 0.5 else (a, b) for a, b in edges]
        pairs = [(s, t) for s, t in ((rng.randrange(n), rng.randrange(n)) for _ in range(3)) if s != t]
        inst = make(n, edges, pairs)
        assert parse_instance(write_instance(inst)) == normalize(inst)


def test_comments_and_blank_lines():
    text = "# header\nSFP 1\n\nSECTION Graph  # g\nNodes 3\nEdges 2\nE 1 2\nE 2 3\nEND\nSECTION Pairs\nP 1 3\nEND\nEOF\n"
    inst = parse_instance(text)
    assert inst.graph.m == 2 and inst.pairs == ((0, 2),)


@pytest.mark.parametrize("body,fragment", [
    ("Nodes 2\nE 1 1\n", "loop"),
    ("Nodes 2\nE 1 2\nE 2 1\n", "duplicate"),
    ("Nodes 2\nE 1 3\n", "out of range"),
    ("Nodes 2\nEdges 2\nE 1 2\n", "edge lines"),
    ("Nodes 0\n", "at least one"),
    ("Nodes 2\nE 1 x\n", "integer"),
])
def test_graph_section_errors(body, fragment):
    text = f"SFP 1\nSECTION Graph\n{body}END\nSECTION Pairs\nEND\nEOF\n"
    with pytest.raises(SFPError, match=fragment) as err:
        parse_instance(text)
    assert err.value.line is not None


@pytest.mark.parametrize("text", [
    "SFP 2\n",
    "SFP 1\nSECTION Graph\nNodes 2\nEND\nEOF\n",
    "SFP 1\nSECTION Pairs\nEND\nSECTION Graph\nNodes 2\nEND\nEOF\n",
    "SFP 1\nSECTION Graph\nNodes 2\nEND\nSECTION Pairs\nEND\n",
    "SFP 1\nSECTION Graph\nNodes 2\nSECTION Pairs\nEND\nEOF\n",
])
def test_structure_errors(text):
    with pytest.raises(SFPError):
        parse_instance(text)


def test_warnings_for_weights_and_trivial_pairs():
    text = "SFP 1\nSECTION Graph\nNodes 2\nE 1 2 5\nEND\nSECTION Pairs\nP 1 1\nP 1 2\nEND\nEOF\n"
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        inst = parse_instance(text)
    assert len(caught) == 2
    assert inst.pairs == ((0, 1),)


def test_certificate_round_trip():
    from steinerforest.core import ForestCertificate

    cert = ForestCertificate.of([(0, 1), (2, 1)])
    assert parse_certificate(write_certificate(cert)) == cert
    with pytest.raises(SFPError):
        parse_certificate("E 0 1\n")


# --- CLI -----------------------------------------------------------------------------

def _write(tmp_path, inst, name="g.sfp"):
    p = tmp_path / name
    p.write_text(write_instance(inst))
    return str(p)


def test_cli_solve_and_check(tmp_path, capsys):
    f = _write(tmp_path, make(6, cycle(6), [(0, 3), (1, 2)]))
    assert main(["solve", f, "--emit-certificate"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "route degree2" and out[1] == "value 3"
    cert = tmp_path / "c.txt"
    cert.write_text("\n".join(out[2:]) + "\n")
    assert main(["check", f, str(cert)]) == 0
    assert capsys.readouterr().out.strip() == "valid size 3"
    cert.write_text("E 1 2\n")
    assert main(["check", f, str(cert)]) == 1


def test_cli_infeasible(tmp_path, capsys):
    f = _write(tmp_path, make(4, [(0, 1), (2, 3)], [(0, 2)]))
    assert main(["solve", f]) == 2
    assert "INFEASIBLE" in capsys.readouterr().out


def test_cli_unsupported(tmp_path, capsys):
    rng = random.Random(7)
    n = 40
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.5]
    f = _write(tmp_path, make(n, edges, [(rng.randrange(n), rng.randrange(n)) for _ in range(12)]))
    assert main(["solve", f]) == 3
    assert capsys.readouterr().out.startswith("UNSUPPORTED")


def test_cli_errors(tmp_path, capsys):
    bad = tmp_path / "bad.sfp"
    bad.write_text("SFP 1\nSECTION Graph\nNodes 2\nE 1 1\nEND\nSECTION Pairs\nEND\nEOF\n")
    assert main(["solve", str(bad)]) == 1
    assert main(["solve", str(tmp_path / "missing.sfp")]) == 1
    f = _write(tmp_path, make(4, cycle(4), [(0, 2)]))
    assert main(["solve", f, "--route", "forest"]) == 1
    assert "error" in capsys.readouterr().err


def test_cli_classify(tmp_path, capsys):
    f = _write(tmp_path, make(12, path(12), [(0, 11)]))
    assert main(["classify", f]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["forest"] and not report["p9-free"]
    assert len(report["p9-witness"]) == 9 and min(report["p9-witness"]) >= 1


def test_cli_gen_and_bench(tmp_path, capsys):
    out = tmp_path / "x.sfp"
    assert main(["gen", "--kind", "planted-cover", "--n", "20", "--k", "4", "--seed", "1", "-o", str(out)]) == 0
    assert parse_instance(out.read_text()).graph.n == 20
    assert main(["bench", "--count", "4"]) == 0
    rows = capsys.readouterr().out.splitlines()
    assert rows[0] == "instance,route,value,wall_time" and len(rows) == 5
