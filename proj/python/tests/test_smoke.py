import pathlib

import pytest

import hetalign

DATA = pathlib.Path(__file__).resolve().parents[2] / "tests" / "data"

PATH_EDGES = "a b\nb c\n"
PATH_COLORS = "a red\nb red\nc blue\n"


def test_parse_and_round_trip():
    g = hetalign.ColoredGraph.parse(PATH_EDGES, PATH_COLORS)
    assert (g.node_count, g.edge_count, g.color_count) == (3, 2, 2)
    assert g.color(g.find("c")) == "blue"
    again = hetalign.ColoredGraph.parse(*g.to_text())
    assert again == g


def test_parse_error_carries_code_and_line():
    with pytest.raises(hetalign.Error) as info:
        hetalign.ColoredGraph.parse("a b\na a\n", PATH_COLORS)
    assert info.value.code == "SelfLoop"
    assert info.value.line == 2


def test_generate_is_deterministic():
    a = hetalign.ColoredGraph.generate(100, 300, colors=3, seed=5)
    b = hetalign.ColoredGraph.generate(100, 300, colors=3, seed=5)
    assert a.edge_count == 300 and a == b
    with pytest.raises(hetalign.Error):
        hetalign.ColoredGraph.generate(3, 5)


def test_default_weights_and_classify():
    schema = hetalign.WeightSchema()
    assert list(schema.weights) == [1.0, 0.9, 0.5, 0.4, 0.2, 0.1]
    assert schema.weight("gap_het") == 0.1
    g = hetalign.ColoredGraph.parse(PATH_EDGES, PATH_COLORS)
    a, b, c = (g.find(x) for x in "abc")
    assert hetalign.classify(hetalign.SeedPair(a, a), hetalign.SeedPair(b, b), g, g) == "match_hom"
    assert hetalign.classify(hetalign.SeedPair(a, a), hetalign.SeedPair(b, c), g, g) == "gap_het"
    assert hetalign.classify(hetalign.SeedPair(a, a), hetalign.SeedPair(b, c), g, g, delta=1) == "mismatch_het"


def test_self_alignment_is_all_matches():
    g = hetalign.ColoredGraph.generate(60, 150, seed=2)
    ag = hetalign.align(g, g, hetalign.identity_seeds(g), workers=3)
    hist = ag.class_histogram()
    assert ag.edge_count == g.edge_count
    assert hist["match_hom"] + hist["match_het"] == g.edge_count
    assert hetalign.align(g, g, hetalign.identity_seeds(g)).content_hash() == ag.content_hash()
    assert hetalign.AlignmentGraph.parse(ag.to_text()) == ag


def test_golden_alignment_matches_checked_in_file():
    g1 = hetalign.ColoredGraph.read(str(DATA / "g1_edges.txt"), str(DATA / "g1_colors.txt"))
    g2 = hetalign.ColoredGraph.read(str(DATA / "g2_edges.txt"), str(DATA / "g2_colors.txt"))
    seeds = hetalign.parse_seeds((DATA / "seeds.txt").read_text(), g1, g2)
    ag = hetalign.align(g1, g2, seeds)
    assert ag.to_text() == (DATA / "alignment_golden.txt").read_text()


def test_cluster_two_cliques():
    text = ["# two 4-cliques joined by a weak bridge", "nodes 8"]
    text += [f"{i}\t{i}\t{i}\t{i}\t{i}\t1" for i in range(8)]
    edges = [(i, j, 1.0) for block in (range(4), range(4, 8)) for i in block for j in block if i < j]
    edges.append((3, 4, 0.1))
    text.append(f"edges {len(edges)}")
    text += [f"{i}\t{j}\t{w}\tmatch_hom" for i, j, w in sorted(edges)]
    ag = hetalign.AlignmentGraph.parse("\n".join(text) + "\n")
    result = hetalign.cluster(ag)
    assert result.converged
    assert result.clusters == [[0, 1, 2, 3], [4, 5, 6, 7]]
    assert hetalign.intra_cluster_weights(ag, result) == [6.0, 6.0]


def test_bench_rows_and_table():
    nets = hetalign.benchmark_networks()
    assert len(nets) == 12 and nets[0] == ("N1", 9500, 341000)
    rows = hetalign.run_benchmark(scale=0.02, workers=[1, 2], repetitions=1)
    assert len(rows) == 24
    by_net = {}
    for r in rows:
        by_net.setdefault(r["network"], set()).add(r["content_hash"])
    assert all(len(h) == 1 for h in by_net.values())
    assert hetalign.physical_core_count() >= 1
