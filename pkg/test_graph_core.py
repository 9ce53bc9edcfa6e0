from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from errors import DomainError
from formats import read_graph
from graph_core import (
    CliquePartition,
    Graph,
    bipartition,
    clique_partitions,
    complete_bipartite,
    complete_graph,
    connected_components,
    cycle_graph,
    degree,
    delete_closed,
    disjoint_union,
    empty_graph,
    ferrers_graph,
    find_odd_hole,
    has_odd_hole,
    is_balanced_complete_bipartite,
    is_clique,
    is_connected,
    is_independent,
    mask_of,
    neighborhood,
    path_graph,
    perfect_matching,
    trivial_partition,
    validate_partition,
)


@st.composite
def graphs(draw, max_n: int = 7):
    n = draw(st.integers(min_value=0, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


# ---------- construction ----------
def test_from_edges_normalises_and_ignores_labels_in_equality():
    a = Graph.from_edges(3, [(1, 0), (2, 1)], ["u", "v", "w"])
    b = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert a == b
    assert a.sorted_edges() == [(0, 1), (1, 2)]


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 1), (1, 0)], [(0, 3)]])
def test_from_edges_rejects_bad_edges(edges):
    with pytest.raises(DomainError):
        Graph.from_edges(3, edges)


def test_vertex_cap():
    with pytest.raises(DomainError):
        empty_graph(65)


# ---------- neighbourhoods ----------
def test_neighborhood_examples(data_path):
    c3 = read_graph(data_path("c3.txt"))
    assert neighborhood(c3, 0) == {1, 2}
    assert neighborhood(empty_graph(2), 1) == frozenset()
    ferrers = read_graph(data_path("ferrers.json"))
    assert {ferrers.label(v) for v in neighborhood(ferrers, 0)} == {"y1", "y2", "y3"}
    assert degree(ferrers, 0) == 3
    with pytest.raises(DomainError):
        neighborhood(c3, 3)


def test_delete_closed_examples(data_path):
    c3 = read_graph(data_path("c3.txt"))
    open_del = delete_closed(c3, [0])
    assert open_del.graph.sorted_edges() == [(0, 1)]
    assert open_del.kept == (1, 2)
    assert delete_closed(c3, [0], closed=True).graph.n == 0

    tau = read_graph(data_path("c3_tau.txt"))
    # removing the whisker x together with its closed neighbourhood {u, x}
    r = delete_closed(tau, [3], closed=True)
    assert [r.graph.label(v) for v in range(r.graph.n)] == ["v", "w", "y", "z"]
    named = {frozenset((r.graph.label(a), r.graph.label(b))) for a, b in r.graph.edges}
    assert named == {frozenset("vw"), frozenset("vy"), frozenset("wz")}
    assert r.lift([0, 2]) == (1, 4)


@given(graphs())
def test_delete_nothing_is_identity(G):
    r = delete_closed(G, [])
    assert r.graph == G
    assert r.kept == tuple(range(G.n))


# ---------- clique partitions ----------
def test_validate_partition_examples(data_path):
    c3 = read_graph(data_path("c3.txt"))
    assert validate_partition(c3, CliquePartition.of([[0, 1], [2]])).ok
    c3z = Graph.from_edges(4, c3.edges)
    report = validate_partition(c3z, CliquePartition.of([[0, 3], [1], [2]]))
    assert not report.ok
    assert report.clause == "clique"
    assert report.witness == (0, 3)


@pytest.mark.parametrize(
    "cliques, clause",
    [
        ([[0, 1], [1, 2]], "disjoint"),
        ([[0, 1]], "cover"),
        ([[0, 1, 2], [5]], "range"),
    ],
)
def test_validate_partition_names_the_first_broken_clause(cliques, clause):
    report = validate_partition(complete_graph(3), CliquePartition.of(cliques))
    assert not report.ok and report.clause == clause


@given(graphs())
def test_trivial_partition_always_valid(G):
    assert validate_partition(G, trivial_partition(G)).ok


def test_clique_partitions_counts():
    assert len(list(clique_partitions(complete_graph(3)))) == 5
    assert len(list(clique_partitions(path_graph(3)))) == 3
    assert len(list(clique_partitions(empty_graph(4)))) == 1
    with_empty = list(clique_partitions(path_graph(3), empty=2))
    assert all(len(pi.cliques[-1]) == 0 and len(pi.cliques[-2]) == 0 for pi in with_empty)


@given(graphs(max_n=6))
@settings(max_examples=40)
def test_every_enumerated_partition_is_valid(G):
    for pi in clique_partitions(G):
        assert validate_partition(G, pi).ok


# ---------- bipartiteness and odd holes ----------
def test_bipartition_examples(data_path):
    assert bipartition(path_graph(2)) == (frozenset({0}), frozenset({1}))
    assert bipartition(complete_graph(3)) is None
    ferrers = read_graph(data_path("ferrers.json"))
    assert bipartition(ferrers) == (frozenset({0, 1, 2}), frozenset({3, 4, 5}))
    v1, v2 = bipartition(Graph.from_edges(3, [(1, 2)]))
    assert 0 in v1


@given(graphs())
def test_bipartition_sides_are_independent(G):
    parts = bipartition(G)
    if parts is None:
        return
    v1, v2 = parts
    assert v1 | v2 == frozenset(range(G.n))
    assert is_independent(G, mask_of(v1)) and is_independent(G, mask_of(v2))
    assert not has_odd_hole(G)


def test_odd_hole_examples(data_path):
    assert sorted(find_odd_hole(cycle_graph(5))) == [0, 1, 2, 3, 4]
    assert find_odd_hole(complete_graph(3)) is None
    assert find_odd_hole(cycle_graph(6)) is None
    assert len(find_odd_hole(cycle_graph(7))) == 7
    assert sorted(find_odd_hole(read_graph(data_path("c5_pendant_triangle.txt")))) == [0, 1, 2, 3, 4]
    assert not has_odd_hole(complete_bipartite(3, 3))


def test_odd_hole_witness_is_an_induced_cycle():
    G = Graph.from_edges(7, [(i, (i + 1) % 7) for i in range(7)] + [(0, 3)])
    hole = find_odd_hole(G)
    assert hole is not None and len(hole) == 5
    for i, v in enumerate(hole):
        assert G.has_edge(v, hole[(i + 1) % len(hole)])


# ---------- named graphs ----------
def test_named_graphs():
    assert len(ferrers_graph((3, 2, 1)).edges) == 6
    assert is_balanced_complete_bipartite(complete_bipartite(2, 2))
    assert not is_balanced_complete_bipartite(complete_bipartite(2, 3))
    assert not is_balanced_complete_bipartite(perfect_matching(2))
    assert is_clique(complete_graph(4), 0b1111)
    assert connected_components(perfect_matching(2)) == [(0, 2), (1, 3)]
    with pytest.raises(DomainError):
        ferrers_graph((1, 2))


@given(graphs())
def test_networkx_round_trip(G):
    assert Graph.from_networkx(G.to_networkx()).edges == G.edges


def test_disjoint_union_and_connectivity():
    U = disjoint_union(path_graph(2), path_graph(3))
    assert U.n == 5
    assert U.edges == frozenset({(0, 1), (2, 3), (3, 4)})
    assert not is_connected(U)
    assert is_connected(cycle_graph(4))
    assert not is_connected(Graph(0, frozenset()))
    labelled = disjoint_union(path_graph(2).with_labels(["a", "b"]), empty_graph(1))
    assert labelled.labels == ("a", "b", "0")
