from __future__ import annotations

import pytest

from complex_core import cone, dim, f_vector, faces, h_vector, independence_complex, is_pure, pad
from errors import DomainError
from formats import read_graph
from graph_core import CliquePartition, Graph, clique_partitions, complete_graph, cycle_graph, empty_graph, path_graph
from search import enumerate_graphs, is_isomorphic
from whiskering import (
    clique_whisker,
    full_whiskering,
    is_full_clique_whiskering,
    strip_whiskers,
    whisker_clique,
)


def _instances(max_n: int):
    for n in range(max_n + 1):
        for G in enumerate_graphs(n):
            for pi in clique_partitions(G):
                yield G, pi


def test_whiskering_the_triangle(data_path):
    c3 = read_graph(data_path("c3.txt"))
    rho = clique_whisker(c3, CliquePartition.of([[0, 1, 2]]))
    assert rho.graph == complete_graph(4)
    assert rho.graph == read_graph(data_path("c3_rho.json"))
    assert clique_whisker(c3, CliquePartition.of([[0, 1], [2]])).graph == read_graph(data_path("c3_pi.txt"))
    tau = full_whiskering(c3)
    assert tau.graph == read_graph(data_path("c3_tau.json"))
    assert tau.whisker_map == (3, 4, 5)


def test_empty_clique_gives_an_isolated_whisker():
    wg = clique_whisker(empty_graph(1), CliquePartition.of([[0], []]))
    assert wg.graph.n == 3
    assert wg.graph.sorted_edges() == [(0, 1)]
    assert wg.graph.adj[2] == 0


def test_invalid_partition_is_rejected():
    with pytest.raises(DomainError):
        clique_whisker(path_graph(3), CliquePartition.of([[0, 2], [1]]))
    with pytest.raises(DomainError):
        whisker_clique(path_graph(3), [0, 2])


def test_whisker_clique_adds_one_vertex():
    G = whisker_clique(cycle_graph(4), [1, 2])
    assert G.n == 5
    assert sorted(v for v in range(4) if G.has_edge(v, 4)) == [1, 2]


def test_strip_whiskers_recovers_the_base():
    for G, pi in _instances(4):
        assert strip_whiskers(clique_whisker(G, pi)) == G


def test_pure_of_dimension_t_minus_one():
    for G, pi in _instances(5):
        delta = independence_complex(clique_whisker(G, pi).graph)
        assert is_pure(delta)
        assert dim(delta) == len(pi) - 1


@pytest.mark.slow
def test_pure_of_dimension_t_minus_one_full():
    for G, pi in _instances(6):
        delta = independence_complex(clique_whisker(G, pi).graph)
        assert is_pure(delta) and dim(delta) == len(pi) - 1


def _check_h_is_f(max_n: int) -> None:
    for G, pi in _instances(max_n):
        h = h_vector(independence_complex(clique_whisker(G, pi).graph))
        assert h == pad(f_vector(independence_complex(G)), len(h)), (sorted(G.edges), pi.as_lists())


def test_h_vector_of_whiskering_is_f_vector_of_base():
    _check_h_is_f(5)


@pytest.mark.slow
def test_h_vector_of_whiskering_is_f_vector_of_base_full():
    _check_h_is_f(6)


def test_empty_clique_makes_a_cone():
    G = path_graph(3)
    for pi in clique_partitions(G):
        plain = independence_complex(clique_whisker(G, pi).graph)
        coned = independence_complex(clique_whisker(G, pi.with_empty()).graph)
        assert faces(coned) == faces(cone(plain))


# ---------- recognition ----------
def test_recognition_examples(data_path):
    witness = is_full_clique_whiskering(read_graph(data_path("c3_tau.txt")))
    assert witness is not None
    assert is_isomorphic(witness.base.graph, complete_graph(3))
    assert is_full_clique_whiskering(cycle_graph(5)) is None

    edge = is_full_clique_whiskering(path_graph(2))
    assert edge is not None
    assert edge.base.graph.n == 1
    assert edge.partition.as_lists() == [[0]]


def test_recognition_round_trip():
    for G, pi in _instances(5):
        wg = clique_whisker(G, pi)
        witness = is_full_clique_whiskering(wg.graph)
        assert witness is not None, (G, pi)
        rebuilt = clique_whisker(witness.base.graph, witness.partition).graph
        assert is_isomorphic(rebuilt, wg.graph)


def test_recognition_rejects_graphs_without_simplicial_cover():
    assert is_full_clique_whiskering(cycle_graph(4)) is None
    assert is_full_clique_whiskering(Graph(0, frozenset())) is not None
