from __future__ import annotations

import networkx as nx
import pytest
import yaml
from hypothesis import given
from hypothesis import strategies as st

from complex_core import h_vector, independence_complex, is_pure
from errors import BudgetExceeded, DomainError, ParseError
from formats import read_graph
from graph_core import Graph, complete_graph, empty_graph
from search import (
    ScanReport,
    canonical_form,
    enumerate_bipartite_graphs,
    enumerate_graphs,
    flag_f_witness,
    is_isomorphic,
    realize_f_as_flag,
    run_scan,
    scan_bipartite,
    scan_conjecture,
    scan_h133,
    vd_convention_divergences,
)
from test_graph_core import graphs


# ---------- Canonical form ----------
@given(st.data())
def test_canonical_key_ignores_relabelling(data):
    G = data.draw(graphs(max_n=7))
    perm = data.draw(st.permutations(range(G.n)))
    H = Graph.from_edges(G.n, [(perm[u], perm[v]) for u, v in G.edges])
    cf = canonical_form(G)
    assert cf.key == canonical_form(H).key
    assert is_isomorphic(G, H)
    assert canonical_form(cf.graph).key == cf.key


def test_canonical_key_separates_classes():
    assert not is_isomorphic(Graph.from_edges(4, [(0, 1), (2, 3)]), Graph.from_edges(4, [(0, 1), (1, 2)]))
    assert not is_isomorphic(complete_graph(3), empty_graph(3))
    assert is_isomorphic(Graph(0, frozenset()), Graph(0, frozenset()))


# ---------- Enumeration ----------
@pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)])
def test_class_counts(n, count):
    assert len(list(enumerate_graphs(n))) == count


@pytest.mark.parametrize("n, count", [(1, 1), (2, 2), (3, 3), (4, 7), (5, 13), (6, 35), (7, 88)])
def test_bipartite_class_counts(n, count):
    assert len(list(enumerate_bipartite_graphs(n))) == count


def test_labeled_counts():
    assert len(list(enumerate_graphs(2, dedup=False))) == 2
    assert len(list(enumerate_graphs(3, dedup=False))) == 8
    assert len(list(enumerate_graphs(4, dedup=False))) == 64


def test_classes_match_the_graph_atlas():
    atlas = {}
    for g in nx.graph_atlas_g():
        atlas.setdefault(g.number_of_nodes(), set()).add(canonical_form(Graph.from_networkx(g)).key)
    for n in range(7):
        assert {canonical_form(G).key for G in enumerate_graphs(n)} == atlas[n]


def test_enumeration_is_sorted_by_key():
    keys = [canonical_form(G).key for G in enumerate_graphs(5)]
    assert keys == sorted(keys)


def test_enumeration_limits():
    with pytest.raises(BudgetExceeded):
        list(enumerate_graphs(10))
    with pytest.raises(BudgetExceeded):
        list(enumerate_graphs(8, dedup=False))
    with pytest.raises(BudgetExceeded):
        list(enumerate_bipartite_graphs(11))
    with pytest.raises(DomainError):
        list(enumerate_graphs(-1))


# ---------- Realisation ----------
def test_realize_examples():
    assert realize_f_as_flag((1, 3)) == complete_graph(3)
    assert realize_f_as_flag((1, 2, 1)) == empty_graph(2)
    assert realize_f_as_flag((1, 3, 3)) is None
    assert realize_f_as_flag((1,)) == Graph(0, frozenset())
    assert realize_f_as_flag((1, 3, 0, 0)) == complete_graph(3)
    assert realize_f_as_flag((1, 4), n_max=3) is None


def test_realize_rejects_non_vectors():
    with pytest.raises(DomainError):
        realize_f_as_flag((2, 1))
    with pytest.raises(DomainError):
        realize_f_as_flag((1, -1))
    with pytest.raises(DomainError):
        realize_f_as_flag(())


def test_flag_f_witness(data_path):
    wg = flag_f_witness((1, 3))
    assert wg is not None
    assert is_isomorphic(wg.graph, read_graph(data_path("c3_tau.txt")))
    assert h_vector(independence_complex(wg.graph)) == (1, 3, 0, 0)
    assert flag_f_witness((1, 3, 3)) is None


# ---------- Scans ----------
def test_conjecture_holds_on_small_graphs():
    report = scan_conjecture(5)
    assert report.held
    assert report.complete
    assert report.totals["graphs"] == 1 + 1 + 2 + 4 + 11 + 34
    assert report.totals["graphs"] == sum(report.totals.get(t, 0) for t in ("impure", "not_vd", "pure_vd"))
    assert len(report.records) == report.totals["pure_vd"]
    assert all(r.cm for r in report.records)


@pytest.mark.slow
def test_conjecture_holds_on_six_vertices():
    assert scan_conjecture(6).held


def test_scan_records_are_realised():
    for record in scan_conjecture(4).records:
        assert record.realizer is not None
        assert is_pure(independence_complex(record.graph))


def test_bipartite_scan(data_path):
    report = scan_bipartite(6)
    assert report.held and report.bipartite_only
    ferrers = read_graph(data_path("ferrers.json"))
    matches = [r for r in report.records if is_isomorphic(r.graph, ferrers)]
    assert len(matches) == 1
    assert matches[0].realizer == complete_graph(3)
    assert matches[0].h == (1, 3)


@pytest.mark.slow
def test_bipartite_scan_full():
    assert scan_bipartite(10).held


def test_scan_is_deterministic():
    first = scan_conjecture(4).to_json()
    assert scan_conjecture(4).to_json() == first
    assert scan_conjecture(4, jobs=2).to_json() == first


def test_labeled_and_dedup_scans_agree():
    dedup = scan_conjecture(4)
    labeled = scan_conjecture(4, dedup=False)
    assert labeled.held
    assert {r.key for r in labeled.records} == {r.key for r in dedup.records}


def test_resume_matches_a_full_run():
    full = scan_conjecture(4)
    snapshots = []
    run_scan("h-is-f", 4, progress_every=5, checkpoint=lambda r: snapshots.append(r.to_json()))
    assert snapshots and snapshots[0]["totals"]["graphs"] == 5
    assert snapshots[0]["complete"] is False

    resumed = scan_conjecture(4, resume=ScanReport.from_json(snapshots[0]))
    assert resumed.to_json() == full.to_json()


def test_resume_rejects_a_mismatch():
    snapshots = []
    run_scan("h-is-f", 4, progress_every=5, checkpoint=lambda r: snapshots.append(r.to_json()))
    broken = dict(snapshots[0], last={"n": 4, "key": "111111"})
    with pytest.raises(ParseError):
        scan_conjecture(4, resume=ScanReport.from_json(broken))
    with pytest.raises(ParseError):
        scan_bipartite(4, resume=ScanReport.from_json(snapshots[0]))


def test_scan_arguments():
    with pytest.raises(ParseError):
        run_scan("h-is-g", 3)
    with pytest.raises(BudgetExceeded):
        scan_conjecture(10)
    with pytest.raises(ParseError, match="labeled"):
        run_scan("h-is-f-bipartite", 4, dedup=False)


def test_report_round_trip():
    report = scan_bipartite(5)
    assert ScanReport.from_json(report.to_json()) == report
    assert yaml.safe_load(report.to_yaml()) == report.to_json()
    with pytest.raises(ParseError):
        ScanReport.from_json({"conjecture": "h-is-f"})


def test_no_graph_has_h133():
    result = scan_h133(5)
    assert result.confirmed
    assert result.checked == 53
    assert result.hits == ()


@pytest.mark.slow
def test_no_graph_has_h133_on_seven_vertices():
    assert scan_h133(7).confirmed


def test_vd_divergences_are_pure():
    for G in vd_convention_divergences(5):
        assert is_pure(independence_complex(G))
