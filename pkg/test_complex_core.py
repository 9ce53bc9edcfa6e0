from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from complex_core import (
    SimplicialComplex,
    cone,
    deletion,
    dim,
    euler_characteristic,
    f_from_h,
    f_vector,
    faces,
    faces_by_dimension,
    flag_graph,
    h_from_f,
    h_polynomial,
    h_vector,
    hilbert_numerator,
    hilbert_series,
    independence_complex,
    is_cone,
    is_flag,
    is_pure,
    join,
    link,
    minimal_nonfaces,
    pad,
    stanley_reisner_generators,
    strip_zeros,
)
from errors import DomainError
from formats import read_graph
from graph_core import Graph, complete_bipartite, complete_graph, cycle_graph, delete_closed, empty_graph, mask_of
from search import enumerate_graphs
from test_graph_core import graphs

TRIANGLE_BOUNDARY = SimplicialComplex.from_faces(3, [[0, 1], [0, 2], [1, 2]])


@st.composite
def complexes(draw, max_n: int = 5):
    n = draw(st.integers(min_value=0, max_value=max_n))
    subsets = st.lists(st.integers(min_value=0, max_value=max(n - 1, 0)), unique=True, max_size=n)
    faces_ = draw(st.lists(subsets, min_size=1, max_size=5))
    return SimplicialComplex.from_faces(n, faces_)


# ---------- construction ----------
def test_void_and_empty_are_distinct():
    assert SimplicialComplex.void(2) != SimplicialComplex.empty(2)
    assert f_vector(SimplicialComplex.empty()) == (1,)
    with pytest.raises(DomainError):
        f_vector(SimplicialComplex.void())


def test_facets_must_be_an_antichain():
    with pytest.raises(DomainError):
        SimplicialComplex(3, frozenset({0b011, 0b001}))
    assert SimplicialComplex.from_faces(3, [[0], [0, 1]]).sorted_facets() == [(0, 1)]


# ---------- independence complexes ----------
def test_independence_complex_examples():
    assert independence_complex(complete_graph(3)).sorted_facets() == [(0,), (1,), (2,)]
    assert independence_complex(empty_graph(0)) == SimplicialComplex.empty()
    assert independence_complex(complete_bipartite(2, 2)).sorted_facets() == [(0, 1), (2, 3)]


@given(graphs())
def test_flag_reconstruction(G):
    delta = independence_complex(G)
    assert is_flag(delta)
    assert flag_graph(delta) == G


# ---------- f and h ----------
def test_f_vector_examples():
    assert f_vector(TRIANGLE_BOUNDARY) == (1, 3, 3)
    assert f_vector(SimplicialComplex.simplex([0, 1, 2])) == (1, 3, 3, 1)


def test_h_vector_examples(data_path):
    tau = independence_complex(read_graph(data_path("c3_tau.txt")))
    assert len(faces(tau)) == 20
    assert h_vector(tau) == (1, 3, 0, 0)
    assert h_vector(tau) == pad(f_vector(independence_complex(complete_graph(3))), 4)
    assert h_vector(SimplicialComplex.simplex(range(4))) == (1, 0, 0, 0, 0)
    ferrers = independence_complex(read_graph(data_path("ferrers.json")))
    assert h_vector(ferrers) == (1, 3, 0, 0)
    assert strip_zeros(h_vector(ferrers)) == (1, 3)
    assert hilbert_numerator(ferrers) == h_vector(ferrers)


def test_f_from_h_examples():
    assert f_from_h((1, 3, 0, 0)) == (1, 6, 9, 4)
    assert f_from_h((1, 0, 0, 0)) == (1, 3, 3, 1)
    assert f_from_h(h_vector(TRIANGLE_BOUNDARY)) == (1, 3, 3)


@given(complexes(max_n=8))
@settings(max_examples=60)
def test_h_f_inversion(delta):
    f = f_vector(delta)
    assert f_from_h(h_from_f(f)) == f
    if is_pure(delta):
        assert sum(h_vector(delta)) == f[-1]


def test_faces_by_dimension_is_sorted():
    buckets = faces_by_dimension(TRIANGLE_BOUNDARY)
    assert buckets == [[()], [(0,), (1,), (2,)], [(0, 1), (0, 2), (1, 2)]]


def test_euler_characteristic():
    assert euler_characteristic(TRIANGLE_BOUNDARY) == 0
    assert euler_characteristic(SimplicialComplex.simplex([0, 1])) == 1


# ---------- link, deletion, join ----------
def test_link_examples():
    k22 = independence_complex(complete_bipartite(2, 2))
    lk = link(k22, [0])
    assert lk.sorted_facets() == [(1,)]
    rest = delete_closed(complete_bipartite(2, 2), [0], closed=True)
    assert [rest.lift(F) for F in independence_complex(rest.graph).sorted_facets()] == [(1,)]
    assert link(k22, []) == k22
    with pytest.raises(DomainError):
        link(k22, [0, 2])


def test_deletion_examples():
    boundary = SimplicialComplex.from_faces(4, [[0, 1], [0, 2], [1, 2]])
    assert deletion(boundary, [3]) == boundary
    assert deletion(boundary, [0]).sorted_facets() == [(1, 2)]
    with pytest.raises(DomainError):
        deletion(boundary, [])


def _check_link_and_deletion(G):
    delta = independence_complex(G)
    for v in range(G.n):
        dl = delete_closed(G, [v])
        expected_dl = {mask_of(dl.lift(F)) for F in independence_complex(dl.graph).sorted_facets()}
        assert deletion(delta, [v]).facets == frozenset(expected_dl), (sorted(G.edges), v)
        lk = delete_closed(G, [v], closed=True)
        expected_lk = {mask_of(lk.lift(F)) for F in independence_complex(lk.graph).sorted_facets()}
        assert link(delta, [v]).facets == frozenset(expected_lk), (sorted(G.edges), v)


def test_link_and_deletion_of_independence_complexes():
    for n in range(1, 7):
        for G in enumerate_graphs(n):
            _check_link_and_deletion(G)


@pytest.mark.slow
def test_link_and_deletion_of_independence_complexes_on_seven():
    for G in enumerate_graphs(7):
        _check_link_and_deletion(G)


def test_join_examples():
    point = SimplicialComplex.simplex([0])
    assert join(TRIANGLE_BOUNDARY, SimplicialComplex.empty()) == TRIANGLE_BOUNDARY
    assert join(point, point) == SimplicialComplex.simplex([0, 1])
    three_points = SimplicialComplex.from_faces(3, [[0], [1], [2]])
    doubled = join(three_points, three_points)
    assert len(doubled.facets) == 9
    assert h_vector(doubled) == (1, 4, 4)
    assert join(point, SimplicialComplex.void(1)).is_void


def all_complexes(n: int):
    """Every non-void complex on range(n), one per antichain of vertex sets."""

    def extend(start, chosen):
        if chosen:
            yield SimplicialComplex(n, frozenset(chosen))
        for m in range(start, 1 << n):
            if all(m & c not in (m, c) for c in chosen):
                yield from extend(m + 1, chosen + [m])

    yield from extend(0, [])


def test_all_complexes_counts():
    assert [len(list(all_complexes(n))) for n in range(4)] == [1, 2, 5, 19]


def _check_join(pool):
    polys = [(c, h_polynomial(c)) for c in pool]
    for a, pa in polys:
        for b, pb in polys:
            assert h_polynomial(join(a, b)) == pa * pb, (a.sorted_facets(), b.sorted_facets())


def test_join_multiplies_h_polynomials():
    _check_join([c for n in range(4) for c in all_complexes(n)])


@pytest.mark.slow
def test_join_multiplies_h_polynomials_on_four():
    _check_join([c for n in range(5) for c in all_complexes(n)])



def test_cone():
    c = cone(TRIANGLE_BOUNDARY)
    assert is_cone(c) and not is_cone(TRIANGLE_BOUNDARY)
    assert dim(c) == 2


# ---------- purity and Stanley-Reisner ----------
def test_purity_and_generators():
    c5 = independence_complex(cycle_graph(5))
    assert is_pure(c5)
    assert stanley_reisner_generators(c5) == sorted(cycle_graph(5).sorted_edges())
    assert not is_pure(SimplicialComplex.from_faces(3, [[0, 1], [2]]))
    assert minimal_nonfaces(SimplicialComplex.simplex([0, 1, 2])) == []
    assert not is_flag(TRIANGLE_BOUNDARY)
    assert minimal_nonfaces(TRIANGLE_BOUNDARY) == [(0, 1, 2)]
    with pytest.raises(DomainError):
        flag_graph(TRIANGLE_BOUNDARY)


def test_isolated_vertices_are_cone_points():
    G = Graph.from_edges(3, [(0, 1)])
    delta = independence_complex(G)
    assert all(F & 0b100 for F in delta.facets)
    assert flag_graph(delta) == G


def test_pad_rejects_long_vectors():
    with pytest.raises(DomainError):
        pad((1, 2, 3), 2)


def test_hilbert_series():
    t = sp.Symbol("t")
    point = SimplicialComplex.simplex([0])
    assert sp.simplify(hilbert_series(point) - 1 / (1 - t)) == 0
    assert sp.simplify(hilbert_series(TRIANGLE_BOUNDARY) - (1 + t + t**2) / (1 - t) ** 2) == 0
    # coefficient of t^k counts monomials supported on faces: 3k for k >= 1
    coeffs = sp.Poly(sp.series(hilbert_series(TRIANGLE_BOUNDARY), t, 0, 5).removeO(), t).all_coeffs()[::-1]
    assert coeffs == [1, 3, 6, 9, 12]
