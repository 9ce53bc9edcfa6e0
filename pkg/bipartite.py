"""
Bipartite graphs: pure orders and crosses, the Cohen-Macaulay and Buchsbaum
classifiers, compression, extrusion and the odd-hole obstruction.

A pure order pairs every non-isolated vertex x_i with a neighbour y_i on the
other side. Both conditions that make an order pure (the matching edges and
the transitivity of x_i y_j, x_j y_k => x_i y_k) are unchanged when the pairs
are re-indexed simultaneously, so an order is really a perfect matching; the
index order only matters for triangularity (x_i y_j => i <= j), which is a
topological sort of the pair relation.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional, Tuple

import networkx as nx

from complex_core import f_vector, h_vector, independence_complex, is_pure, pad
from errors import BudgetExceeded, DomainError, ParseError
from graph_core import (
    Graph,
    bipartition,
    connected_components,
    degree,
    find_odd_hole,
    induced_subgraph,
    is_balanced_complete_bipartite,
    isolated_vertices,
    mask_of,
)
from homology import is_cm

logger = logging.getLogger(__name__)

DEFAULT_EDGE_BUDGET = 20


# ---------- Pure orders ----------
@dataclass(frozen=True)
class PureOrder:
    x: Tuple[int, ...]
    y: Tuple[int, ...]
    z: Tuple[int, ...] = ()

    def pairs(self) -> List[Tuple[int, int]]:
        return list(zip(self.x, self.y))

    def to_json(self, G: Optional[Graph] = None) -> Dict[str, Any]:
        out: Dict[str, Any] = {"x": list(self.x), "y": list(self.y), "z": list(self.z)}
        if G is not None and G.labels is not None:
            out["labels"] = {
                "x": [G.label(v) for v in self.x],
                "y": [G.label(v) for v in self.y],
                "z": [G.label(v) for v in self.z],
            }
        return out

    @classmethod
    def from_json(cls, obj: Any) -> "PureOrder":
        try:
            return cls(tuple(obj["x"]), tuple(obj["y"]), tuple(obj.get("z", ())))
        except (TypeError, KeyError) as e:
            raise ParseError(f"not a pure order: {e}") from e


def _require_bipartite(G: Graph) -> Tuple[frozenset, frozenset]:
    parts = bipartition(G)
    if parts is None:
        raise DomainError("graph is not bipartite")
    return parts


def pure_order_problem(G: Graph, order: PureOrder) -> Optional[str]:
    """None if order is a pure order of G, else the first violated condition."""
    x, y, z = order.x, order.y, order.z
    if len(x) != len(y):
        return "x and y have different lengths"
    listed = list(x) + list(y) + list(z)
    if sorted(listed) != list(range(G.n)):
        return "x, y, z do not partition the vertex set"
    if tuple(sorted(z)) != isolated_vertices(G):
        return "z is not exactly the set of isolated vertices"
    if any(G.adj[a] & mask_of(x) for a in x) or any(G.adj[b] & mask_of(y) for b in y):
        return "x or y is not an independent set"
    n = len(x)
    for i in range(n):
        if not G.has_edge(x[i], y[i]):
            return f"x{i + 1} y{i + 1} is not an edge"
    for i in range(n):
        for j in range(n):
            if j == i or not G.has_edge(x[i], y[j]):
                continue
            for k in range(n):
                if k in (i, j):
                    continue
                if G.has_edge(x[j], y[k]) and not G.has_edge(x[i], y[k]):
                    return f"x{i + 1} y{j + 1} and x{j + 1} y{k + 1} without x{i + 1} y{k + 1}"
    return None


def _perfect_matchings(G: Graph, xs: List[int], ys: List[int]) -> Iterator[Tuple[int, ...]]:
    """Every perfect matching xs -> ys, xs in order, partners ascending."""
    if len(xs) != len(ys):
        return
    nxg = G.to_networkx().subgraph(xs + ys)
    if xs and len(nx.bipartite.maximum_matching(nxg, top_nodes=xs)) // 2 < len(xs):
        return
    y_mask = mask_of(ys)
    chosen: List[int] = []

    def extend(i: int, used: int) -> Iterator[Tuple[int, ...]]:
        if i == len(xs):
            yield tuple(chosen)
            return
        free = G.adj[xs[i]] & y_mask & ~used
        while free:
            low = free & -free
            chosen.append(low.bit_length() - 1)
            yield from extend(i + 1, used | low)
            chosen.pop()
            free ^= low

    yield from extend(0, 0)


def _is_transitive(G: Graph, xs: Tuple[int, ...], ys: Tuple[int, ...]) -> bool:
    n = len(xs)
    y_idx = {y: i for i, y in enumerate(ys)}
    out = [0] * n
    for i in range(n):
        for yv, j in y_idx.items():
            if j != i and G.has_edge(xs[i], yv):
                out[i] |= 1 << j
    for i in range(n):
        for j in range(n):
            if out[i] >> j & 1:
                # x_i y_j and x_j y_k (k != i) force x_i y_k
                if out[j] & ~(1 << i) & ~out[i]:
                    return False
    return True


def _pair_digraph(G: Graph, xs: Tuple[int, ...], ys: Tuple[int, ...]) -> nx.DiGraph:
    """Pair i -> pair j whenever x_i y_j is an edge, i != j."""
    d = nx.DiGraph()
    d.add_nodes_from(range(len(xs)))
    for i, xv in enumerate(xs):
        for j, yv in enumerate(ys):
            if i != j and G.has_edge(xv, yv):
                d.add_edge(i, j)
    return d


def _component_orders(G: Graph, comp: Tuple[int, ...], v1: frozenset) -> Iterator[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    xs = [v for v in comp if v in v1]
    ys = [v for v in comp if v not in v1]
    for ys_matched in _perfect_matchings(G, xs, ys):
        pair_x = tuple(xs)
        if _is_transitive(G, pair_x, ys_matched):
            yield pair_x, ys_matched


def _order_pairs(G: Graph, xs: Tuple[int, ...], ys: Tuple[int, ...]) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Triangular ordering when the pair relation is acyclic, x-ascending otherwise."""
    d = _pair_digraph(G, xs, ys)
    if nx.is_directed_acyclic_graph(d):
        perm = list(nx.lexicographical_topological_sort(d))
    else:
        perm = list(range(len(xs)))
    return tuple(xs[i] for i in perm), tuple(ys[i] for i in perm)


def all_pure_orders(G: Graph) -> Iterator[PureOrder]:
    """One pure order per admissible matching (combined over components)."""
    v1, _ = _require_bipartite(G)
    z = isolated_vertices(G)
    comps = [c for c in connected_components(G) if len(c) > 1]

    def combine(i: int, xs: Tuple[int, ...], ys: Tuple[int, ...]) -> Iterator[PureOrder]:
        if i == len(comps):
            ox, oy = _order_pairs(G, xs, ys)
            yield PureOrder(ox, oy, z)
            return
        for cx, cy in _component_orders(G, comps[i], v1):
            yield from combine(i + 1, xs + cx, ys + cy)

    yield from combine(0, (), ())


def find_pure_order(G: Graph) -> Optional[PureOrder]:
    """
    Isolated vertices go to z; the rest needs a perfect matching between the
    sides that satisfies transitivity. Components are searched independently.
    """
    v1, _ = _require_bipartite(G)
    z = isolated_vertices(G)
    xs: Tuple[int, ...] = ()
    ys: Tuple[int, ...] = ()
    for comp in connected_components(G):
        if len(comp) == 1:
            continue
        found = next(_component_orders(G, comp, v1), None)
        if found is None:
            return None
        xs, ys = xs + found[0], ys + found[1]
    ox, oy = _order_pairs(G, xs, ys)
    return PureOrder(ox, oy, z)


def find_cross(G: Graph, order: PureOrder) -> Optional[Tuple[int, int]]:
    """(i, j), i < j, with x_i y_j and x_j y_i both edges (0-based positions)."""
    x, y = order.x, order.y
    for i in range(len(x)):
        for j in range(i + 1, len(x)):
            if G.has_edge(x[i], y[j]) and G.has_edge(x[j], y[i]):
                return i, j
    return None


def has_cross(G: Graph, order: PureOrder) -> bool:
    problem = pure_order_problem(G, order)
    if problem is not None:
        raise DomainError(f"not a pure order: {problem}")
    return find_cross(G, order) is not None


def is_cross_free(G: Graph) -> bool:
    """Decided on any single pure order; the answer does not depend on which."""
    order = find_pure_order(G)
    if order is None:
        raise DomainError("independence complex is not pure: no pure order exists")
    return find_cross(G, order) is None


def is_triangular(G: Graph, order: PureOrder) -> bool:
    return all(
        not G.has_edge(order.x[i], order.y[j])
        for i in range(len(order.x))
        for j in range(i)
    )


def triangular_order(G: Graph) -> Optional[PureOrder]:
    """A pure order with x_i y_j only for i <= j, searched over every matching."""
    for order in all_pure_orders(G):
        if is_triangular(G, order):
            return order
    return None


def degree_one_witness(G: Graph, order: PureOrder) -> Optional[Tuple[int, int]]:
    """A degree-one vertex in x and one in y."""
    xs = [v for v in order.x if degree(G, v) == 1]
    ys = [v for v in order.y if degree(G, v) == 1]
    if xs and ys:
        return xs[0], ys[0]
    return None


# ---------- Cohen-Macaulay and Buchsbaum ----------
@dataclass(frozen=True)
class CMVerdict:
    triangular: bool
    cross_free: bool
    oracle: Optional[bool]
    certificate: Optional[PureOrder]

    @property
    def consistent(self) -> bool:
        verdicts = {self.triangular, self.cross_free}
        if self.oracle is not None:
            verdicts.add(self.oracle)
        return len(verdicts) == 1

    @property
    def value(self) -> bool:
        return self.triangular


def is_cm_bipartite(G: Graph, with_oracle: bool = True) -> CMVerdict:
    """
    Three independent answers: a triangular pure order exists, some pure order
    is cross-free, and Reisner's criterion on Ind(G).
    """
    _require_bipartite(G)
    tri = triangular_order(G)
    order = find_pure_order(G)
    cross_free = order is not None and find_cross(G, order) is None
    oracle = is_cm(independence_complex(G)) if with_oracle else None
    verdict = CMVerdict(tri is not None, cross_free, oracle, tri)
    if not verdict.consistent:
        logger.error("CM verdicts disagree on %s: %s", sorted(G.edges), verdict)
    return verdict


def is_buchsbaum_bipartite(G: Graph) -> bool:
    """K_{n,n}, or Cohen-Macaulay."""
    _require_bipartite(G)
    if is_balanced_complete_bipartite(G):
        return True
    return triangular_order(G) is not None


# ---------- Compression ----------
def compression(G: Graph) -> Tuple[Graph, PureOrder]:
    """
    Contract each x_i y_i of a triangular order to x_i and drop z:
    x_i x_j (i < j) is an edge iff x_i y_j is. Checks h(Ind G) = f(Ind G_check).
    """
    _require_bipartite(G)
    order = triangular_order(G)
    if order is None:
        raise DomainError("compression needs a Cohen-Macaulay bipartite graph")
    n = len(order.x)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if G.has_edge(order.x[i], order.y[j])]
    labels = [G.label(v) for v in order.x] if G.labels is not None else None
    compressed = Graph.from_edges(n, edges, labels)

    h = h_vector(independence_complex(G))
    f = f_vector(independence_complex(compressed))
    if h != pad(f, len(h)):
        raise AssertionError(f"h(Ind G) = {h} but f(Ind G_check) = {f}")
    return compressed, order


def compress(G: Graph) -> Graph:
    return compression(G)[0]


# ---------- Extrusion ----------
@dataclass(frozen=True)
class Extrusion:
    """
    Bipartite double of base: x_i = i, y_i = n + i. Base edges are taken in
    sorted order; bit k of word orients edge k = (i, j), i < j, as x_i y_j
    when 0 and as x_j y_i when 1.
    """

    base: Graph
    word: int
    result: Graph = field(compare=False)

    def oriented_edges(self) -> List[Tuple[int, int]]:
        """(a, b) meaning x_a y_b, in base edge order."""
        out = []
        for k, (i, j) in enumerate(self.base.sorted_edges()):
            out.append((j, i) if self.word >> k & 1 else (i, j))
        return out

    def to_json(self) -> Dict[str, Any]:
        return {
            "word": self.word,
            "oriented": [[a, b] for a, b in self.oriented_edges()],
            "edges": [list(e) for e in self.result.sorted_edges()],
            "labels": list(self.result.labels) if self.result.labels is not None else None,
        }


def extrusion(G: Graph, word: int) -> Extrusion:
    n = G.n
    edges = [(i, n + i) for i in range(n)]
    for k, (i, j) in enumerate(G.sorted_edges()):
        edges.append((j, n + i) if word >> k & 1 else (i, n + j))
    labels = [G.label(v) for v in range(n)] + [G.label(v) + "'" for v in range(n)]
    return Extrusion(G, word, Graph.from_edges(2 * n, edges, labels))


def _check_budget(G: Graph, budget: int) -> None:
    if len(G.edges) > budget:
        raise BudgetExceeded("extrusion search edge count", len(G.edges), budget)


def extrusions(G: Graph, budget: int = DEFAULT_EDGE_BUDGET) -> Iterator[Extrusion]:
    _check_budget(G, budget)
    for word in range(1 << len(G.edges)):
        yield extrusion(G, word)


def _pure_words(G: Graph, start: int, stop: int, first_only: bool) -> List[int]:
    hits: List[int] = []
    for word in range(start, stop):
        if is_pure(independence_complex(extrusion(G, word).result)):
            hits.append(word)
            if first_only:
                break
    return hits


@dataclass(frozen=True)
class ExtrusionSearch:
    result: Optional[Extrusion]
    candidates_tried: int
    total: int
    pure_words: Tuple[int, ...] = ()


def is_cm_extrudable(
    G: Graph,
    budget: int = DEFAULT_EDGE_BUDGET,
    jobs: int = 1,
    find_all: bool = False,
) -> ExtrusionSearch:
    """
    Walk the orientation words in order and stop at the first extrusion with a
    pure independence complex (extrusions are cross-free, so pure means CM).
    The outcome does not depend on jobs.
    """
    _check_budget(G, budget)
    total = 1 << len(G.edges)
    if jobs <= 1 or total < 256:
        hits = _pure_words(G, 0, total, not find_all)
    else:
        chunk = max(64, total // (jobs * 8))
        ranges = [(s, min(total, s + chunk)) for s in range(0, total, chunk)]
        hits = []
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(_pure_words, G, s, e, not find_all) for s, e in ranges]
            for fut in futures:
                hits.extend(fut.result())
                if hits and not find_all:
                    for rest in futures:
                        rest.cancel()
                    break
    if not hits:
        return ExtrusionSearch(None, total, total)
    first = hits[0]
    tried = total if find_all else first + 1
    return ExtrusionSearch(extrusion(G, first), tried, total, tuple(hits))


def whisker_extrusion(G: Graph) -> Extrusion:
    """Orient every edge from the V1 endpoint: the extrusion is G whiskered at every vertex."""
    v1, _ = _require_bipartite(G)
    word = 0
    for k, (i, j) in enumerate(G.sorted_edges()):
        if i not in v1:
            word |= 1 << k
    return extrusion(G, word)


def bipartite_face_vector_as_h(G: Graph) -> Extrusion:
    """A bipartite graph whose Ind has h-vector f(Ind G): the whisker extrusion."""
    ext = whisker_extrusion(G)
    f = f_vector(independence_complex(G))
    h = h_vector(independence_complex(ext.result))
    if h != pad(f, len(h)):
        raise AssertionError(f"h(Ind G_hat) = {h} but f(Ind G) = {f}")
    return ext


# ---------- Odd holes ----------
@dataclass(frozen=True)
class ObstructionResult:
    status: str  # "confirmed" | "inapplicable"
    hole: Tuple[int, ...] = ()
    mode: str = ""  # "graph": every extrusion of G; "hole": every extrusion of the hole
    candidates: int = 0


def odd_hole_obstruction(G: Graph, budget: int = DEFAULT_EDGE_BUDGET, jobs: int = 1) -> ObstructionResult:
    """
    With an odd hole present, confirm that no extrusion is pure: exhaustively on
    G when its edge count fits the budget, else on the hole itself.
    """
    hole = find_odd_hole(G)
    if hole is None:
        return ObstructionResult("inapplicable")
    if len(G.edges) <= budget:
        target, mode = G, "graph"
    else:
        target, mode = induced_subgraph(G, mask_of(hole)).graph, "hole"
        _check_budget(target, budget)
    search = is_cm_extrudable(target, budget, jobs)
    if search.result is not None:
        raise AssertionError(f"pure extrusion word {search.result.word} despite odd hole {hole}")
    return ObstructionResult("confirmed", hole, mode, search.candidates_tried)
