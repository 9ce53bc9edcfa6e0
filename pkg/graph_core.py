from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from errors import DomainError

logger = logging.getLogger(__name__)

# Vertex sets are machine-word bitsets; everything downstream is subset-heavy.
MAX_VERTICES = 64

Edge = Tuple[int, int]


# ---------- Bitset helpers ----------
def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> Tuple[int, ...]:
    """Indices of the set bits, ascending."""
    out: List[int] = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def submasks(mask: int) -> Iterator[int]:
    """All submasks of mask, including 0 and mask itself."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


# ---------- Graph ----------
@dataclass(frozen=True)
class Graph:
    """
    Finite simple graph on vertices 0..n-1.
    Labels are cosmetic: they never take part in equality.
    """

    n: int
    edges: FrozenSet[Edge]
    labels: Optional[Tuple[str, ...]] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DomainError(f"vertex count must be non-negative, got {self.n}")
        if self.n > MAX_VERTICES:
            raise DomainError(f"vertex count {self.n} exceeds the {MAX_VERTICES}-vertex cap")
        for u, v in self.edges:
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < v < self.n):
                raise DomainError(f"edge ({u}, {v}) is not a normalised pair below n={self.n}")
        if self.labels is not None and len(self.labels) != self.n:
            raise DomainError(f"expected {self.n} labels, got {len(self.labels)}")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels: Optional[Sequence[str]] = None) -> "Graph":
        """Build from any iterable of pairs; rejects self-loops and duplicates."""
        seen = set()
        for e in edges:
            if len(e) != 2:
                raise DomainError(f"edge {tuple(e)!r} is not a pair")
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise DomainError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise DomainError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise DomainError(f"duplicate edge {key}")
            seen.add(key)
        return cls(n, frozenset(seen), tuple(labels) if labels is not None else None)

    @cached_property
    def adj(self) -> Tuple[int, ...]:
        """Neighbourhood bitmask per vertex."""
        rows = [0] * self.n
        for u, v in self.edges:
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return tuple(rows)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def sorted_edges(self) -> List[Edge]:
        return sorted(self.edges)

    def with_labels(self, labels: Sequence[str]) -> "Graph":
        return Graph(self.n, self.edges, tuple(labels))

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    @classmethod
    def from_networkx(cls, g: nx.Graph) -> "Graph":
        """Nodes are relabelled 0..n-1 in sorted order; original names become labels."""
        try:
            nodes = sorted(g.nodes())
        except TypeError:
            nodes = sorted(g.nodes(), key=str)
        index = {u: i for i, u in enumerate(nodes)}
        return cls.from_edges(len(nodes), [(index[u], index[v]) for u, v in g.edges()], [str(u) for u in nodes])


def _check_vertex(G: Graph, v: int) -> None:
    if not (0 <= v < G.n):
        raise DomainError(f"vertex {v} out of range for n={G.n}")


def _check_vertex_set(G: Graph, S: Iterable[int]) -> int:
    m = 0
    for v in S:
        _check_vertex(G, v)
        m |= 1 << v
    return m


# ---------- Neighbourhoods and subgraphs ----------
def neighborhood(G: Graph, v: int) -> FrozenSet[int]:
    _check_vertex(G, v)
    return frozenset(members(G.adj[v]))


def degree(G: Graph, v: int) -> int:
    _check_vertex(G, v)
    return popcount(G.adj[v])


def isolated_vertices(G: Graph) -> Tuple[int, ...]:
    return tuple(v for v in range(G.n) if G.adj[v] == 0)


def is_independent(G: Graph, mask: int) -> bool:
    rest = mask
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        if G.adj[v] & mask:
            return False
        rest ^= low
    return True


def is_clique(G: Graph, mask: int) -> bool:
    rest = mask
    while rest:
        low = rest & -rest
        v = low.bit_length() - 1
        if (mask & ~low) & ~G.adj[v]:
            return False
        rest ^= low
    return True


class Restriction(NamedTuple):
    """An induced subgraph plus the map new index -> original index."""

    graph: Graph
    kept: Tuple[int, ...]

    def lift(self, vertices: Iterable[int]) -> Tuple[int, ...]:
        return tuple(self.kept[v] for v in vertices)


def induced_subgraph(G: Graph, keep_mask: int) -> Restriction:
    kept = members(keep_mask & G.full_mask)
    index = {old: new for new, old in enumerate(kept)}
    edges = frozenset(
        (index[u], index[v]) for u, v in G.edges if u in index and v in index
    )
    labels = tuple(G.label(v) for v in kept) if G.labels is not None else None
    return Restriction(Graph(len(kept), edges, labels), kept)


def delete_closed(G: Graph, S: Iterable[int], closed: bool = False) -> Restriction:
    """
    G minus S (closed=False) or G minus S and every neighbour of S (closed=True),
    i.e. the two graphs of the deletion/link identities for independence complexes.
    """
    removed = _check_vertex_set(G, S)
    if closed:
        for v in members(removed):
            removed |= G.adj[v]
    return induced_subgraph(G, G.full_mask & ~removed)


def disjoint_union(G: Graph, H: Graph) -> Graph:
    shift = G.n
    edges = set(G.edges)
    edges.update((u + shift, v + shift) for u, v in H.edges)
    labels = None
    if G.labels is not None or H.labels is not None:
        labels = tuple(G.label(v) for v in range(G.n)) + tuple(H.label(v) for v in range(H.n))
    return Graph(G.n + H.n, frozenset(edges), labels)


def connected_components(G: Graph) -> List[Tuple[int, ...]]:
    """Components as sorted vertex tuples, ordered by their smallest vertex."""
    comps = [tuple(sorted(c)) for c in nx.connected_components(G.to_networkx())]
    return sorted(comps)


def is_connected(G: Graph) -> bool:
    return G.n > 0 and len(connected_components(G)) == 1


# ---------- Clique vertex-partitions ----------
@dataclass(frozen=True)
class CliquePartition:
    """Ordered cliques W_1..W_t; empty cliques are allowed."""

    cliques: Tuple[FrozenSet[int], ...]

    @classmethod
    def of(cls, cliques: Iterable[Iterable[int]]) -> "CliquePartition":
        return cls(tuple(frozenset(c) for c in cliques))

    def __len__(self) -> int:
        return len(self.cliques)

    def masks(self) -> Tuple[int, ...]:
        return tuple(mask_of(c) for c in self.cliques)

    def with_empty(self, count: int = 1) -> "CliquePartition":
        return CliquePartition(self.cliques + (frozenset(),) * count)

    def as_lists(self) -> List[List[int]]:
        return [sorted(c) for c in self.cliques]


def trivial_partition(G: Graph) -> CliquePartition:
    return CliquePartition(tuple(frozenset({v}) for v in range(G.n)))


@dataclass(frozen=True)
class PartitionReport:
    ok: bool
    clause: Optional[str] = None
    witness: Tuple[int, ...] = ()
    message: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {"ok": self.ok, "clause": self.clause, "witness": list(self.witness), "message": self.message}


def validate_partition(G: Graph, pi: CliquePartition) -> PartitionReport:
    """Check the clique vertex-partition clauses in order; never raises."""
    seen: Dict[int, int] = {}
    for i, clique in enumerate(pi.cliques):
        for v in sorted(clique):
            if not (isinstance(v, int) and 0 <= v < G.n):
                return PartitionReport(False, "range", (v,), f"clique {i} names vertex {v} outside 0..{G.n - 1}")
            if v in seen:
                return PartitionReport(False, "disjoint", (v,), f"vertex {v} is in cliques {seen[v]} and {i}")
            seen[v] = i
    missing = [v for v in range(G.n) if v not in seen]
    if missing:
        return PartitionReport(False, "cover", tuple(missing), f"vertices {missing} are in no clique")
    for i, clique in enumerate(pi.cliques):
        for u, v in itertools.combinations(sorted(clique), 2):
            if not G.has_edge(u, v):
                return PartitionReport(False, "clique", (u, v), f"clique {i}: {u} and {v} are not adjacent")
    return PartitionReport(True)


def clique_partitions(G: Graph, empty: int = 0) -> Iterator[CliquePartition]:
    """
    Every clique vertex-partition of G (as a set of non-empty cliques), each
    followed by `empty` empty cliques. Blocks are ordered by smallest vertex.
    """
    blocks: List[int] = []

    def place(v: int) -> Iterator[CliquePartition]:
        if v == G.n:
            yield CliquePartition(tuple(frozenset(members(b)) for b in blocks) + (frozenset(),) * empty)
            return
        bit = 1 << v
        for i, b in enumerate(blocks):
            if b & ~G.adj[v] == 0:
                blocks[i] = b | bit
                yield from place(v + 1)
                blocks[i] = b
        blocks.append(bit)
        yield from place(v + 1)
        blocks.pop()

    yield from place(0)


# ---------- Bipartiteness and odd holes ----------
def bipartition(G: Graph) -> Optional[Tuple[FrozenSet[int], FrozenSet[int]]]:
    """
    Two-colouring per component, the side holding the component's smallest
    vertex goes to V1 (so isolated vertices land in V1). None iff an odd cycle exists.
    """
    g = G.to_networkx()
    v1: set = set()
    v2: set = set()
    for comp in connected_components(G):
        if len(comp) == 1:
            v1.add(comp[0])
            continue
        try:
            colour = nx.bipartite.color(g.subgraph(comp))
        except nx.NetworkXError:
            return None
        anchor = colour[comp[0]]
        for v in comp:
            (v1 if colour[v] == anchor else v2).add(v)
    return frozenset(v1), frozenset(v2)


def is_bipartite(G: Graph) -> bool:
    return bipartition(G) is not None


def _cycle_order(G: Graph, mask: int) -> Optional[Tuple[int, ...]]:
    """Vertex order of the induced subgraph on mask if it is a single cycle."""
    verts = members(mask)
    for v in verts:
        if popcount(G.adj[v] & mask) != 2:
            return None
    start = verts[0]
    order = [start]
    prev, cur = -1, start
    while True:
        nbrs = [u for u in members(G.adj[cur] & mask) if u != prev]
        nxt = nbrs[0]
        if nxt == start:
            break
        order.append(nxt)
        prev, cur = cur, nxt
    if len(order) != len(verts):
        return None
    return tuple(order)


def find_odd_hole(G: Graph) -> Optional[Tuple[int, ...]]:
    """Exhaustive search over vertex subsets of odd size >= 5; returns a cycle or None."""
    for k in range(5, G.n + 1, 2):
        for combo in itertools.combinations(range(G.n), k):
            order = _cycle_order(G, mask_of(combo))
            if order is not None:
                return order
    return None


def has_odd_hole(G: Graph) -> bool:
    return find_odd_hole(G) is not None


# ---------- Named graphs ----------
def empty_graph(n: int) -> Graph:
    return Graph(n, frozenset())


def complete_graph(n: int) -> Graph:
    return Graph(n, frozenset(itertools.combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise DomainError(f"a cycle needs at least 3 vertices, got {n}")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def complete_bipartite(a: int, b: int) -> Graph:
    labels = [f"x{i + 1}" for i in range(a)] + [f"y{j + 1}" for j in range(b)]
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)], labels)


def perfect_matching(k: int) -> Graph:
    labels = [f"x{i + 1}" for i in range(k)] + [f"y{i + 1}" for i in range(k)]
    return Graph.from_edges(2 * k, [(i, k + i) for i in range(k)], labels)


def ferrers_graph(shape: Sequence[int]) -> Graph:
    """Ferrers graph of a partition: x_i ~ y_j iff j <= shape[i]."""
    parts = list(shape)
    if any(p <= 0 for p in parts) or any(a < b for a, b in zip(parts, parts[1:])):
        raise DomainError(f"not a partition: {parts}")
    rows = len(parts)
    cols = parts[0] if parts else 0
    labels = [f"x{i + 1}" for i in range(rows)] + [f"y{j + 1}" for j in range(cols)]
    edges = [(i, rows + j) for i, p in enumerate(parts) for j in range(p)]
    return Graph.from_edges(rows + cols, edges, labels)


def is_complete_bipartite(G: Graph) -> bool:
    """K_{m,n} with both sides non-empty, checked structurally."""
    parts = bipartition(G)
    if parts is None:
        return False
    v1, v2 = parts
    if not v1 or not v2:
        return False
    return len(G.edges) == len(v1) * len(v2)


def is_balanced_complete_bipartite(G: Graph) -> bool:
    """G is K_{n,n} for some n >= 1."""
    parts = bipartition(G)
    return parts is not None and is_complete_bipartite(G) and len(parts[0]) == len(parts[1])
